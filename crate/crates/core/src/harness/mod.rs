//! Scenario runner behind the command-line interface: configurations,
//! presets, CSV time series and run manifests.

mod config;
mod output;
mod presets;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

pub use config::parse_config;
pub use output::{format_sig, write_csv};
pub use presets::{execute_job, list_presets, preset, run_preset, JobOutput, Overrides, Preset, PresetJob, PRESETS};

use crate::dynamics::{
    integrate, propagate_direct, FieldKind, FieldSpec, IntegratorConfig, Method, TimeSeries,
};
use crate::error::{Error, Result};
use crate::measures::{Channel, PURITY_TOL};
use crate::pauli::{initial_state, purity, rho_to_r, CouplingConstants, StateName};

/// Maximum accepted deviation between the coefficient trajectory and the
/// density-matrix oracle.
pub const ORACLE_TOL: f64 = 1e-8;

pub const DEFAULT_MEASURES: [Channel; 9] = [
    Channel::MSm,
    Channel::C3,
    Channel::MB,
    Channel::MK,
    Channel::ML,
    Channel::BlochLength,
    Channel::PFlip,
    Channel::Rho11,
    Channel::Rho88,
];

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// File stem for the CSV and manifest.
    pub name: String,
    pub initial: StateName,
    pub x: Option<f64>,
    pub field_kind: FieldKind,
    pub omega0: f64,
    pub omega1: f64,
    pub couplings: CouplingConstants,
    pub multipliers: [f64; 3],
    pub tau_max: f64,
    pub dt: f64,
    pub sample_spacing: f64,
    pub method: Method,
    pub measures: Vec<Channel>,
    pub oracle_check: bool,
    /// CSV path relative to the output directory; defaults to `<name>.csv`.
    pub output: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "scenario".into(),
            initial: StateName::Ghz,
            x: None,
            field_kind: FieldKind::Resonant,
            omega0: FieldSpec::DEFAULT_OMEGA0,
            omega1: FieldSpec::DEFAULT_OMEGA1,
            couplings: CouplingConstants::reference(),
            multipliers: FieldSpec::DEFAULT_MULTIPLIERS,
            tau_max: 30.0,
            dt: 1e-3,
            sample_spacing: 0.01,
            method: Method::Rk4,
            measures: DEFAULT_MEASURES.to_vec(),
            oracle_check: false,
            output: None,
        }
    }
}

impl ScenarioConfig {
    pub fn field_spec(&self) -> FieldSpec {
        FieldSpec {
            kind: self.field_kind.clone(),
            omega0: self.omega0,
            omega1: self.omega1,
            multipliers: self.multipliers,
        }
    }

    pub fn integrator_config(&self) -> Result<IntegratorConfig> {
        let ratio = self.sample_spacing / self.dt;
        let every = ratio.round();
        if every < 1.0 || (ratio - every).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::Domain(format!(
                "sample spacing {} is not a whole multiple of dt {}",
                self.sample_spacing, self.dt
            )));
        }
        let cfg = IntegratorConfig {
            tau_max: self.tau_max,
            dt: self.dt,
            sample_every: every as usize,
            method: self.method,
            ..IntegratorConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn csv_file_name(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| PathBuf::from(format!("{}.csv", self.name)))
    }

    /// The configuration as a document accepted by [`parse_config`].
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        kv("name", format!("\"{}\"", self.name));
        kv("initial", self.initial.to_string());
        if let Some(x) = self.x {
            kv("x", format!("{x:?}"));
        }
        kv("field_kind", self.field_kind.label().to_string());
        kv("omega0", format!("{:?}", self.omega0));
        kv("omega1", format!("{:?}", self.omega1));
        kv("j_ep", format!("{:?}", self.couplings.j_ep));
        kv("j_en", format!("{:?}", self.couplings.j_en));
        kv("j_pn", format!("{:?}", self.couplings.j_pn));
        kv(
            "multipliers",
            format!("[{:?}, {:?}, {:?}]", self.multipliers[0], self.multipliers[1], self.multipliers[2]),
        );
        kv("tau_max", format!("{:?}", self.tau_max));
        kv("dt", format!("{:?}", self.dt));
        kv("sample_spacing", format!("{:?}", self.sample_spacing));
        kv("method", self.method.to_string());
        let names: Vec<&str> = self.measures.iter().map(|c| c.name()).collect();
        kv("measures", format!("[{}]", names.join(", ")));
        kv("oracle_check", if self.oracle_check { "on" } else { "off" }.to_string());
        if let Some(out) = &self.output {
            kv("output", format!("\"{}\"", out.display()));
        }
        s
    }
}

/// Record written next to every CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config: ScenarioConfig,
    pub code_version: &'static str,
    pub bloch_drift: f64,
    pub oracle_max_deviation: Option<f64>,
    pub wall_time: Duration,
}

impl RunManifest {
    /// Flat `key = value` text: the configuration echo followed by results.
    pub fn to_text(&self) -> String {
        let mut s = self.config.to_config_text();
        s.push_str(&format!("code_version = {}\n", self.code_version));
        s.push_str(&format!("bloch_drift = {:e}\n", self.bloch_drift));
        match self.oracle_max_deviation {
            Some(d) => s.push_str(&format!("oracle_max_deviation = {d:e}\n")),
            None => s.push_str("oracle_max_deviation = off\n"),
        }
        s.push_str(&format!("wall_time_s = {:.3}\n", self.wall_time.as_secs_f64()));
        s
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub series: TimeSeries,
    pub manifest: RunManifest,
}

/// Channels actually written for `cfg`: `c3` becomes `c3_formal` when the
/// initial state is mixed, since purity is conserved along the run.
pub fn effective_channels(cfg: &ScenarioConfig, initial_purity: f64) -> Vec<Channel> {
    let pure = (initial_purity - 1.0).abs() <= PURITY_TOL;
    cfg.measures
        .iter()
        .map(|&c| if c == Channel::C3 && !pure { Channel::C3Formal } else { c })
        .collect()
}

/// Integrates one scenario and evaluates its channels; optionally checks the
/// trajectory against the direct density-matrix propagator.
pub fn simulate(cfg: &ScenarioConfig) -> Result<ScenarioOutcome> {
    let started = Instant::now();
    let (rho0, r0) = initial_state(cfg.initial, cfg.x)?;
    let spec = cfg.field_spec();
    let icfg = cfg.integrator_config()?;
    let mut series = integrate(&r0, &spec, &cfg.couplings, &icfg)?;

    for channel in effective_channels(cfg, purity(&r0)) {
        let values = series
            .states()
            .iter()
            .map(|r| channel.evaluate(r))
            .collect::<Result<Vec<_>>>()?;
        series.push_channel(channel.name(), values)?;
    }

    let oracle_max_deviation = if cfg.oracle_check {
        let rhos = propagate_direct(&rho0, &spec, &cfg.couplings, series.taus(), icfg.dt / 10.0)?;
        let mut dev: f64 = 0.0;
        for (rho, r) in rhos.iter().zip(series.states()) {
            dev = dev.max(rho_to_r(rho)?.max_abs_diff(r));
        }
        Some(dev)
    } else {
        None
    };

    let manifest = RunManifest {
        config: cfg.clone(),
        code_version: env!("CARGO_PKG_VERSION"),
        bloch_drift: series.bloch_drift(),
        oracle_max_deviation,
        wall_time: started.elapsed(),
    };
    Ok(ScenarioOutcome { series, manifest })
}

/// Fails when an enabled oracle check exceeded [`ORACLE_TOL`].
pub fn check_oracle(manifest: &RunManifest) -> Result<()> {
    check_oracle_deviation(manifest.oracle_max_deviation)
}

pub fn check_oracle_deviation(deviation: Option<f64>) -> Result<()> {
    match deviation {
        Some(d) if !(d <= ORACLE_TOL) => Err(Error::OracleMismatch { deviation: d, tolerance: ORACLE_TOL }),
        _ => Ok(()),
    }
}

/// Runs a scenario, writes `<out_dir>/<output>` and its `.manifest`, and
/// returns the CSV path. The files are written before any oracle failure is
/// reported.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<(ScenarioOutcome, PathBuf)> {
    let outcome = simulate(cfg)?;
    let csv = out_dir.join(cfg.csv_file_name());
    if let Some(parent) = csv.parent() {
        std::fs::create_dir_all(parent)?;
    }
    write_csv(&csv, &outcome.series)?;
    std::fs::write(csv.with_extension("manifest"), outcome.manifest.to_text())?;
    check_oracle(&outcome.manifest)?;
    Ok((outcome, csv))
}
