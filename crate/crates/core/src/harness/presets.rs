//! Built-in scenarios with the reference parameters hard-coded.

use std::path::{Path, PathBuf};

use super::{check_oracle_deviation, simulate, write_csv, ScenarioConfig, DEFAULT_MEASURES};
use crate::dynamics::{FieldKind, TimeSeries};
use crate::error::{Error, Result};
use crate::measures::Channel;
use crate::pauli::{CouplingConstants, StateName};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
}

pub const PRESETS: [Preset; 5] = [
    Preset {
        name: "figure1",
        description: "m_sm for S, BS, GHZ, W and Mix(x=2/3) in the R and NR fields (10 runs)",
    },
    Preset {
        name: "figure2",
        description: "m_l(S), c3(BS), m_k(GHZ), m_b(W) in the R and NR fields (8 runs)",
    },
    Preset {
        name: "figure3",
        description: "spin-flip probability of qubit n in the R field, free vs coupled to e and p",
    },
    Preset {
        name: "rabi-check",
        description: "single resonant qubit e; flip probability against sin^2(0.15 tau)",
    },
    Preset {
        name: "fixed-point",
        description: "all-up state in a constant z field with full couplings stays stationary",
    },
];

pub fn list_presets() -> &'static [Preset] {
    &PRESETS
}

/// One output file of a preset.
#[derive(Debug, Clone, PartialEq)]
pub enum PresetJob {
    Single(ScenarioConfig),
    /// Several runs sharing a time grid, one channel each, written to one CSV.
    Overlay {
        name: String,
        channel: Channel,
        runs: Vec<(String, ScenarioConfig)>,
    },
}

impl PresetJob {
    pub fn name(&self) -> &str {
        match self {
            PresetJob::Single(cfg) => &cfg.name,
            PresetJob::Overlay { name, .. } => name,
        }
    }

    fn configs_mut(&mut self) -> Vec<&mut ScenarioConfig> {
        match self {
            PresetJob::Single(cfg) => vec![cfg],
            PresetJob::Overlay { runs, .. } => runs.iter_mut().map(|(_, c)| c).collect(),
        }
    }
}

/// Command-line adjustments applied to every run of a preset.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub oracle: Option<bool>,
    pub dt: Option<f64>,
    pub tau_max: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ScenarioConfig) -> Result<()> {
        if let Some(o) = self.oracle {
            cfg.oracle_check = o;
        }
        if let Some(dt) = self.dt {
            cfg.dt = dt;
        }
        if let Some(t) = self.tau_max {
            cfg.tau_max = t;
        }
        cfg.integrator_config().map(|_| ())
    }
}

fn field_label(kind: &FieldKind) -> &'static str {
    kind.label()
}

fn scenario(name: String, initial: StateName, field_kind: FieldKind, measures: Vec<Channel>) -> ScenarioConfig {
    ScenarioConfig {
        name,
        initial,
        x: (initial == StateName::Mix).then_some(2.0 / 3.0),
        field_kind,
        measures,
        ..ScenarioConfig::default()
    }
}

/// Expands a preset name into its jobs.
pub fn preset(name: &str) -> Result<Vec<PresetJob>> {
    let fields = [FieldKind::Resonant, FieldKind::NonResonant];
    let jobs = match name {
        "figure1" => {
            let states = [StateName::S, StateName::Bs, StateName::Ghz, StateName::W, StateName::Mix];
            states
                .iter()
                .flat_map(|&s| {
                    fields.iter().map(move |f| {
                        PresetJob::Single(scenario(
                            format!("figure1_{s}_{}", field_label(f)),
                            s,
                            f.clone(),
                            vec![Channel::MSm],
                        ))
                    })
                })
                .collect()
        }
        "figure2" => {
            let pairs = [
                (StateName::S, Channel::ML),
                (StateName::Bs, Channel::C3),
                (StateName::Ghz, Channel::MK),
                (StateName::W, Channel::MB),
            ];
            pairs
                .iter()
                .flat_map(|&(s, c)| {
                    fields.iter().map(move |f| {
                        PresetJob::Single(scenario(
                            format!("figure2_{s}_{}", field_label(f)),
                            s,
                            f.clone(),
                            vec![c],
                        ))
                    })
                })
                .collect()
        }
        "figure3" => {
            let base = scenario("figure3".into(), StateName::Polarized, FieldKind::Resonant, vec![Channel::PFlip]);
            let free = ScenarioConfig {
                name: "figure3_free".into(),
                couplings: CouplingConstants { j_en: 0.0, j_pn: 0.0, ..CouplingConstants::reference() },
                ..base.clone()
            };
            let coupled = ScenarioConfig { name: "figure3_coupled".into(), ..base };
            vec![PresetJob::Overlay {
                name: "figure3".into(),
                channel: Channel::PFlip,
                runs: vec![("p_flip_free".into(), free), ("p_flip_coupled".into(), coupled)],
            }]
        }
        "rabi-check" => vec![PresetJob::Single(ScenarioConfig {
            couplings: CouplingConstants::zero(),
            multipliers: [1.0, 0.0, 0.0],
            ..scenario("rabi-check".into(), StateName::Polarized, FieldKind::Resonant, vec![Channel::PFlipE])
        })],
        "fixed-point" => vec![PresetJob::Single(scenario(
            "fixed-point".into(),
            StateName::Polarized,
            FieldKind::ConstantZ,
            DEFAULT_MEASURES.to_vec(),
        ))],
        other => return Err(Error::Domain(format!("unknown preset '{other}'"))),
    };
    Ok(jobs)
}

/// Result of one preset job held in memory.
#[derive(Debug, Clone)]
pub struct JobOutput {
    pub name: String,
    pub series: TimeSeries,
    pub manifest_text: String,
    pub oracle_max_deviation: Option<f64>,
}

fn prefixed(prefix: &str, text: &str) -> String {
    text.lines().map(|l| format!("{prefix}.{l}\n")).collect()
}

/// Runs one job without touching the filesystem.
pub fn execute_job(job: &PresetJob) -> Result<JobOutput> {
    match job {
        PresetJob::Single(cfg) => {
            let out = simulate(cfg)?;
            Ok(JobOutput {
                name: cfg.name.clone(),
                oracle_max_deviation: out.manifest.oracle_max_deviation,
                manifest_text: out.manifest.to_text(),
                series: out.series,
            })
        }
        PresetJob::Overlay { name, channel, runs } => {
            let mut merged: Option<TimeSeries> = None;
            let mut manifest_text = String::new();
            let mut worst: Option<f64> = None;
            for (label, cfg) in runs {
                let cfg = ScenarioConfig { measures: vec![*channel], ..cfg.clone() };
                let out = simulate(&cfg)?;
                let values = out
                    .series
                    .channel(channel.name())
                    .ok_or_else(|| Error::Validation(format!("channel {channel} missing")))?
                    .to_vec();
                let target = merged.get_or_insert_with(|| {
                    TimeSeries::new(out.series.taus().to_vec(), out.series.states().to_vec())
                        .expect("grid copied from a valid series")
                });
                if target.taus() != out.series.taus() {
                    return Err(Error::Validation(format!("run {label} uses a different time grid")));
                }
                target.push_channel(label.clone(), values)?;
                manifest_text.push_str(&prefixed(label, &out.manifest.to_text()));
                if let Some(d) = out.manifest.oracle_max_deviation {
                    worst = Some(worst.map_or(d, |w: f64| w.max(d)));
                }
            }
            Ok(JobOutput {
                name: name.clone(),
                series: merged.ok_or_else(|| Error::Validation("overlay without runs".into()))?,
                manifest_text,
                oracle_max_deviation: worst,
            })
        }
    }
}

/// Expands, runs (jobs in parallel) and writes a preset; returns the CSV paths
/// in job order.
pub fn run_preset(name: &str, out_dir: &Path, overrides: &Overrides) -> Result<Vec<PathBuf>> {
    let mut jobs = preset(name)?;
    for job in &mut jobs {
        for cfg in job.configs_mut() {
            overrides.apply(cfg)?;
        }
    }
    std::fs::create_dir_all(out_dir)?;

    let results: Vec<Result<JobOutput>> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs.iter().map(|job| s.spawn(move || execute_job(job))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Validation("worker panicked".into()))))
            .collect()
    });

    let mut paths = Vec::new();
    let mut first_err = None;
    for result in results {
        match result {
            Ok(out) => {
                let csv = out_dir.join(format!("{}.csv", out.name));
                write_csv(&csv, &out.series)?;
                std::fs::write(csv.with_extension("manifest"), &out.manifest_text)?;
                if let Err(e) = check_oracle_deviation(out.oracle_max_deviation) {
                    first_err.get_or_insert(e);
                }
                paths.push(csv);
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(paths),
    }
}
