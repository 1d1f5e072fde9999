use super::{rhs_three, rhs_two, FieldSpec};
use crate::error::{Error, Result};
use crate::pauli::{bloch_length, CouplingConstants, RTensor, RTensor2};

/// Largest admissible change of the generalized Bloch length over a run.
pub const DRIFT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Classical fixed-step fourth-order Runge-Kutta.
    Rk4,
    /// Dormand-Prince 5(4) with local error control, landing on every sample.
    Rk45,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rk4" => Ok(Method::Rk4),
            "rk45" | "dopri5" => Ok(Method::Rk45),
            _ => Err(Error::Domain(format!("unknown integration method '{s}'"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Rk4 => "rk4",
            Method::Rk45 => "rk45",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub tau_max: f64,
    /// Fixed step for RK4; initial and maximum step for RK45.
    pub dt: f64,
    /// Steps between recorded samples (RK4). The sample spacing is `dt * sample_every`.
    pub sample_every: usize,
    pub method: Method,
    /// Local error tolerance (absolute and relative) for RK45.
    pub tolerance: f64,
    pub drift_tolerance: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            tau_max: 30.0,
            dt: 1e-3,
            sample_every: 10,
            method: Method::Rk4,
            tolerance: 1e-12,
            drift_tolerance: DRIFT_TOL,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Domain(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.tau_max > 0.0 && self.tau_max.is_finite()) {
            return Err(Error::Domain(format!("tau_max must be positive, got {}", self.tau_max)));
        }
        if self.sample_every == 0 {
            return Err(Error::Domain("sample_every must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }

    /// Number of `dt` steps covering `[0, tau_max]`.
    pub fn total_steps(&self) -> usize {
        (self.tau_max / self.dt).round().max(1.0) as usize
    }

    pub fn sample_spacing(&self) -> f64 {
        self.dt * self.sample_every as f64
    }

    /// Sample times `0, Δ, 2Δ, …` up to `tau_max`.
    pub fn sample_taus(&self) -> Vec<f64> {
        let steps = self.total_steps();
        (0..=steps)
            .step_by(self.sample_every)
            .map(|i| i as f64 * self.dt)
            .collect()
    }
}

/// A sampled trajectory plus derived per-sample channels.
#[derive(Debug, Clone, Default)]
pub struct TimeSeries {
    taus: Vec<f64>,
    states: Vec<RTensor>,
    channels: Vec<(String, Vec<f64>)>,
}

impl TimeSeries {
    pub fn new(taus: Vec<f64>, states: Vec<RTensor>) -> Result<Self> {
        if taus.len() != states.len() {
            return Err(Error::Validation(format!(
                "{} sample times but {} states",
                taus.len(),
                states.len()
            )));
        }
        if taus.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Validation("sample times must be strictly increasing".into()));
        }
        Ok(Self { taus, states, channels: Vec::new() })
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn states(&self) -> &[RTensor] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// Adds or replaces a named channel.
    pub fn push_channel(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::Validation(format!(
                "channel has {} values for {} samples",
                values.len(),
                self.len()
            )));
        }
        let name = name.into();
        match self.channels.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = values,
            None => self.channels.push((name, values)),
        }
        Ok(())
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.channels.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    pub fn channels(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.channels.iter().map(|(n, v)| (n.as_str(), v.as_slice()))
    }

    /// `max_τ |b(τ) − b(0)|` over the recorded samples.
    pub fn bloch_drift(&self) -> f64 {
        let Some(first) = self.states.first() else {
            return 0.0;
        };
        let b0 = bloch_length(first);
        self.states
            .iter()
            .map(|r| (bloch_length(r) - b0).abs())
            .fold(0.0, f64::max)
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * k[i])
}

fn rk4_step<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    h: f64,
) -> [f64; N] {
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = f(t + h, &axpy(y, h, &k3));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One Dormand-Prince attempt; returns the fifth-order solution and the
/// scaled RMS error estimate.
fn dopri_attempt<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    h: f64,
    tol: f64,
) -> ([f64; N], f64) {
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, y);
    for s in 1..7 {
        let stage: [f64; N] = std::array::from_fn(|i| {
            y[i] + h * (0..s).map(|p| A[s][p] * k[p][i]).sum::<f64>()
        });
        if s == 6 {
            // the last row of A holds the fifth-order weights (FSAL)
            k[6] = f(t + C[6] * h, &stage);
            let err = (0..N)
                .map(|i| {
                    let e = h * (0..7).map(|p| E[p] * k[p][i]).sum::<f64>();
                    let sc = tol * (1.0 + y[i].abs().max(stage[i].abs()));
                    (e / sc).powi(2)
                })
                .sum::<f64>();
            return (stage, (err / N as f64).sqrt());
        }
        k[s] = f(t + C[s] * h, &stage);
    }
    unreachable!()
}

/// Integrates `y' = f(τ, y)` and reports the state at each sample time.
fn drive<const N: usize>(
    y0: [f64; N],
    cfg: &IntegratorConfig,
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    mut on_sample: impl FnMut(f64, &[f64; N]),
) -> Result<()> {
    cfg.validate()?;
    let mut y = y0;
    on_sample(0.0, &y);
    match cfg.method {
        Method::Rk4 => {
            for i in 0..cfg.total_steps() {
                y = rk4_step(&f, i as f64 * cfg.dt, &y, cfg.dt);
                if (i + 1) % cfg.sample_every == 0 {
                    on_sample((i + 1) as f64 * cfg.dt, &y);
                }
            }
        }
        Method::Rk45 => {
            let taus = cfg.sample_taus();
            let mut h = cfg.dt;
            for w in taus.windows(2) {
                let (mut t, target) = (w[0], w[1]);
                while t < target {
                    let step = h.min(target - t);
                    let (candidate, err) = dopri_attempt(&f, t, &y, step, cfg.tolerance);
                    let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    if err <= 1.0 {
                        y = candidate;
                        t = if target - t - step < 1e-14 * target.max(1.0) { target } else { t + step };
                        h = (step * factor).min(cfg.dt);
                    } else {
                        h = step * factor;
                        if h < 1e-14 {
                            return Err(Error::Domain("RK45 step size underflow".into()));
                        }
                    }
                }
                on_sample(target, &y);
            }
        }
    }
    Ok(())
}

/// Integrates the three-qubit coefficient equations from `r0`, recording the
/// state and the generalized Bloch length `b` at each sample. Fails with
/// [`Error::Accuracy`] if `b` drifts by more than `cfg.drift_tolerance`.
pub fn integrate(
    r0: &RTensor,
    spec: &FieldSpec,
    couplings: &CouplingConstants,
    cfg: &IntegratorConfig,
) -> Result<TimeSeries> {
    if r0.get(0, 0, 0) != 1.0 {
        return Err(Error::Validation("initial tensor is not normalized".into()));
    }
    let mut taus = Vec::new();
    let mut states = Vec::new();
    drive(
        *r0.coeffs(),
        cfg,
        |t, y| rhs_three(&RTensor::from_raw(*y), &spec.field_at(t), couplings),
        |t, y| {
            taus.push(t);
            states.push(RTensor::from_raw(*y));
        },
    )?;
    let b: Vec<f64> = states.iter().map(bloch_length).collect();
    let mut series = TimeSeries::new(taus, states)?;
    series.push_channel("b", b)?;
    let drift = series.bloch_drift();
    if drift > cfg.drift_tolerance {
        return Err(Error::Accuracy { drift, tolerance: cfg.drift_tolerance });
    }
    Ok(series)
}

/// Integrates the two-qubit `(e, p)` equations, driven by the `e` and `p`
/// components of `spec`.
pub fn integrate_two(
    r0: &RTensor2,
    spec: &FieldSpec,
    j_ep: f64,
    cfg: &IntegratorConfig,
) -> Result<(Vec<f64>, Vec<RTensor2>)> {
    if r0.get(0, 0) != 1.0 {
        return Err(Error::Validation("initial tensor is not normalized".into()));
    }
    let mut taus = Vec::new();
    let mut states = Vec::new();
    drive(
        *r0.coeffs(),
        cfg,
        |t, y| {
            let f = spec.field_at(t);
            rhs_two(&RTensor2::from_raw(*y), f.e, f.p, j_ep)
        },
        |t, y| {
            taus.push(t);
            states.push(RTensor2::from_raw(*y));
        },
    )?;
    Ok((taus, states))
}
