//! Driving fields, equations of motion for the real coefficient tensors, and
//! trajectory integration in dimensionless time `τ = ωt`.
//!
//! All frequencies (field amplitudes, exchange constants) are expressed in
//! units of the drive frequency `ω`.

mod integrate;
mod oracle;
mod rhs;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use integrate::{integrate, integrate_two, IntegratorConfig, Method, TimeSeries, DRIFT_TOL};
pub use oracle::{hamiltonian_at, propagate_direct, unitary_step};
pub use rhs::{rhs_three, rhs_two};

use crate::error::{Error, Result};

pub type FieldFn = Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>;

/// Time dependence of the base field `H(τ)`.
#[derive(Clone)]
pub enum FieldKind {
    /// `H = −(ω₁ cos τ, −ω₁ sin τ, ω₀)`, co-rotating with the Larmor
    /// precession of qubit `e`.
    Resonant,
    /// `H = −(ω₁ cos τ, ω₁ sin τ, ω₀)`, counter-rotating.
    NonResonant,
    /// `H = (0, 0, ω₀)`.
    ConstantZ,
    /// Caller-supplied `τ ↦ H(τ)`.
    Custom(FieldFn),
}

impl FieldKind {
    pub fn label(&self) -> &'static str {
        match self {
            FieldKind::Resonant => "R",
            FieldKind::NonResonant => "NR",
            FieldKind::ConstantZ => "ConstantZ",
            FieldKind::Custom(_) => "Custom",
        }
    }
}

impl fmt::Debug for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl PartialEq for FieldKind {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldKind::Custom(a), FieldKind::Custom(b)) => Arc::ptr_eq(a, b),
            _ => self.label() == other.label(),
        }
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r" | "resonant" => Ok(FieldKind::Resonant),
            "nr" | "nonresonant" | "non-resonant" => Ok(FieldKind::NonResonant),
            "constantz" | "constant-z" | "z" => Ok(FieldKind::ConstantZ),
            _ => Err(Error::Domain(format!("unknown field kind '{s}'"))),
        }
    }
}

/// Per-qubit fields `h^e, h^p, h^n` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldTriple {
    pub e: [f64; 3],
    pub p: [f64; 3],
    pub n: [f64; 3],
}

/// Field model plus the per-qubit multipliers `h^q = c_q H`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub kind: FieldKind,
    /// Longitudinal amplitude `ω₀/ω`.
    pub omega0: f64,
    /// Transverse amplitude `ω₁/ω`.
    pub omega1: f64,
    /// Multipliers for qubits `e, p, n`.
    pub multipliers: [f64; 3],
}

impl FieldSpec {
    pub const DEFAULT_OMEGA0: f64 = 1.0;
    pub const DEFAULT_OMEGA1: f64 = 0.3;
    pub const DEFAULT_MULTIPLIERS: [f64; 3] = [1.0, 2.0, 4.0];

    pub fn new(kind: FieldKind) -> Self {
        Self {
            kind,
            omega0: Self::DEFAULT_OMEGA0,
            omega1: Self::DEFAULT_OMEGA1,
            multipliers: Self::DEFAULT_MULTIPLIERS,
        }
    }

    pub fn resonant() -> Self {
        Self::new(FieldKind::Resonant)
    }

    pub fn non_resonant() -> Self {
        Self::new(FieldKind::NonResonant)
    }

    pub fn constant_z() -> Self {
        Self::new(FieldKind::ConstantZ)
    }

    pub fn custom(f: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static) -> Self {
        Self::new(FieldKind::Custom(Arc::new(f)))
    }

    pub fn with_multipliers(mut self, multipliers: [f64; 3]) -> Self {
        self.multipliers = multipliers;
        self
    }

    pub fn with_amplitudes(mut self, omega0: f64, omega1: f64) -> Self {
        self.omega0 = omega0;
        self.omega1 = omega1;
        self
    }

    /// `H(τ)` before the per-qubit multipliers.
    pub fn base_field(&self, tau: f64) -> [f64; 3] {
        let (w0, w1) = (self.omega0, self.omega1);
        match &self.kind {
            FieldKind::Resonant => [-w1 * tau.cos(), w1 * tau.sin(), -w0],
            FieldKind::NonResonant => [-w1 * tau.cos(), -w1 * tau.sin(), -w0],
            FieldKind::ConstantZ => [0.0, 0.0, w0],
            FieldKind::Custom(f) => f(tau),
        }
    }

    pub fn field_at(&self, tau: f64) -> FieldTriple {
        let h = self.base_field(tau);
        let scale = |c: f64| h.map(|v| c * v);
        FieldTriple {
            e: scale(self.multipliers[0]),
            p: scale(self.multipliers[1]),
            n: scale(self.multipliers[2]),
        }
    }

    /// Whether the Hamiltonian is independent of `τ`.
    pub fn is_static(&self) -> bool {
        match self.kind {
            FieldKind::ConstantZ => true,
            FieldKind::Resonant | FieldKind::NonResonant => self.omega1 == 0.0,
            FieldKind::Custom(_) => false,
        }
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self::resonant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn resonant_at_zero() {
        let f = FieldSpec::resonant().field_at(0.0);
        let h = [-0.3, 0.0, -1.0];
        for k in 0..3 {
            assert_abs_diff_eq!(f.e[k], h[k]);
            assert_abs_diff_eq!(f.p[k], 2.0 * h[k]);
            assert_abs_diff_eq!(f.n[k], 4.0 * h[k]);
        }
    }

    #[test]
    fn non_resonant_quarter_period() {
        let h = FieldSpec::non_resonant().base_field(FRAC_PI_2);
        assert_abs_diff_eq!(h[0], 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(h[1], -0.3, epsilon = 1e-16);
        assert_abs_diff_eq!(h[2], -1.0);
        let r = FieldSpec::resonant().base_field(FRAC_PI_2);
        assert_abs_diff_eq!(r[1], 0.3, epsilon = 1e-16);
    }

    #[test]
    fn r_and_nr_coincide_at_zero() {
        assert_eq!(
            FieldSpec::resonant().field_at(0.0),
            FieldSpec::non_resonant().field_at(0.0)
        );
    }

    #[test]
    fn custom_and_static() {
        let spec = FieldSpec::custom(|t| [t, 0.0, 1.0]).with_multipliers([1.0, 0.0, -1.0]);
        let f = spec.field_at(2.0);
        assert_eq!(f.e, [2.0, 0.0, 1.0]);
        assert_eq!(f.p, [0.0, 0.0, 0.0]);
        assert_eq!(f.n, [-2.0, -0.0, -1.0]);
        assert!(!spec.is_static());
        assert!(FieldSpec::constant_z().is_static());
        assert!(FieldSpec::resonant().with_amplitudes(1.0, 0.0).is_static());
    }

    #[test]
    fn field_kind_parse() {
        assert_eq!("NR".parse::<FieldKind>().unwrap().label(), "NR");
        assert_eq!("r".parse::<FieldKind>().unwrap().label(), "R");
        assert!("Q".parse::<FieldKind>().is_err());
    }
}
