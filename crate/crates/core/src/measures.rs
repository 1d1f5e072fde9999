//! Entanglement measures evaluated directly on the coefficient tensor.
//!
//! `m_SM` and `C₃` are reported unnormalized. `m_K = 4ρ₁₁ρ₈₈` coincides with
//! the three-tangle only along GHZ-initialized trajectories; elsewhere it is
//! just the product of the two extreme populations.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::{bloch_length, purity, Qubit, RTensor, RTensor2};

/// Purity deviation tolerated before `C₃` refuses a state as mixed.
pub const PURITY_TOL: f64 = 1e-8;
/// Slack allowed on populations before they are reported as unphysical.
pub const POPULATION_SLACK: f64 = 1e-10;

/// Pair cumulants `m_{ij0}`, `m_{i0j}`, `m_{0ij}`; indices `0..3` stand for
/// the spatial labels `1..=3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTensors {
    pub m_ep: [[f64; 3]; 3],
    pub m_en: [[f64; 3]; 3],
    pub m_pn: [[f64; 3]; 3],
}

/// Triple cumulant `m_{ijk}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleTensor {
    pub m3: [[[f64; 3]; 3]; 3],
}

impl TripleTensor {
    pub fn norm_sqr(&self) -> f64 {
        self.m3.iter().flatten().flatten().map(|v| v * v).sum()
    }
}

fn sq3(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

pub fn pair_tensors(r: &RTensor) -> PairTensors {
    let (e, p, n) = (r.local(Qubit::E), r.local(Qubit::P), r.local(Qubit::N));
    PairTensors {
        m_ep: std::array::from_fn(|i| std::array::from_fn(|j| r.get(i + 1, j + 1, 0) - e[i] * p[j])),
        m_en: std::array::from_fn(|i| std::array::from_fn(|j| r.get(i + 1, 0, j + 1) - e[i] * n[j])),
        m_pn: std::array::from_fn(|i| std::array::from_fn(|j| r.get(0, i + 1, j + 1) - p[i] * n[j])),
    }
}

/// `m_{ijk} = R_{ijk} − R_{i00} m_{0jk} − R_{0j0} m_{i0k} − R_{00k} m_{ij0} − R_{i00}R_{0j0}R_{00k}`.
pub fn triple_tensor(r: &RTensor) -> TripleTensor {
    let (e, p, n) = (r.local(Qubit::E), r.local(Qubit::P), r.local(Qubit::N));
    let pairs = pair_tensors(r);
    let m3 = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                r.get(i + 1, j + 1, k + 1)
                    - e[i] * pairs.m_pn[j][k]
                    - p[j] * pairs.m_en[i][k]
                    - n[k] * pairs.m_ep[i][j]
                    - e[i] * p[j] * n[k]
            })
        })
    });
    TripleTensor { m3 }
}

/// Three-particle measure `m_SM = Σ m_{ijk}²`.
pub fn m_sm(r: &RTensor) -> f64 {
    triple_tensor(r).norm_sqr()
}

/// Two-qubit measure `m = Σ (R_{ij} − R_{i0}R_{0j})²`.
pub fn m_two(r2: &RTensor2) -> f64 {
    let mut acc = 0.0;
    for i in 1..=3 {
        for j in 1..=3 {
            let m = r2.get(i, j) - r2.get(i, 0) * r2.get(0, j);
            acc += m * m;
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PurityCheck {
    /// Reject states with `|Tr ρ² − 1| > PURITY_TOL`.
    Enforce,
    /// Evaluate the pure-state formula regardless.
    Skip,
}

/// Pure-state concurrence
/// `C₃ = (1/√2) sqrt(6 − [9/4 + Σ|R_local|² + ¼ Σ R_pair²])`.
pub fn concurrence_c3(r: &RTensor, check: PurityCheck) -> Result<f64> {
    if check == PurityCheck::Enforce {
        let p = purity(r);
        if (p - 1.0).abs() > PURITY_TOL {
            return Err(Error::Domain(format!("C3 requires a pure state, Tr rho^2 = {p:.10}")));
        }
    }
    let locals: f64 = Qubit::ALL.iter().map(|&q| sq3(r.local(q))).sum();
    let mut pairs = 0.0;
    for m in 1..=3 {
        for n in 1..=3 {
            pairs += r.get(m, n, 0).powi(2) + r.get(m, 0, n).powi(2) + r.get(0, m, n).powi(2);
        }
    }
    let radicand = 6.0 - (2.25 + locals + 0.25 * pairs);
    Ok(radicand.max(0.0).sqrt() / std::f64::consts::SQRT_2)
}

/// `m_B = 1 − (|R_e|² + |R_p|² + |R_n|²)/3`.
pub fn m_b(r: &RTensor) -> f64 {
    let locals: f64 = Qubit::ALL.iter().map(|&q| sq3(r.local(q))).sum();
    (1.0 - locals / 3.0).clamp(0.0, 1.0)
}

/// Populations `(ρ₁₁, ρ₈₈)` of `|000⟩` and `|111⟩`, unclamped.
pub fn populations(r: &RTensor) -> (f64, f64) {
    let z = |a, b, c| r.get(a, b, c);
    let (z1, z2, z3) = (z(3, 0, 0), z(0, 3, 0), z(0, 0, 3));
    let (zz12, zz13, zz23) = (z(3, 3, 0), z(3, 0, 3), z(0, 3, 3));
    let zzz = z(3, 3, 3);
    let rho11 = (z1 + z2 + z3 + zz12 + zz13 + zz23 + zzz + 1.0) / 8.0;
    let rho88 = (-z1 - z2 - z3 + zz12 + zz13 + zz23 - zzz + 1.0) / 8.0;
    (rho11, rho88)
}

fn clamp_population(name: &str, v: f64) -> Result<f64> {
    if !(-POPULATION_SLACK..=1.0 + POPULATION_SLACK).contains(&v) {
        return Err(Error::Physicality(format!("population {name} = {v:.3e} outside [0, 1]")));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// `m_K = 4 ρ₁₁ ρ₈₈`.
pub fn m_k(r: &RTensor) -> Result<f64> {
    let (p11, p88) = populations(r);
    Ok(4.0 * clamp_population("rho11", p11)? * clamp_population("rho88", p88)?)
}

/// Factors `1 − |R_q|²` below this are rounding residue of a unit Bloch
/// vector; the cube root would otherwise lift 1e-16 to ~5e-6.
const LOCAL_PURITY_FLOOR: f64 = 1e-14;

/// `m_L = ∛((1 − |R_e|²)(1 − |R_p|²)(1 − |R_n|²))`.
pub fn m_l(r: &RTensor) -> f64 {
    let factor = |q| {
        let f = 1.0 - sq3(r.local(q));
        if f < LOCAL_PURITY_FLOOR { 0.0 } else { f }
    };
    let prod: f64 = Qubit::ALL.iter().map(|&q| factor(q)).product();
    prod.cbrt().clamp(0.0, 1.0)
}

/// Spin-flip probability `(1 − R_{00z})/2` of qubit `n` from an initial `+z` state.
pub fn flip_probability(r: &RTensor) -> f64 {
    flip_probability_of(r, Qubit::N)
}

/// `(1 − z)/2` with `z` the longitudinal Bloch component of `qubit`.
pub fn flip_probability_of(r: &RTensor, qubit: Qubit) -> f64 {
    (1.0 - r.local(qubit)[2]) / 2.0
}

/// Per-sample quantities that can be written as time-series channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    MSm,
    C3,
    /// `C₃` evaluated without the purity precondition.
    C3Formal,
    MB,
    MK,
    ML,
    BlochLength,
    PFlip,
    PFlipE,
    Rho11,
    Rho88,
}

impl Channel {
    pub const ALL: [Channel; 11] = [
        Channel::MSm,
        Channel::C3,
        Channel::C3Formal,
        Channel::MB,
        Channel::MK,
        Channel::ML,
        Channel::BlochLength,
        Channel::PFlip,
        Channel::PFlipE,
        Channel::Rho11,
        Channel::Rho88,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::MSm => "m_sm",
            Channel::C3 => "c3",
            Channel::C3Formal => "c3_formal",
            Channel::MB => "m_b",
            Channel::MK => "m_k",
            Channel::ML => "m_l",
            Channel::BlochLength => "b",
            Channel::PFlip => "p_flip",
            Channel::PFlipE => "p_flip_e",
            Channel::Rho11 => "rho11",
            Channel::Rho88 => "rho88",
        }
    }

    pub fn evaluate(self, r: &RTensor) -> Result<f64> {
        Ok(match self {
            Channel::MSm => m_sm(r),
            Channel::C3 => concurrence_c3(r, PurityCheck::Enforce)?,
            Channel::C3Formal => concurrence_c3(r, PurityCheck::Skip)?,
            Channel::MB => m_b(r),
            Channel::MK => m_k(r)?,
            Channel::ML => m_l(r),
            Channel::BlochLength => bloch_length(r),
            Channel::PFlip => flip_probability(r),
            Channel::PFlipE => flip_probability_of(r, Qubit::E),
            Channel::Rho11 => populations(r).0,
            Channel::Rho88 => populations(r).1,
        })
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Channel::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown channel '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{initial_state, rho2_to_r2, Mat4, StateName, C64};
    use approx::assert_abs_diff_eq;

    fn state(name: StateName) -> RTensor {
        initial_state(name, None).unwrap().1
    }

    #[test]
    fn product_state_cumulants_vanish() {
        for name in [StateName::S, StateName::Polarized] {
            let r = state(name);
            let p = pair_tensors(&r);
            for m in [p.m_ep, p.m_en, p.m_pn] {
                assert!(m.iter().flatten().all(|v| v.abs() < 1e-15));
            }
            assert!(triple_tensor(&r).norm_sqr() < 1e-30);
            assert_abs_diff_eq!(m_sm(&r), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(concurrence_c3(&r, PurityCheck::Enforce).unwrap(), 0.0, epsilon = 1e-7);
            assert_abs_diff_eq!(m_b(&r), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(m_l(&r), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn ghz_values() {
        let r = state(StateName::Ghz);
        let p = pair_tensors(&r);
        assert_abs_diff_eq!(p.m_ep[2][2], 1.0, epsilon = 1e-15);
        let t = triple_tensor(&r);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_abs_diff_eq!(t.m3[i][j][k], r.get(i + 1, j + 1, k + 1), epsilon = 1e-15);
                }
            }
        }
        assert_abs_diff_eq!(m_sm(&r), 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence_c3(&r, PurityCheck::Enforce).unwrap(), 1.5f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(m_b(&r), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m_l(&r), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m_k(&r).unwrap(), 1.0, epsilon = 1e-12);
        let (p11, p88) = populations(&r);
        assert_abs_diff_eq!(p11, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p88, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn w_values() {
        let r = state(StateName::W);
        assert_abs_diff_eq!(m_b(&r), 8.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m_l(&r), 8.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn biseparable_structure() {
        let r = state(StateName::Bs);
        let p = pair_tensors(&r);
        assert!(p.m_pn.iter().flatten().any(|v| v.abs() > 0.5));
        // e is |0>: its cumulants with p and n vanish
        assert!(p.m_ep.iter().flatten().all(|v| v.abs() < 1e-15));
        assert!(p.m_en.iter().flatten().all(|v| v.abs() < 1e-15));
        assert!(triple_tensor(&r).norm_sqr() < 1e-28);
    }

    #[test]
    fn populations_and_m_k() {
        assert_abs_diff_eq!(m_k(&state(StateName::Polarized)).unwrap(), 0.0);
        assert_abs_diff_eq!(m_k(&state(StateName::S)).unwrap(), 0.0);
        assert_abs_diff_eq!(m_k(&RTensor::identity()).unwrap(), 1.0 / 16.0, epsilon = 1e-15);

        let mut c = *RTensor::identity().coeffs();
        c[crate::pauli::flat(3, 0, 0)] = 9.0;
        let bad = RTensor::from_coeffs(c).unwrap();
        assert!(matches!(m_k(&bad), Err(Error::Physicality(_))));
    }

    #[test]
    fn c3_rejects_mixed_state() {
        let (_, r) = initial_state(StateName::Mix, Some(2.0 / 3.0)).unwrap();
        assert!(matches!(concurrence_c3(&r, PurityCheck::Enforce), Err(Error::Domain(_))));
        assert!(concurrence_c3(&r, PurityCheck::Skip).unwrap() >= 0.0);
        assert!(Channel::C3.evaluate(&r).is_err());
        assert!(Channel::C3Formal.evaluate(&r).is_ok());
    }

    #[test]
    fn two_qubit_measure() {
        let mut rho = Mat4::zeros();
        for (a, b) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            rho[(a, b)] = C64::from(0.5);
        }
        assert_abs_diff_eq!(m_two(&rho2_to_r2(&rho)), 3.0, epsilon = 1e-14);

        let mut prod = Mat4::zeros();
        prod[(1, 1)] = C64::from(1.0);
        assert_abs_diff_eq!(m_two(&rho2_to_r2(&prod)), 0.0, epsilon = 1e-15);
        assert_eq!(m_two(&RTensor2::identity()), 0.0);
    }

    #[test]
    fn flip_probabilities() {
        let with_z = |z: f64| {
            let mut c = *RTensor::identity().coeffs();
            c[crate::pauli::flat(0, 0, 3)] = z;
            RTensor::from_coeffs(c).unwrap()
        };
        assert_eq!(flip_probability(&with_z(1.0)), 0.0);
        assert_eq!(flip_probability(&with_z(-1.0)), 1.0);
        assert_eq!(flip_probability(&with_z(0.0)), 0.5);
        assert_eq!(flip_probability_of(&state(StateName::S), Qubit::E), 1.0);
    }

    #[test]
    fn channel_names_round_trip() {
        for c in Channel::ALL {
            assert_eq!(c.name().parse::<Channel>().unwrap(), c);
        }
        assert!("tangle".parse::<Channel>().is_err());
    }
}
