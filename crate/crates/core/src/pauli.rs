//! Pauli-product basis for three qubits.
//!
//! A three-qubit density matrix is expanded as
//! `ρ = (1/8) Σ R[α,β,γ] σ_α ⊗ σ_β ⊗ σ_γ` with `α, β, γ ∈ 0..4`. The
//! leftmost Kronecker factor acts on qubit `e`, the middle on `p`, the
//! rightmost on `n`. Computational basis states are labelled `|0⟩` for the
//! `σ₃ = +1` eigenvector and `|1⟩` for `σ₃ = −1`, ordered
//! `|000⟩, |001⟩, …, |111⟩`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat2 = SMatrix<C64, 2, 2>;
pub type Mat4 = SMatrix<C64, 4, 4>;
pub type Mat8 = SMatrix<C64, 8, 8>;
pub type Ket8 = SVector<C64, 8>;

/// Hermiticity and trace tolerance used when validating density matrices.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Smallest admissible density-matrix eigenvalue.
pub const PSD_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// One of the three qubits of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    E,
    P,
    N,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::E, Qubit::P, Qubit::N];

    pub fn slot(self) -> usize {
        match self {
            Qubit::E => 0,
            Qubit::P => 1,
            Qubit::N => 2,
        }
    }
}

/// The 2×2 Pauli matrix `σ_α`, with `σ₀` the identity.
pub fn sigma(alpha: usize) -> Result<Mat2> {
    let m = match alpha {
        0 => Mat2::new(ONE, ZERO, ZERO, ONE),
        1 => Mat2::new(ZERO, ONE, ONE, ZERO),
        2 => Mat2::new(ZERO, -I, I, ZERO),
        3 => Mat2::new(ONE, ZERO, ZERO, -ONE),
        _ => return Err(Error::Domain(format!("Pauli index {alpha} not in 0..=3"))),
    };
    Ok(m)
}

/// Totally antisymmetric symbol on spatial indices `1..=3`, `ε₁₂₃ = +1`.
/// Returns zero for repeated or out-of-range indices.
#[inline]
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1.0,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1.0,
        _ => 0.0,
    }
}

/// `σ_α ⊗ σ_β ⊗ σ_γ`.
pub fn pauli_basis_element(alpha: usize, beta: usize, gamma: usize) -> Result<Mat8> {
    let a = sigma(alpha)?;
    let b = sigma(beta)?;
    let c = sigma(gamma)?;
    Ok(a.kronecker(&b).kronecker(&c))
}

/// `σ_α ⊗ σ_β`.
pub fn pauli_basis_element2(alpha: usize, beta: usize) -> Result<Mat4> {
    Ok(sigma(alpha)?.kronecker(&sigma(beta)?))
}

fn basis64() -> &'static [Mat8; 64] {
    static BASIS: OnceLock<[Mat8; 64]> = OnceLock::new();
    BASIS.get_or_init(|| {
        std::array::from_fn(|k| {
            pauli_basis_element(k / 16, (k / 4) % 4, k % 4).expect("indices in range")
        })
    })
}

fn basis16() -> &'static [Mat4; 16] {
    static BASIS: OnceLock<[Mat4; 16]> = OnceLock::new();
    BASIS.get_or_init(|| {
        std::array::from_fn(|k| pauli_basis_element2(k / 4, k % 4).expect("indices in range"))
    })
}

/// Spin operator `s_i = σ_i / 2` of one qubit embedded in the 8-dimensional space.
pub fn spin_operator(qubit: Qubit, i: usize) -> Result<Mat8> {
    if !(1..=3).contains(&i) {
        return Err(Error::Domain(format!("spin component {i} not in 1..=3")));
    }
    let mut idx = [0usize; 3];
    idx[qubit.slot()] = i;
    Ok(pauli_basis_element(idx[0], idx[1], idx[2])? * C64::new(0.5, 0.0))
}

/// Isotropic exchange constants `J^{ep}`, `J^{en}`, `J^{pn}`, in units of the
/// drive frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingConstants {
    pub j_ep: f64,
    pub j_en: f64,
    pub j_pn: f64,
}

impl CouplingConstants {
    pub const fn new(j_ep: f64, j_en: f64, j_pn: f64) -> Self {
        Self { j_ep, j_en, j_pn }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    /// `J^{ep} = −0.2`, `J^{en} = −0.1`, `J^{pn} = −0.3`.
    pub const fn reference() -> Self {
        Self::new(-0.2, -0.1, -0.3)
    }

    pub fn is_finite(&self) -> bool {
        self.j_ep.is_finite() && self.j_en.is_finite() && self.j_pn.is_finite()
    }
}

impl Default for CouplingConstants {
    fn default() -> Self {
        Self::reference()
    }
}

/// `Ĥ = Σ_q h^q·s^q + 2J^{ep} s^e·s^p + 2J^{en} s^e·s^n + 2J^{pn} s^p·s^n`.
pub fn build_hamiltonian(
    h_e: [f64; 3],
    h_p: [f64; 3],
    h_n: [f64; 3],
    couplings: &CouplingConstants,
) -> Result<Mat8> {
    let all_finite = h_e.iter().chain(&h_p).chain(&h_n).all(|v| v.is_finite());
    if !all_finite || !couplings.is_finite() {
        return Err(Error::Domain("non-finite field or coupling".into()));
    }
    let basis = basis64();
    let at = |a: usize, b: usize, c: usize| &basis[16 * a + 4 * b + c];
    let mut h = Mat8::zeros();
    for i in 1..=3 {
        // h·s = (h/2)·σ ;  2J s·s = (J/2) σ·σ
        h += at(i, 0, 0) * C64::from(0.5 * h_e[i - 1]);
        h += at(0, i, 0) * C64::from(0.5 * h_p[i - 1]);
        h += at(0, 0, i) * C64::from(0.5 * h_n[i - 1]);
        h += at(i, i, 0) * C64::from(0.5 * couplings.j_ep);
        h += at(i, 0, i) * C64::from(0.5 * couplings.j_en);
        h += at(0, i, i) * C64::from(0.5 * couplings.j_pn);
    }
    Ok(h)
}

/// Two-qubit Hamiltonian `h^e·s^e + h^p·s^p + 2J s^e·s^p` on a 4-dimensional space.
pub fn build_hamiltonian2(h_e: [f64; 3], h_p: [f64; 3], j_ep: f64) -> Mat4 {
    let basis = basis16();
    let mut h = Mat4::zeros();
    for i in 1..=3 {
        h += basis[4 * i] * C64::from(0.5 * h_e[i - 1]);
        h += basis[i] * C64::from(0.5 * h_p[i - 1]);
        h += basis[5 * i] * C64::from(0.5 * j_ep);
    }
    h
}

#[inline]
pub(crate) const fn flat(a: usize, b: usize, c: usize) -> usize {
    16 * a + 4 * b + c
}

/// Real expansion coefficients `R[α,β,γ] = Tr(ρ σ_α⊗σ_β⊗σ_γ)` of a
/// three-qubit state. `R[0,0,0] = 1`.
///
/// Stored dense, row-major with `α` slowest; [`RTensor::coeffs`] exposes that
/// flat 64-element layout directly.
#[derive(Clone, Copy, PartialEq)]
pub struct RTensor {
    coeffs: [f64; 64],
}

impl RTensor {
    /// The maximally mixed state `I/8`.
    pub fn identity() -> Self {
        let mut coeffs = [0.0; 64];
        coeffs[0] = 1.0;
        Self { coeffs }
    }

    /// Builds a tensor from its flat layout. The leading coefficient must be
    /// exactly one.
    pub fn from_coeffs(coeffs: [f64; 64]) -> Result<Self> {
        if coeffs[0] != 1.0 {
            return Err(Error::Validation(format!(
                "R[0,0,0] must equal 1, got {}",
                coeffs[0]
            )));
        }
        if let Some(v) = coeffs.iter().find(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("non-finite coefficient {v}")));
        }
        Ok(Self { coeffs })
    }

    pub fn from_slice(coeffs: &[f64]) -> Result<Self> {
        let arr: [f64; 64] = coeffs.try_into().map_err(|_| {
            Error::Validation(format!("expected 64 coefficients, got {}", coeffs.len()))
        })?;
        Self::from_coeffs(arr)
    }

    /// Integrator stages keep `R[0,0,0] = 1` because its derivative is zero.
    pub(crate) fn from_raw(coeffs: [f64; 64]) -> Self {
        Self { coeffs }
    }

    #[inline]
    pub fn get(&self, alpha: usize, beta: usize, gamma: usize) -> f64 {
        self.coeffs[flat(alpha, beta, gamma)]
    }

    pub fn coeffs(&self) -> &[f64; 64] {
        &self.coeffs
    }

    /// Local Bloch vector of one qubit, e.g. `R[i,0,0]` for qubit `e`.
    pub fn local(&self, qubit: Qubit) -> [f64; 3] {
        std::array::from_fn(|k| match qubit {
            Qubit::E => self.get(k + 1, 0, 0),
            Qubit::P => self.get(0, k + 1, 0),
            Qubit::N => self.get(0, 0, k + 1),
        })
    }

    /// The `(e,p)` coefficients `R[α,β,0]`. This is the full two-qubit
    /// description of the reduced state of the first two qubits.
    pub fn marginal_ep(&self) -> RTensor2 {
        let mut r2 = [0.0; 16];
        for a in 0..4 {
            for b in 0..4 {
                r2[4 * a + b] = self.get(a, b, 0);
            }
        }
        RTensor2 { coeffs: r2 }
    }

    pub fn max_abs_diff(&self, other: &RTensor) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Applies independent rotations to the spatial index of each qubit slot:
    /// `R'[i,j,k] = O^e_{ii'} O^p_{jj'} O^n_{kk'} R[i',j',k']`, with the
    /// index 0 left untouched. Proper rotations correspond to local unitaries.
    pub fn rotate_locally(&self, rotations: [[[f64; 3]; 3]; 3]) -> RTensor {
        // 4x4 block matrices diag(1, O)
        let lift = |o: &[[f64; 3]; 3]| {
            let mut m = [[0.0; 4]; 4];
            m[0][0] = 1.0;
            for i in 0..3 {
                for j in 0..3 {
                    m[i + 1][j + 1] = o[i][j];
                }
            }
            m
        };
        let [me, mp, mn] = [lift(&rotations[0]), lift(&rotations[1]), lift(&rotations[2])];
        let mut out = [0.0; 64];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let mut acc = 0.0;
                    for a2 in 0..4 {
                        if me[a][a2] == 0.0 {
                            continue;
                        }
                        for b2 in 0..4 {
                            if mp[b][b2] == 0.0 {
                                continue;
                            }
                            for c2 in 0..4 {
                                acc += me[a][a2] * mp[b][b2] * mn[c][c2] * self.get(a2, b2, c2);
                            }
                        }
                    }
                    out[flat(a, b, c)] = acc;
                }
            }
        }
        out[0] = 1.0;
        RTensor::from_raw(out)
    }
}

impl fmt::Debug for RTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nonzero: Vec<_> = (0..64)
            .filter(|&k| self.coeffs[k] != 0.0)
            .map(|k| format!("{}{}{}:{:.6}", k / 16, (k / 4) % 4, k % 4, self.coeffs[k]))
            .collect();
        f.debug_tuple("RTensor").field(&nonzero).finish()
    }
}

/// Two-qubit coefficients `R[α,β] = Tr(ρ σ_α⊗σ_β)`, `R[0,0] = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RTensor2 {
    coeffs: [f64; 16],
}

impl RTensor2 {
    pub fn identity() -> Self {
        let mut coeffs = [0.0; 16];
        coeffs[0] = 1.0;
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: [f64; 16]) -> Result<Self> {
        if coeffs[0] != 1.0 {
            return Err(Error::Validation(format!(
                "R[0,0] must equal 1, got {}",
                coeffs[0]
            )));
        }
        Ok(Self { coeffs })
    }

    pub(crate) fn from_raw(coeffs: [f64; 16]) -> Self {
        Self { coeffs }
    }

    #[inline]
    pub fn get(&self, alpha: usize, beta: usize) -> f64 {
        self.coeffs[4 * alpha + beta]
    }

    pub fn coeffs(&self) -> &[f64; 16] {
        &self.coeffs
    }

    pub fn max_abs_diff(&self, other: &RTensor2) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Validated 8×8 density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Mat8);

impl DensityMatrix {
    pub fn new(m: Mat8) -> Result<Self> {
        let herm_err = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_err > STRUCTURE_TOL {
            return Err(Error::Validation(format!(
                "matrix is not Hermitian (max |m - m†| = {herm_err:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > STRUCTURE_TOL {
            return Err(Error::Validation(format!("trace is {tr}, expected 1")));
        }
        let rho = Self(m);
        let min_eig = rho.eigenvalues()[0];
        if min_eig < -PSD_TOL {
            return Err(Error::Validation(format!(
                "matrix is not positive semidefinite (eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(rho)
    }

    /// Skips the eigenvalue check; used on states produced by exact unitary steps.
    pub(crate) fn new_unchecked(m: Mat8) -> Self {
        Self(m)
    }

    /// `|ψ⟩⟨ψ|` for a normalized (or normalizable) ket.
    pub fn from_pure(psi: &Ket8) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("state vector has zero or non-finite norm".into()));
        }
        let psi = psi / C64::from(norm);
        Ok(Self(psi * psi.adjoint()))
    }

    pub fn matrix(&self) -> &Mat8 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat8 {
        self.0
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; 8] {
        let eig = self.0.symmetric_eigenvalues();
        let mut vals: [f64; 8] = std::array::from_fn(|k| eig[k]);
        vals.sort_by(|a, b| a.total_cmp(b));
        vals
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Population `⟨k|ρ|k⟩` of computational basis state `k ∈ 0..8`.
    pub fn population(&self, k: usize) -> f64 {
        self.0[(k, k)].re
    }
}

/// `R[α,β,γ] = Tr(ρ σ_α⊗σ_β⊗σ_γ)`.
pub fn rho_to_r(rho: &DensityMatrix) -> Result<RTensor> {
    let m = rho.matrix();
    let mut coeffs = [0.0; 64];
    for (k, p) in basis64().iter().enumerate() {
        // Tr(ρP) = Σ_ij ρ_ij P_ji
        let tr: C64 = m.iter().zip(p.transpose().iter()).map(|(a, b)| a * b).sum();
        if tr.im.abs() > STRUCTURE_TOL {
            return Err(Error::Validation(format!(
                "coefficient {k} has imaginary part {:.3e}",
                tr.im
            )));
        }
        coeffs[k] = tr.re;
    }
    coeffs[0] = 1.0;
    Ok(RTensor::from_raw(coeffs))
}

/// `ρ = (1/8) Σ R[α,β,γ] σ_α⊗σ_β⊗σ_γ`.
pub fn r_to_rho(r: &RTensor) -> Result<DensityMatrix> {
    if r.get(0, 0, 0) != 1.0 {
        return Err(Error::Validation(format!(
            "R[0,0,0] must equal 1, got {}",
            r.get(0, 0, 0)
        )));
    }
    Ok(DensityMatrix::new_unchecked(r_to_matrix(r)))
}

pub(crate) fn r_to_matrix(r: &RTensor) -> Mat8 {
    let mut m = Mat8::zeros();
    for (p, &c) in basis64().iter().zip(r.coeffs()) {
        if c != 0.0 {
            m += p * C64::from(c / 8.0);
        }
    }
    m
}

/// `R[α,β] = Tr(ρ σ_α⊗σ_β)` for a 4×4 two-qubit density matrix.
pub fn rho2_to_r2(rho: &Mat4) -> RTensor2 {
    let mut coeffs = [0.0; 16];
    for (k, p) in basis16().iter().enumerate() {
        coeffs[k] = (rho * p).trace().re;
    }
    RTensor2::from_raw(coeffs)
}

pub fn r2_to_rho2(r2: &RTensor2) -> Mat4 {
    let mut m = Mat4::zeros();
    for (p, &c) in basis16().iter().zip(r2.coeffs()) {
        m += p * C64::from(c / 4.0);
    }
    m
}

/// Length of the generalized Bloch vector, `sqrt(Σ R²)` over all
/// coefficients except `R[0,0,0]`. Equals `sqrt(8 Tr ρ² − 1)`: √7 for pure
/// states, 0 for the maximally mixed state.
pub fn bloch_length(r: &RTensor) -> f64 {
    r.coeffs()[1..].iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `Tr ρ² = (1 + b²) / 8`.
pub fn purity(r: &RTensor) -> f64 {
    r.coeffs().iter().map(|v| v * v).sum::<f64>() / 8.0
}

/// Weight `x ∈ (1/3, 1]` of the GHZ projector in the mixed initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixWeight(f64);

impl MixWeight {
    pub fn new(x: f64) -> Result<Self> {
        if x > 1.0 / 3.0 && x <= 1.0 {
            Ok(Self(x))
        } else {
            Err(Error::Domain(format!("mix weight x = {x} outside (1/3, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Named initial states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateName {
    /// `|111⟩`, fully separable.
    S,
    /// `(|001⟩ + |010⟩)/√2`, biseparable.
    Bs,
    /// `(|000⟩ + |111⟩)/√2`.
    Ghz,
    /// `(|001⟩ + |010⟩ + |100⟩)/√3`.
    W,
    /// `(|110⟩ + |101⟩ + |011⟩)/√3`.
    V,
    /// `x|GHZ⟩⟨GHZ| + (1−x)/2 (|W⟩⟨W| + |V⟩⟨V|)`.
    Mix,
    /// `|000⟩`, every qubit along `+z`.
    Polarized,
}

impl StateName {
    pub const ALL: [StateName; 7] = [
        StateName::S,
        StateName::Bs,
        StateName::Ghz,
        StateName::W,
        StateName::V,
        StateName::Mix,
        StateName::Polarized,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StateName::S => "S",
            StateName::Bs => "BS",
            StateName::Ghz => "GHZ",
            StateName::W => "W",
            StateName::V => "V",
            StateName::Mix => "Mix",
            StateName::Polarized => "Polarized",
        }
    }
}

impl fmt::Display for StateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StateName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StateName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown initial state '{s}'")))
    }
}

/// Computational basis ket `|b_e b_p b_n⟩` from its 3-bit label.
pub fn basis_ket(bits: usize) -> Ket8 {
    let mut k = Ket8::zeros();
    k[bits & 7] = ONE;
    k
}

fn superposition(labels: &[usize]) -> Ket8 {
    let amp = C64::from(1.0 / (labels.len() as f64).sqrt());
    labels.iter().map(|&b| basis_ket(b) * amp).sum()
}

pub fn ghz_ket() -> Ket8 {
    superposition(&[0b000, 0b111])
}

pub fn w_ket() -> Ket8 {
    superposition(&[0b001, 0b010, 0b100])
}

pub fn v_ket() -> Ket8 {
    superposition(&[0b110, 0b101, 0b011])
}

/// Density matrix and coefficient tensor of a named initial state. `x` must be
/// supplied for [`StateName::Mix`] and only for it.
pub fn initial_state(name: StateName, x: Option<f64>) -> Result<(DensityMatrix, RTensor)> {
    let rho = match (name, x) {
        (StateName::Mix, None) => {
            return Err(Error::Domain("the Mix state requires a weight x".into()))
        }
        (StateName::Mix, Some(x)) => {
            let x = MixWeight::new(x)?.value();
            let proj = |k: Ket8| k * k.adjoint();
            let m = proj(ghz_ket()) * C64::from(x)
                + (proj(w_ket()) + proj(v_ket())) * C64::from((1.0 - x) / 2.0);
            DensityMatrix::new(m)?
        }
        (other, Some(_)) => {
            return Err(Error::Domain(format!(
                "weight x is only meaningful for Mix, not {other}"
            )))
        }
        (StateName::S, None) => DensityMatrix::from_pure(&basis_ket(0b111))?,
        (StateName::Bs, None) => DensityMatrix::from_pure(&superposition(&[0b001, 0b010]))?,
        (StateName::Ghz, None) => DensityMatrix::from_pure(&ghz_ket())?,
        (StateName::W, None) => DensityMatrix::from_pure(&w_ket())?,
        (StateName::V, None) => DensityMatrix::from_pure(&v_ket())?,
        (StateName::Polarized, None) => DensityMatrix::from_pure(&basis_ket(0b000))?,
    };
    let r = rho_to_r(&rho)?;
    Ok((rho, r))
}
