//! Independent density-matrix machinery shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rand::Rng;
use rand_distr::StandardNormal;
use tribloch::pauli::{rho_to_r, DensityMatrix, Mat8};
use tribloch::RTensor;

pub type M = DMatrix<C>;

pub fn pauli(a: usize) -> M {
    let (z, o, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0));
    let v = match a {
        0 => [o, z, z, o],
        1 => [z, o, o, z],
        2 => [z, -i, i, z],
        3 => [o, z, z, -o],
        _ => unreachable!(),
    };
    M::from_row_slice(2, 2, &v)
}

/// Density matrix of `r` built from explicit Kronecker products.
pub fn rho_from_r(r: &RTensor) -> M {
    let mut rho = M::zeros(8, 8);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let k = pauli(a).kronecker(&pauli(b)).kronecker(&pauli(c));
                rho += k * C::new(r.get(a, b, c) / 8.0, 0.0);
            }
        }
    }
    rho
}

/// Keeps the qubits flagged in `keep` (order e, p, n) and traces out the rest.
pub fn partial_trace(rho: &M, keep: [bool; 3]) -> M {
    let kept: Vec<usize> = (0..3).filter(|&q| keep[q]).collect();
    let dim = 1 << kept.len();
    let mut out = M::zeros(dim, dim);
    let bit = |idx: usize, q: usize| (idx >> (2 - q)) & 1;
    let sub = |idx: usize| kept.iter().fold(0, |acc, &q| (acc << 1) | bit(idx, q));
    for i in 0..8 {
        for j in 0..8 {
            if (0..3).all(|q| keep[q] || bit(i, q) == bit(j, q)) {
                out[(sub(i), sub(j))] += rho[(i, j)];
            }
        }
    }
    out
}

pub fn purity(m: &M) -> f64 {
    (m * m).trace().re
}

pub fn expectation(rho: &M, op: &M) -> f64 {
    (rho * op).trace().re
}

pub fn det2(m: &M) -> f64 {
    (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re
}

pub fn to_mat8(m: &M) -> Mat8 {
    Mat8::from_fn(|i, j| m[(i, j)])
}

pub fn to_dyn(m: &Mat8) -> M {
    M::from_fn(8, 8, |i, j| m[(i, j)])
}

fn gaussian(rng: &mut impl Rng) -> C {
    C::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_ket(rng: &mut impl Rng, dim: usize) -> M {
    let v = M::from_fn(dim, 1, |_, _| gaussian(rng));
    let n = v.norm();
    v / C::new(n, 0.0)
}

pub fn random_pure_rho(rng: &mut impl Rng) -> M {
    let v = random_ket(rng, 8);
    &v * v.adjoint()
}

/// Ginibre-distributed mixed state of rank `rank`.
pub fn random_mixed_rho(rng: &mut impl Rng, rank: usize) -> M {
    let g = M::from_fn(8, rank, |_, _| gaussian(rng));
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}

pub fn random_product_rho(rng: &mut impl Rng) -> M {
    let (a, b, c) = (random_ket(rng, 2), random_ket(rng, 2), random_ket(rng, 2));
    let v = a.kronecker(&b).kronecker(&c);
    &v * v.adjoint()
}

pub fn r_of(rho: &M) -> RTensor {
    // Hermitize against rounding before handing over
    let h = (rho + rho.adjoint()) * C::new(0.5, 0.0);
    rho_to_r(&DensityMatrix::new(to_mat8(&h)).unwrap()).unwrap()
}

/// Uniform random rotation from a normalized Gaussian quaternion.
pub fn random_rotation(rng: &mut impl Rng) -> [[f64; 3]; 3] {
    let mut q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.iter_mut().for_each(|x| *x /= n);
    let [w, x, y, z] = q;
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

pub struct OracleMeasures {
    pub m_b: f64,
    pub m_l: f64,
    pub m_k: f64,
    pub c3: f64,
    pub m_sm: f64,
}

/// Measures recomputed from reduced density matrices and expectation values.
pub fn oracle_measures(rho: &M) -> OracleMeasures {
    let singles = [
        partial_trace(rho, [true, false, false]),
        partial_trace(rho, [false, true, false]),
        partial_trace(rho, [false, false, true]),
    ];
    let pairs = [
        partial_trace(rho, [true, true, false]),
        partial_trace(rho, [true, false, true]),
        partial_trace(rho, [false, true, true]),
    ];
    // |r|^2 = 2 Tr rho_q^2 - 1
    let bloch_sq: f64 = singles.iter().map(|s| 2.0 * purity(s) - 1.0).sum();
    let m_b = 1.0 - bloch_sq / 3.0;
    let m_l = singles.iter().map(|s| (4.0 * det2(s)).max(0.0)).product::<f64>().cbrt();
    let m_k = 4.0 * rho[(0, 0)].re * rho[(7, 7)].re;
    let total: f64 = singles.iter().chain(pairs.iter()).map(purity).sum();
    let c3 = ((6.0 - total).max(0.0) / 2.0).sqrt();

    let s = |i: usize| pauli(i);
    let id = pauli(0);
    let ex = |a: &M, b: &M, c: &M| expectation(rho, &a.kronecker(b).kronecker(c));
    let mut m_sm = 0.0;
    for i in 1..4 {
        for j in 1..4 {
            for k in 1..4 {
                let (e, p, n) = (ex(&s(i), &id, &id), ex(&id, &s(j), &id), ex(&id, &id, &s(k)));
                let ep = ex(&s(i), &s(j), &id) - e * p;
                let en = ex(&s(i), &id, &s(k)) - e * n;
                let pn = ex(&id, &s(j), &s(k)) - p * n;
                let m = ex(&s(i), &s(j), &s(k)) - e * pn - p * en - n * ep - e * p * n;
                m_sm += m * m;
            }
        }
    }
    OracleMeasures { m_b, m_l, m_k, c3, m_sm }
}
