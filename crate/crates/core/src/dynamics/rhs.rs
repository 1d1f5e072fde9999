//! Right-hand sides of the real equations of motion.
//!
//! Indices `q, k, l` run over the spatial Pauli labels `1..=3`; the Levi-Civita
//! contractions are written out block by block: local Bloch vectors, pair
//! correlations, and the triple correlation.

use super::FieldTriple;
use crate::pauli::{flat, levi_civita, CouplingConstants, RTensor, RTensor2};

/// `Σ_{a,b} ε_{abq} f(a, b)`, summing only the two non-vanishing terms.
#[inline]
fn contract(q: usize, f: impl Fn(usize, usize) -> f64) -> f64 {
    let (a, b) = match q {
        1 => (2, 3),
        2 => (3, 1),
        _ => (1, 2),
    };
    f(a, b) - f(b, a)
}

/// `Σ_m ε_{xmy} g(m)`.
#[inline]
fn single(x: usize, y: usize, g: impl Fn(usize) -> f64) -> f64 {
    (1..=3).map(|m| levi_civita(x, m, y) * g(m)).sum()
}

/// `dR/dτ` for the 63 non-trivial coefficients. The `(0,0,0)` entry of the
/// returned array is always zero.
pub fn rhs_three(r: &RTensor, field: &FieldTriple, j: &CouplingConstants) -> [f64; 64] {
    let mut d = [0.0; 64];
    let r = |a: usize, b: usize, c: usize| r.get(a, b, c);
    let he = |i: usize| field.e[i - 1];
    let hp = |i: usize| field.p[i - 1];
    let hn = |i: usize| field.n[i - 1];
    let (jep, jen, jpn) = (j.j_ep, j.j_en, j.j_pn);

    for q in 1..=3 {
        // local Bloch vectors
        d[flat(q, 0, 0)] = contract(q, |i, l| he(i) * r(l, 0, 0))
            + contract(q, |m, l| jep * r(l, m, 0) + jen * r(l, 0, m));
        d[flat(0, q, 0)] = contract(q, |i, l| hp(i) * r(0, l, 0))
            + contract(q, |m, l| jep * r(m, l, 0) + jpn * r(0, l, m));
        d[flat(0, 0, q)] = contract(q, |i, l| hn(i) * r(0, 0, l))
            + contract(q, |l, m| jen * r(l, 0, m) + jpn * r(0, l, m));

        for k in 1..=3 {
            // pair correlations
            d[flat(q, k, 0)] = contract(q, |i, l| he(i) * r(l, k, 0))
                + contract(k, |i, m| hp(i) * r(q, m, 0))
                + jep * single(k, q, |m| r(m, 0, 0) - r(0, m, 0))
                + jen * contract(q, |l, m| r(m, k, l))
                + jpn * contract(k, |l, m| r(q, m, l));
            d[flat(q, 0, k)] = contract(q, |i, l| he(i) * r(l, 0, k))
                + contract(k, |i, m| hn(i) * r(q, 0, m))
                + jen * single(q, k, |m| r(0, 0, m) - r(m, 0, 0))
                + jep * contract(q, |l, m| r(m, l, k))
                + jpn * contract(k, |l, m| r(q, l, m));
            d[flat(0, q, k)] = contract(q, |i, l| hp(i) * r(0, l, k))
                + contract(k, |i, m| hn(i) * r(0, q, m))
                + jpn * single(q, k, |m| r(0, 0, m) - r(0, m, 0))
                + jep * contract(q, |l, m| r(l, m, k))
                + jen * contract(k, |l, m| r(l, q, m));

            // triple correlation
            for l in 1..=3 {
                d[flat(q, k, l)] = contract(q, |i, m| he(i) * r(m, k, l))
                    + contract(k, |i, m| hp(i) * r(q, m, l))
                    + contract(l, |i, m| hn(i) * r(q, k, m))
                    + jep * single(k, q, |m| r(m, 0, l) - r(0, m, l))
                    + jen * single(q, l, |m| r(0, k, m) - r(m, k, 0))
                    + jpn * single(k, l, |m| r(q, 0, m) - r(q, m, 0));
            }
        }
    }
    d
}

/// `dR/dτ` for the 15 non-trivial coefficients of two exchange-coupled qubits.
pub fn rhs_two(r2: &RTensor2, h_e: [f64; 3], h_p: [f64; 3], j_ep: f64) -> [f64; 16] {
    let mut d = [0.0; 16];
    let r = |a: usize, b: usize| r2.get(a, b);
    let he = |i: usize| h_e[i - 1];
    let hp = |i: usize| h_p[i - 1];
    for q in 1..=3 {
        d[4 * q] = contract(q, |i, l| he(i) * r(l, 0)) + contract(q, |m, l| j_ep * r(l, m));
        d[q] = contract(q, |i, l| hp(i) * r(0, l)) + contract(q, |m, l| j_ep * r(m, l));
        for k in 1..=3 {
            d[4 * q + k] = contract(q, |i, l| he(i) * r(l, k))
                + contract(k, |i, m| hp(i) * r(q, m))
                + j_ep * single(k, q, |m| r(m, 0) - r(0, m));
        }
    }
    d
}
