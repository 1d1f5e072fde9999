//! Direct density-matrix propagation, independent of the coefficient equations.
//!
//! Each substep freezes the Hamiltonian at its midpoint and applies the exact
//! unitary `exp(−iĤδτ)` obtained from the eigendecomposition of `Ĥ`.

use super::FieldSpec;
use crate::error::{Error, Result};
use crate::pauli::{build_hamiltonian, CouplingConstants, DensityMatrix, Mat8, C64};

pub fn hamiltonian_at(spec: &FieldSpec, couplings: &CouplingConstants, tau: f64) -> Result<Mat8> {
    let f = spec.field_at(tau);
    build_hamiltonian(f.e, f.p, f.n, couplings)
}

/// `exp(−i Ĥ δτ)` for Hermitian `Ĥ`.
pub fn unitary_step(h: &Mat8, delta: f64) -> Mat8 {
    let eig = h.symmetric_eigen();
    let v = eig.eigenvectors;
    let phases = eig.eigenvalues.map(|lambda| C64::from_polar(1.0, -lambda * delta));
    let mut scaled = v;
    for (mut col, phase) in scaled.column_iter_mut().zip(phases.iter()) {
        col *= *phase;
    }
    scaled * v.adjoint()
}

/// Propagates `ρ₀` (given at `taus[0]`) through the sample grid, using
/// substeps no longer than `max_substep`. Returns one density matrix per
/// entry of `taus`.
pub fn propagate_direct(
    rho0: &DensityMatrix,
    spec: &FieldSpec,
    couplings: &CouplingConstants,
    taus: &[f64],
    max_substep: f64,
) -> Result<Vec<DensityMatrix>> {
    if !(max_substep > 0.0) {
        return Err(Error::Domain(format!("substep must be positive, got {max_substep}")));
    }
    if taus.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("sample times must be non-decreasing".into()));
    }
    let mut out = Vec::with_capacity(taus.len());
    let Some(&first) = taus.first() else {
        return Ok(out);
    };
    let mut rho = *rho0.matrix();
    out.push(rho0.clone());

    // A static Hamiltonian needs a single eigendecomposition per interval length.
    let static_h = if spec.is_static() { Some(hamiltonian_at(spec, couplings, first)?) } else { None };

    let mut t = first;
    for &target in &taus[1..] {
        let span = target - t;
        if span > 0.0 {
            let n = (span / max_substep).ceil().max(1.0) as usize;
            let delta = span / n as f64;
            let fixed = static_h.as_ref().map(|h| unitary_step(h, delta));
            for s in 0..n {
                let u = match &fixed {
                    Some(u) => *u,
                    None => {
                        let mid = t + (s as f64 + 0.5) * delta;
                        unitary_step(&hamiltonian_at(spec, couplings, mid)?, delta)
                    }
                };
                rho = u * rho * u.adjoint();
            }
        }
        t = target;
        out.push(DensityMatrix::new_unchecked(rho));
    }
    Ok(out)
}
