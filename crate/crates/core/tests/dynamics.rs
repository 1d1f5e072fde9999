mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tribloch::dynamics::{
    integrate, integrate_two, propagate_direct, unitary_step, FieldSpec, IntegratorConfig, Method,
};
use tribloch::pauli::{basis_ket, build_hamiltonian, initial_state, rho_to_r, DensityMatrix, Ket8, StateName, C64};
use tribloch::{CouplingConstants, Error, RTensor};

fn cfg(tau_max: f64) -> IntegratorConfig {
    IntegratorConfig { tau_max, ..IntegratorConfig::default() }
}

#[test]
fn decoupled_product_state_stays_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let r0 = r_of(&random_product_rho(&mut rng));
    let series = integrate(&r0, &FieldSpec::non_resonant(), &CouplingConstants::zero(), &cfg(5.0)).unwrap();
    for r in series.states() {
        let (e, p, n) = (r.local(tribloch::pauli::Qubit::E), r.local(tribloch::pauli::Qubit::P), r.local(tribloch::pauli::Qubit::N));
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!((r.get(i + 1, j + 1, k + 1) - e[i] * p[j] * n[k]).abs() < 1e-9);
                }
                assert!((r.get(i + 1, j + 1, 0) - e[i] * p[j]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn static_field_matches_exact_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let rho = random_mixed_rho(&mut rng, 3);
    let r0 = r_of(&rho);
    let j = CouplingConstants::reference();
    let spec = FieldSpec::constant_z();
    let series = integrate(&r0, &spec, &j, &cfg(4.0)).unwrap();

    let f = spec.field_at(0.0);
    let h = build_hamiltonian(f.e, f.p, f.n, &j).unwrap();
    let u = unitary_step(&h, 4.0);
    let exact = to_dyn(&(u * to_mat8(&rho) * u.adjoint()));
    let end = r_of(&exact);
    assert!(series.states().last().unwrap().max_abs_diff(&end) < 1e-9);
}

#[test]
fn coefficient_equations_agree_with_direct_propagation() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let j = CouplingConstants::new(0.4, -0.25, 0.15);
    for spec in [FieldSpec::resonant(), FieldSpec::non_resonant().with_multipliers([1.0, -0.5, 3.0])] {
        let rho = random_mixed_rho(&mut rng, 2);
        let r0 = r_of(&rho);
        let series = integrate(&r0, &spec, &j, &cfg(3.0)).unwrap();
        let dm = DensityMatrix::new(to_mat8(&rho)).unwrap();
        let rhos = propagate_direct(&dm, &spec, &j, series.taus(), 1e-4).unwrap();
        for (a, b) in rhos.iter().zip(series.states()) {
            assert!(rho_to_r(a).unwrap().max_abs_diff(b) < 1e-8);
        }
    }
}

#[test]
fn adaptive_and_fixed_step_agree() {
    let (_, r0) = initial_state(StateName::W, None).unwrap();
    let j = CouplingConstants::reference();
    let spec = FieldSpec::non_resonant();
    let a = integrate(&r0, &spec, &j, &cfg(5.0)).unwrap();
    let b = integrate(&r0, &spec, &j, &IntegratorConfig { method: Method::Rk45, ..cfg(5.0) }).unwrap();
    assert_eq!(a.taus().len(), b.taus().len());
    for (ta, tb) in a.taus().iter().zip(b.taus()) {
        assert!((ta - tb).abs() < 1e-12);
    }
    for (x, y) in a.states().iter().zip(b.states()) {
        assert!(x.max_abs_diff(y) < 1e-9);
    }
}

#[test]
fn custom_field_reproduces_resonant_field() {
    let (_, r0) = initial_state(StateName::Ghz, None).unwrap();
    let j = CouplingConstants::reference();
    let custom = FieldSpec::custom(|t| [-0.3 * t.cos(), 0.3 * t.sin(), -1.0]);
    let a = integrate(&r0, &FieldSpec::resonant(), &j, &cfg(2.0)).unwrap();
    let b = integrate(&r0, &custom, &j, &cfg(2.0)).unwrap();
    for (x, y) in a.states().iter().zip(b.states()) {
        assert!(x.max_abs_diff(y) < 1e-13);
    }
}

#[test]
fn two_qubit_marginal_short_run() {
    let mut psi = Ket8::zeros();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    psi += basis_ket(0b000) * C64::new(s, 0.0);
    psi += basis_ket(0b110) * C64::new(s, 0.0);
    let r0 = rho_to_r(&DensityMatrix::from_pure(&psi).unwrap()).unwrap();
    let j = CouplingConstants::new(-0.2, 0.0, 0.0);
    let spec = FieldSpec::resonant();
    let three = integrate(&r0, &spec, &j, &cfg(3.0)).unwrap();
    let (taus, two) = integrate_two(&r0.marginal_ep(), &spec, j.j_ep, &cfg(3.0)).unwrap();
    assert_eq!(taus, three.taus());
    for (a, b) in three.states().iter().zip(&two) {
        assert!(a.marginal_ep().max_abs_diff(b) < 1e-12);
    }
}

#[test]
fn coarse_steps_trip_the_drift_check() {
    let (_, r0) = initial_state(StateName::Ghz, None).unwrap();
    let bad = IntegratorConfig { dt: 0.5, sample_every: 1, tau_max: 30.0, ..IntegratorConfig::default() };
    let err = integrate(&r0, &FieldSpec::resonant(), &CouplingConstants::reference(), &bad).unwrap_err();
    assert!(matches!(err, Error::Accuracy { .. }), "{err}");
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn rejects_invalid_inputs() {
    let r0 = RTensor::identity();
    let spec = FieldSpec::resonant();
    let j = CouplingConstants::reference();
    for bad in [
        IntegratorConfig { dt: 0.0, ..cfg(1.0) },
        IntegratorConfig { tau_max: -1.0, ..cfg(1.0) },
        IntegratorConfig { sample_every: 0, ..cfg(1.0) },
        IntegratorConfig { dt: f64::NAN, ..cfg(1.0) },
    ] {
        assert!(integrate(&r0, &spec, &j, &bad).is_err());
    }
    // The maximally mixed state is stationary under any Hamiltonian.
    let s = integrate(&r0, &spec, &j, &cfg(1.0)).unwrap();
    assert!(s.states().iter().all(|r| r.max_abs_diff(&r0) == 0.0));
}
