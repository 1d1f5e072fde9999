mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tribloch::dynamics::{integrate, FieldKind, FieldSpec, IntegratorConfig, Method};
use tribloch::harness::{parse_config, ScenarioConfig};
use tribloch::measures::{concurrence_c3, m_b, m_l, m_sm, Channel, PurityCheck};
use tribloch::pauli::{bloch_length, purity, r_to_rho, rho_to_r, StateName};
use tribloch::CouplingConstants;

fn seeded_state(seed: u64, rank: usize) -> M {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if rank == 1 {
        random_pure_rho(&mut rng)
    } else {
        random_mixed_rho(&mut rng, rank)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn r_rho_round_trip(seed in any::<u64>(), rank in 1usize..=8) {
        let rho = seeded_state(seed, rank);
        let r = r_of(&rho);
        prop_assert_eq!(r.get(0, 0, 0), 1.0);
        prop_assert!(r.coeffs().iter().all(|v| v.abs() <= 1.0 + 1e-12));
        let back = r_to_rho(&r).unwrap();
        let again = rho_to_r(&back).unwrap();
        prop_assert!(r.max_abs_diff(&again) < 1e-12);
        let direct = rho_from_r(&r);
        prop_assert!((&direct - &rho).norm() < 1e-12);
    }

    #[test]
    fn bloch_length_tracks_purity(seed in any::<u64>(), rank in 1usize..=8) {
        let rho = seeded_state(seed, rank);
        let r = r_of(&rho);
        let b = bloch_length(&r);
        prop_assert!((b * b + 1.0 - 8.0 * common::purity(&rho)).abs() < 1e-10);
        prop_assert!((purity(&r) - common::purity(&rho)).abs() < 1e-12);
        if rank == 1 {
            prop_assert!((b - 7f64.sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn local_rotations_preserve_measures(seed in any::<u64>(), rank in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let r = r_of(&seeded_state(seed, rank));
        let rot = [random_rotation(&mut rng), random_rotation(&mut rng), random_rotation(&mut rng)];
        let r2 = r.rotate_locally(rot);
        prop_assert!((m_b(&r) - m_b(&r2)).abs() < 1e-10);
        prop_assert!((m_l(&r) - m_l(&r2)).abs() < 1e-10);
        prop_assert!((m_sm(&r) - m_sm(&r2)).abs() < 1e-10);
        let c = |x| concurrence_c3(x, PurityCheck::Skip).unwrap();
        prop_assert!((c(&r) - c(&r2)).abs() < 1e-10);
        prop_assert!((bloch_length(&r) - bloch_length(&r2)).abs() < 1e-10);
        // The rotated tensor is still a physical state.
        prop_assert!(r_to_rho(&r2).is_ok());
    }

    #[test]
    fn product_states_are_unentangled(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = r_of(&random_product_rho(&mut rng));
        prop_assert!(m_sm(&r) < 1e-10);
        prop_assert!(m_b(&r) < 1e-10);
        prop_assert!(m_l(&r) < 1e-4);
        prop_assert!(concurrence_c3(&r, PurityCheck::Enforce).unwrap() < 1e-5);
    }

    #[test]
    fn config_text_round_trips(
        state in prop::sample::select(vec![StateName::S, StateName::Bs, StateName::Ghz, StateName::W, StateName::V, StateName::Mix, StateName::Polarized]),
        x in 0.34f64..=1.0,
        kind in prop::sample::select(vec!["R", "NR", "ConstantZ"]),
        omega0 in -5.0f64..5.0,
        omega1 in 0.0f64..2.0,
        j in prop::array::uniform3(-1.0f64..1.0),
        mult in prop::array::uniform3(0.0f64..8.0),
        tau_max in 0.5f64..100.0,
        every in 1usize..50,
        rk45 in any::<bool>(),
        oracle in any::<bool>(),
        measures in prop::sample::subsequence(vec![Channel::MSm, Channel::C3, Channel::MB, Channel::MK, Channel::ML, Channel::PFlip, Channel::PFlipE, Channel::Rho11], 1..=8),
    ) {
        let cfg = ScenarioConfig {
            name: format!("run_{state}"),
            initial: state,
            x: (state == StateName::Mix).then_some(x),
            field_kind: kind.parse::<FieldKind>().unwrap(),
            omega0,
            omega1,
            couplings: CouplingConstants::new(j[0], j[1], j[2]),
            multipliers: mult,
            tau_max,
            dt: 1e-3,
            sample_spacing: 1e-3 * every as f64,
            method: if rk45 { Method::Rk45 } else { Method::Rk4 },
            measures,
            oracle_check: oracle,
            output: None,
        };
        prop_assert_eq!(parse_config(&cfg.to_config_text()).unwrap(), cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn short_trajectories_conserve_bloch_length_and_purity(seed in any::<u64>(), rank in 1usize..=4, nr in any::<bool>()) {
        let rho = seeded_state(seed, rank);
        let r0 = r_of(&rho);
        let spec = if nr { FieldSpec::non_resonant() } else { FieldSpec::resonant() };
        let cfg = IntegratorConfig { tau_max: 2.0, ..IntegratorConfig::default() };
        let series = integrate(&r0, &spec, &CouplingConstants::reference(), &cfg).unwrap();
        let b0 = bloch_length(&r0);
        for r in series.states() {
            prop_assert!((bloch_length(r) - b0).abs() < 1e-9);
            prop_assert_eq!(r.get(0, 0, 0), 1.0);
        }
        let last = series.states().last().unwrap();
        prop_assert!(r_to_rho(last).is_ok());
    }
}
