mod common;

use common::channels;
use irs_relay::beamforming::{
    ais_max_rp, irses_max_rp_mrc, irses_partition, nsp_max_rp_mrc, second_slot_optimize, Convergence,
    InterferenceMode, NspMode, ReceiveCombiner,
};
use irs_relay::linalg::phase_distance;
use irs_relay::metrics::{rate_from_power, system_rate};
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..6).prop_flat_map(|m| (Just(m), (1usize..5).prop_map(move |k| m * k)))
}

fn monotone(trace: &[f64]) -> bool {
    trace.windows(2).all(|w| w[1] >= w[0] - 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phases_unit_modulus_and_beams_unit_norm((m, n) in dims(), seed in any::<u64>(), snr_db in 0.0f64..40.0) {
        let noise = 20.0 / 10f64.powf(snr_db / 10.0);
        let ch = channels(m, n, seed);
        let conv = Convergence::default();
        let ais = ais_max_rp(&ch, 10.0, noise, &conv).unwrap();
        let nsp = nsp_max_rp_mrc(&ch, 10.0, noise, &conv, NspMode::Effective).unwrap();
        let second = second_slot_optimize(&ch, 10.0, noise, &conv).unwrap();
        for theta in [&ais.theta1, &nsp.theta1, &second.theta2] {
            prop_assert_eq!(theta.len(), n);
            for c in theta.coefficients().iter() {
                prop_assert!((c.norm() - 1.0).abs() < 1e-15);
            }
        }
        let ReceiveCombiner::Single(u) = &ais.combiner else { panic!("AIS uses one beamformer") };
        prop_assert!((u.weights().norm() - 1.0).abs() < 1e-12);
        let ReceiveCombiner::Separated { source, irs } = &nsp.combiner else { panic!("NSP separates") };
        prop_assert!((source.weights().norm() - 1.0).abs() < 1e-12);
        prop_assert!((irs.weights().norm() - 1.0).abs() < 1e-12);
        prop_assert!((second.u_t.weights().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn traces_never_decrease((m, n) in dims(), seed in any::<u64>()) {
        let ch = channels(m, n, seed);
        let conv = Convergence::default();
        let ais = ais_max_rp(&ch, 10.0, 0.02, &conv).unwrap();
        let nsp = nsp_max_rp_mrc(&ch, 10.0, 0.02, &conv, NspMode::Effective).unwrap();
        let second = second_slot_optimize(&ch, 10.0, 0.02, &conv).unwrap();
        prop_assert!(monotone(&ais.trace));
        prop_assert!(monotone(&nsp.trace));
        prop_assert!(monotone(&second.trace));
        prop_assert!(ais.iterations <= conv.max_iter && !ais.trace.is_empty());
    }

    #[test]
    fn first_slot_scale_covariance((m, n) in dims(), seed in any::<u64>(), c in 0.1f64..10.0) {
        let ch = channels(m, n, seed);
        let scaled = ch.scale_first_slot(c);
        // fixed iteration budget: the stopping test on rate is not scale free
        let conv = Convergence { epsilon: f64::MIN_POSITIVE, max_iter: 20 };
        let base = ais_max_rp(&ch, 10.0, 0.02, &conv).unwrap();
        let big = ais_max_rp(&scaled, 10.0, 0.02, &conv).unwrap();
        let ratio = big.receive_power_watt / base.receive_power_watt;
        prop_assert!((ratio / (c * c) - 1.0).abs() < 1e-9, "ratio {}", ratio);
        for (x, y) in base.theta1.angles().iter().zip(big.theta1.angles()) {
            prop_assert!(phase_distance(*x, *y) < 1e-6);
        }
        let part = irses_partition(n, m, seed).unwrap();
        let noise = vec![0.02; m];
        let a = irses_max_rp_mrc(&ch, 10.0, &noise, &part, InterferenceMode::Idealized).unwrap();
        let b = irses_max_rp_mrc(&scaled, 10.0, &noise, &part, InterferenceMode::Idealized).unwrap();
        prop_assert!((b.receive_power_watt / a.receive_power_watt / (c * c) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn system_rate_symmetric_and_lipschitz(a in 0.0f64..30.0, b in 0.0f64..30.0, d in -1.0f64..1.0) {
        prop_assert_eq!(system_rate(a, b), system_rate(b, a));
        prop_assert_eq!(system_rate(a, b), 0.5 * a.min(b));
        let moved = system_rate((a + d).max(0.0), b);
        prop_assert!((moved - system_rate(a, b)).abs() <= 0.5 * d.abs() + 1e-15);
    }

    #[test]
    fn rate_grows_with_power(p in 0.0f64..1e3, dp in 1e-9f64..1e3, noise in 1e-6f64..10.0) {
        let r0 = rate_from_power(p, noise).unwrap();
        let r1 = rate_from_power(p + dp, noise).unwrap();
        prop_assert!(r0 >= 0.0);
        prop_assert!(r1 > r0);
    }
}
