use netshare::analytic::{self, closed_form, Analytic, NoiseModel, OperatorSet, Route, Sharing};
use netshare::specfun;
use netshare::BandMode;
use proptest::prelude::*;

const IL: NoiseModel = NoiseModel::InterferenceLimited;

fn cov(sharing: Sharing, mode: BandMode, theta: f64, ops: &OperatorSet, alpha: f64) -> f64 {
    Analytic::default().coverage(sharing, mode, theta, ops, 0, alpha, &IL).unwrap()
}

fn densities() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..20.0, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coverage_is_a_probability(d in densities(), db in -20.0f64..30.0, alpha in 2.2f64..6.0) {
        let ops = OperatorSet::new(d).unwrap();
        let theta = analytic::db_to_linear(db);
        for sharing in Sharing::ALL {
            for mode in [BandMode::Flat, BandMode::Selective] {
                let p = cov(sharing, mode, theta, &ops, alpha);
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p), "{sharing:?} {mode:?} {p}");
            }
        }
    }

    #[test]
    fn coverage_decreases_in_threshold(d in densities(), db in -15.0f64..25.0, step in 0.1f64..5.0) {
        let ops = OperatorSet::new(d).unwrap();
        for sharing in Sharing::ALL {
            for mode in [BandMode::Flat, BandMode::Selective] {
                let lo = cov(sharing, mode, analytic::db_to_linear(db), &ops, 4.0);
                let hi = cov(sharing, mode, analytic::db_to_linear(db + step), &ops, 4.0);
                prop_assert!(hi <= lo + 1e-12);
            }
        }
    }

    #[test]
    fn interference_limited_coverage_is_scale_invariant(d in densities(), scale in 0.01f64..100.0, db in -10.0f64..20.0) {
        let theta = analytic::db_to_linear(db);
        let a = OperatorSet::new(d.clone()).unwrap();
        let b = OperatorSet::new(d.iter().map(|x| x * scale).collect()).unwrap();
        for sharing in Sharing::ALL {
            for mode in [BandMode::Flat, BandMode::Selective] {
                let pa = cov(sharing, mode, theta, &a, 4.0);
                let pb = cov(sharing, mode, theta, &b, 4.0);
                prop_assert!((pa - pb).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn scenario_ordering(d in densities(), db in -10.0f64..20.0) {
        let ops = OperatorSet::new(d).unwrap();
        let theta = analytic::db_to_linear(db);
        let none = cov(Sharing::None, BandMode::Flat, theta, &ops, 4.0);
        let infra = cov(Sharing::Infrastructure, BandMode::Flat, theta, &ops, 4.0);
        let spec = cov(Sharing::Spectrum, BandMode::Flat, theta, &ops, 4.0);
        let full = cov(Sharing::Full, BandMode::Flat, theta, &ops, 4.0);
        prop_assert!(infra >= none - 1e-12);
        prop_assert!((full - none).abs() < 1e-10);
        prop_assert!(spec <= none + 1e-12);
        // band diversity only helps
        prop_assert!(cov(Sharing::Spectrum, BandMode::Selective, theta, &ops, 4.0) >= spec - 1e-10);
        prop_assert!(cov(Sharing::Full, BandMode::Selective, theta, &ops, 4.0) >= full - 1e-10);
    }

    #[test]
    fn noise_only_lowers_coverage(d in densities(), w in 1e-4f64..10.0, db in -10.0f64..20.0) {
        let ops = OperatorSet::new(d).unwrap();
        let theta = analytic::db_to_linear(db);
        let model = Analytic::default();
        for sharing in Sharing::ALL {
            for mode in [BandMode::Flat, BandMode::Selective] {
                let quiet = model.coverage(sharing, mode, theta, &ops, 0, 4.0, &IL).unwrap();
                let noisy = model.coverage(sharing, mode, theta, &ops, 0, 4.0, &NoiseModel::WithNoise { power: w }).unwrap();
                prop_assert!(noisy <= quiet + 1e-12);
            }
        }
    }

    #[test]
    fn association_probabilities_sum_to_one(d in densities()) {
        let ops = OperatorSet::new(d).unwrap();
        let s: f64 = (0..ops.len()).map(|i| analytic::association_probability(&ops, i).unwrap()).sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_is_monotone_and_below_zeta0(theta in 1e-3f64..1e3, alpha in 2.2f64..6.0, l in 1u32..6) {
        let z = specfun::zeta_l(theta, alpha, l).unwrap();
        let z0 = specfun::zeta0_l(theta, alpha, l).unwrap();
        prop_assert!(z > 0.0 && z < z0);
        prop_assert!(specfun::zeta_l(theta * 1.5, alpha, l).unwrap() > z);
        prop_assert!(specfun::zeta_l(theta, alpha, l + 1).unwrap() < z);
    }

    #[test]
    fn closed_forms_match_exact_route(db in -10.0f64..20.0, d in prop::collection::vec(0.1f64..5.0, 2..5)) {
        let ops = OperatorSet::new(d).unwrap();
        let theta = analytic::db_to_linear(db);
        let model = Analytic::default();
        let exact = |s, m| model.coverage_with_route(s, m, theta, &ops, 0, 4.0, &IL, Route::Integral).unwrap();
        prop_assert!((closed_form::infrastructure(theta, &ops).unwrap() - exact(Sharing::Infrastructure, BandMode::Flat)).abs() < 1e-9);
        prop_assert!((closed_form::spectrum_flat(theta, &ops, 0).unwrap() - exact(Sharing::Spectrum, BandMode::Flat)).abs() < 1e-9);
        prop_assert!((closed_form::spectrum_selective(theta, &ops, 0).unwrap() - exact(Sharing::Spectrum, BandMode::Selective)).abs() < 1e-9);
        prop_assert!((closed_form::full_selective(theta, ops.len()).unwrap() - exact(Sharing::Full, BandMode::Selective)).abs() < 1e-9);
    }
}

#[test]
fn selective_cap_points_to_monte_carlo() {
    let ops = OperatorSet::equal(9, 1.0).unwrap();
    let e = Analytic::default()
        .coverage(Sharing::Spectrum, BandMode::Selective, 1.0, &ops, 0, 4.0, &IL)
        .unwrap_err();
    assert!(e.to_string().contains("Monte-Carlo"));
}

#[test]
fn rate_scales_with_bandwidth() {
    let a = OperatorSet::with_bandwidth(vec![1.0, 1.0], 1.0).unwrap();
    let b = OperatorSet::with_bandwidth(vec![1.0, 1.0], 20.0).unwrap();
    for sharing in Sharing::ALL {
        let ra = analytic::average_rate(sharing, &a, 0, 4.0, &IL).unwrap();
        let rb = analytic::average_rate(sharing, &b, 0, 4.0, &IL).unwrap();
        assert!((rb / ra - 20.0).abs() < 1e-9);
    }
}

#[test]
fn full_sharing_rate_is_linear_in_operator_count() {
    let base = analytic::average_rate(Sharing::None, &OperatorSet::equal(1, 1.0).unwrap(), 0, 4.0, &IL).unwrap();
    for n in 1..=5 {
        let ops = OperatorSet::equal(n, 1.0).unwrap();
        let r = analytic::average_rate(Sharing::Full, &ops, 0, 4.0, &IL).unwrap();
        assert!((r - n as f64 * base).abs() < 1e-8);
    }
}
