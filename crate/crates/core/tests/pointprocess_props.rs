mod common;

use netshare::pointprocess::{nearest_point, sample_gpp, sample_ppp, Deployment, GppParams, Point, Selector, Window};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn deployment(seed: u64, densities: &[f64], radius: f64) -> Deployment {
    let w = Window::new(radius).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Deployment::new(densities.iter().map(|&d| sample_ppp(d, &w, &mut rng).unwrap()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exclusion_is_idempotent(seed in any::<u64>(), r in 0.0f64..3.0) {
        let once = deployment(seed, &[1.0, 0.7, 0.4], 4.0).with_exclusion_zones(r).unwrap();
        let twice = once.clone().with_exclusion_zones(r).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn exclusion_is_monotone(seed in any::<u64>(), r1 in 0.0f64..2.0, dr in 0.0f64..2.0) {
        let base = deployment(seed, &[1.0, 1.0], 4.0);
        let small = base.clone().with_exclusion_zones(r1).unwrap();
        let large = base.with_exclusion_zones(r1 + dr).unwrap();
        for op in 0..2 {
            for (a, b) in small.masks(op).iter().zip(large.masks(op)) {
                for band in 0..2 {
                    // a larger radius never re-enables a band
                    prop_assert!(a.allows(band) || !b.allows(band));
                }
                prop_assert!(b.allows(op));
            }
        }
    }

    #[test]
    fn sampling_is_a_pure_function_of_the_seed(seed in any::<u64>()) {
        prop_assert_eq!(deployment(seed, &[2.0, 1.0], 3.0), deployment(seed, &[2.0, 1.0], 3.0));
        let p = GppParams::new(1.5, 0.6, 0.3).unwrap();
        let w = Window::new(3.0).unwrap();
        let a = sample_gpp(&p, &w, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = sample_gpp(&p, &w, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn nearest_point_is_the_minimum(seed in any::<u64>(), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let d = deployment(seed, &[1.0, 2.0], 4.0);
        prop_assume!(d.total_points() > 0);
        let q = Point::new(x, y);
        let n = nearest_point(&d, q, Selector::All).unwrap();
        for op in 0..2 {
            for p in d.points(op) {
                prop_assert!(n.distance <= p.distance(&q));
            }
        }
    }
}

#[test]
fn nearest_distance_passes_ks_test() {
    // P(D ≤ r) = 1 - exp(-λπr²)
    let lambda = 1.3;
    let w = Window::for_density(lambda).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut samples: Vec<f64> = (0..4000)
        .map(|_| {
            let pts = sample_ppp(lambda, &w, &mut rng).unwrap();
            let d = Deployment::new(vec![pts]).unwrap();
            nearest_point(&d, Point::ORIGIN, Selector::All).unwrap().distance
        })
        .collect();
    let n = samples.len();
    let ks = common::ks_statistic(&mut samples, |r| 1.0 - (-lambda * std::f64::consts::PI * r * r).exp());
    assert!(ks < common::ks_critical_1pct(n), "KS {ks}");
}

#[test]
fn association_frequency_follows_density_share() {
    let (l1, l2) = (1.0, 3.0);
    let w = Window::for_density(l1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let draws = 20_000;
    let hits = (0..draws)
        .filter(|_| {
            let d = Deployment::new(vec![sample_ppp(l1, &w, &mut rng).unwrap(), sample_ppp(l2, &w, &mut rng).unwrap()]).unwrap();
            nearest_point(&d, Point::ORIGIN, Selector::All).unwrap().operator == 0
        })
        .count();
    let p = hits as f64 / draws as f64;
    let expected = l1 / (l1 + l2);
    let se = (expected * (1.0 - expected) / draws as f64).sqrt();
    assert!((p - expected).abs() < 3.0 * se, "{p} vs {expected}");
}

#[test]
fn excluded_fraction_matches_void_probability() {
    let radius = 0.5;
    let w = Window::for_density(1.0).unwrap();
    let mut excluded = 0;
    let mut total = 0;
    for seed in 0..200 {
        let d = deployment(seed, &[1.0, 1.0], w.radius()).with_exclusion_zones(radius).unwrap();
        let (e, t) = d.excluded_count(0, &w, radius);
        excluded += e;
        total += t;
    }
    let f = excluded as f64 / total as f64;
    let expected = 1.0 - (-std::f64::consts::PI * radius * radius).exp();
    assert!((f - expected).abs() < 0.01, "{f} vs {expected}");
}

#[test]
fn gpp_pair_radius_sets_intra_cluster_distance() {
    let p = GppParams::new(0.2, 1.0, 0.7).unwrap();
    let w = Window::new(10.0).unwrap();
    let [a, b] = sample_gpp(&p, &w, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let d = Deployment::new(vec![a.clone(), b]).unwrap();
    // every centre well inside the window has its companion at exactly u
    for c in a.iter().filter(|c| c.norm_sq() < 81.0) {
        let n = nearest_point(&d, *c, Selector::Operator(1)).unwrap();
        assert!(n.distance <= 0.7 + 1e-12);
    }
}
