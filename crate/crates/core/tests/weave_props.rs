use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use symtile::tiling::Sunburst;
use symtile::weave::{
    holonomy, holonomy_by, is_oriented_weave, left_times_right_holonomy, orbit_sunburst, random_balanced,
    random_oriented_weave, solve_phase, weave_interval, HolonomyMethod, SunburstPair,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_iteration(seed in any::<u64>(), n in 3usize..=12) {
        let p = random_oriented_weave(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let prod = holonomy_by(&p, HolonomyMethod::Product).unwrap().h;
        let iter = holonomy_by(&p, HolonomyMethod::Iteration).unwrap().h;
        prop_assert!((prod - iter).abs() <= 1e-12 * iter);
    }

    #[test]
    fn left_and_right_holonomies_cancel(seed in any::<u64>(), n in 3usize..=12) {
        let p = random_oriented_weave(n, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!((left_times_right_holonomy(&p).unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn interval_phases_are_weaves(seed in any::<u64>(), n in 3usize..=12, frac in 0.01f64..0.99) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Sunburst::regular(n, 0.0);
        let b = random_balanced(n, &mut rng);
        let iv = weave_interval(&a, &b).unwrap();
        let p = SunburstPair::new(a, b, iv.lo + frac * iv.len()).unwrap();
        prop_assert!(is_oriented_weave(&p));
    }

    #[test]
    fn solved_phase_closes_a_convex_orbit(seed in any::<u64>(), n in 3usize..=12) {
        let a = random_balanced(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let b = Sunburst::regular(n, 0.0);
        let theta = solve_phase(&a, &b, 1e-12).unwrap();
        let p = SunburstPair::new(a, b, theta).unwrap();
        prop_assert!(holonomy(&p).unwrap().h.ln().abs() <= 1e-12);
        let pts = orbit_sunburst(&p, 2.0, n).unwrap();
        prop_assert!((&pts[n] - &pts[0]).norm() <= 1e-9);
        for i in 0..n {
            let (x, y, z) = (&pts[i], &pts[(i + 1) % n], &pts[(i + 2) % n]);
            prop_assert!((y - x).cross(&(z - y)) > 0.0);
        }
    }
}

#[test]
fn pair_round_trips_through_json() {
    let p = random_oriented_weave(7, &mut ChaCha8Rng::seed_from_u64(1));
    let back: SunburstPair = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(back.n(), 7);
    assert!((back.phase() - p.phase()).abs() < 1e-15);
    let (h0, h1) = (holonomy(&p).unwrap().h, holonomy(&back).unwrap().h);
    assert!((h0 - h1).abs() <= 1e-12 * h0);
}

#[test]
fn regular_interval_has_the_expected_length() {
    for n in 3..=12 {
        let iv = weave_interval(&Sunburst::regular(n, 0.0), &Sunburst::regular(n, 0.0)).unwrap();
        assert!((iv.len() - (PI - 2.0 * PI / n as f64)).abs() <= 1e-12, "N = {n}");
    }
}
