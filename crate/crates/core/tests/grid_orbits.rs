use proptest::prelude::*;
use symtile::dynamics::{classify, run_orbit, step, ClassifyConfig, OrbitOptions, OrbitRecord, PairState, Termination, Verdict};
use symtile::geom::{rational_circle_point, ExactScalar, Mat2, Scalar, Vec2};
use symtile::tiling::{Axis, EdgeRef, Grid, Particle, Tiling};

const DRIFT_CYCLE: &str = r#"{"a":{"point":{"x":"0/1","y":"9116367884517204/18986893797259465"},"edge":{"Grid":{"axis":"V","line":0,"cell":0}},"direction":{"x":"77/85","y":"-36/85"}},"b":{"point":{"x":"-49134424431028644/104797790439419125","y":"1768839279517031184/8069429863835272625"},"edge":{"Grid":{"axis":"V","line":0,"cell":0}},"direction":{"x":"0/1","y":"1/1"}}}"#;

const V00: EdgeRef = EdgeRef::Grid {
    axis: Axis::V,
    line: 0,
    cell: 0,
};
const H00: EdgeRef = EdgeRef::Grid {
    axis: Axis::H,
    line: 0,
    cell: 0,
};

fn pair(p: i64, q: i64) -> (Grid<ExactScalar>, Grid<ExactScalar>) {
    (Grid::standard(), Grid::rotated(&rational_circle_point(&ExactScalar::new(p, q))))
}

fn start(a: &Grid<ExactScalar>, b: &Grid<ExactScalar>, t: ExactScalar, u: ExactScalar) -> PairState<ExactScalar> {
    PairState::new(
        Particle::new(a.edge_point(&V00, &t).unwrap(), V00, a.crossing(&V00).unwrap()),
        Particle::new(b.edge_point(&H00, &u).unwrap(), H00, b.crossing(&H00).unwrap()),
    )
}

fn exact(keep: bool, max_steps: usize) -> OrbitOptions {
    OrbitOptions {
        max_steps,
        tol: 0.0,
        keep_states: keep,
    }
}

#[test]
fn seven_elevenths_drift_cycle_heads_southeast() {
    let (a, b) = pair(7, 11);
    let s: PairState<ExactScalar> = serde_json::from_str(DRIFT_CYCLE).unwrap();
    let rec = run_orbit(&a, &b, s, &exact(true, 200)).unwrap();
    match rec.termination {
        Termination::TranslationPeriodic {
            period, drift_a, drift_b, ..
        } => {
            assert_eq!(period, 11);
            assert_eq!(drift_a, [2, -1]);
            assert_eq!(drift_b, [2, -1]);
        }
        ref other => panic!("expected a drift cycle, got {other:?}"),
    }
    assert_eq!(classify(&rec, &ClassifyConfig::default()).verdict, Verdict::UnboundedDrift);
}

#[test]
fn drift_translates_the_state_by_lattice_vectors() {
    let (a, b) = pair(7, 11);
    let s: PairState<ExactScalar> = serde_json::from_str(DRIFT_CYCLE).unwrap();
    let mut cur = s.clone();
    for _ in 0..11 {
        cur = step(&a, &b, &cur).unwrap();
    }
    let shift_a = a.lattice_vector([2, -1]);
    let shift_b = b.lattice_vector([2, -1]);
    assert_eq!(cur.a.point, &s.a.point + &shift_a);
    assert_eq!(cur.b.point, &s.b.point + &shift_b);
    assert_eq!(cur.a.direction, s.a.direction);
    assert_eq!(cur.b.direction, s.b.direction);
}

#[test]
fn recorded_orbit_replays_after_json_round_trip() {
    let (a, b) = pair(1, 3);
    let s = start(&a, &b, ExactScalar::new(2, 7), ExactScalar::new(3, 5));
    let rec = run_orbit(&a, &b, s, &exact(true, 300)).unwrap();
    let json = serde_json::to_string(&rec).unwrap();
    let back: OrbitRecord<ExactScalar> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rec);
    assert!(back.replay(&a, &b, 0.0).unwrap());
}

#[test]
fn quarter_turn_orbits_close_in_float_mode() {
    let a = Grid::<f64>::standard();
    let b = Grid::<f64>::rotated(&Vec2::from_angle(std::f64::consts::FRAC_PI_4));
    for (t, u) in [(0.3, 0.6), (0.71, 0.13), (0.5, 0.25)] {
        let s = PairState::new(
            Particle::new(a.edge_point(&V00, &t).unwrap(), V00, a.crossing(&V00).unwrap()),
            Particle::new(b.edge_point(&H00, &u).unwrap(), H00, b.crossing(&H00).unwrap()),
        );
        let rec = run_orbit(&a, &b, s, &OrbitOptions::default()).unwrap();
        assert!(matches!(rec.termination, Termination::Periodic { period: 4, .. }), "{:?}", rec.termination);
    }
}

fn map_state(t: &Mat2<ExactScalar>, s: &PairState<ExactScalar>) -> PairState<ExactScalar> {
    let f = |p: &Particle<ExactScalar>| Particle::new(t.apply(&p.point), p.edge, t.apply(&p.direction));
    PairState::new(f(&s.a), f(&s.b))
}

fn fraction() -> impl Strategy<Value = ExactScalar> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| ExactScalar::new(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linear_maps_conjugate_orbits(
        m in (fraction(), fraction(), fraction(), fraction()),
        t in 1i64..30,
        u in 1i64..30,
        slope in prop::sample::select(vec![(1i64, 3i64), (1, 2), (2, 5), (7, 11)]),
    ) {
        let tm = Mat2::new(m.0, m.1, m.2, m.3);
        prop_assume!(!tm.det().is_zero());
        let (a, b) = pair(slope.0, slope.1);
        let (ta, tb) = (a.transformed(&tm).unwrap(), b.transformed(&tm).unwrap());
        let mut s = start(&a, &b, ExactScalar::new(t, 31), ExactScalar::new(u, 31));
        let mut ts = map_state(&tm, &s);
        for _ in 0..150 {
            match (step(&a, &b, &s), step(&ta, &tb, &ts)) {
                (Ok(n), Ok(m)) => {
                    prop_assert_eq!(map_state(&tm, &n), m.clone());
                    s = n;
                    ts = m;
                }
                (Err(_), Err(_)) => break,
                (x, y) => prop_assert!(false, "one side failed: {:?} / {:?}", x.err(), y.err()),
            }
        }
    }

    #[test]
    fn dilation_scales_exact_orbits(k in 1i64..9, d in 1i64..9, t in 1i64..30, u in 1i64..30) {
        let scale = ExactScalar::new(k, d);
        let tm = Mat2::new(scale.clone(), ExactScalar::zero(), ExactScalar::zero(), scale);
        let (a, b) = pair(2, 5);
        let s = start(&a, &b, ExactScalar::new(t, 31), ExactScalar::new(u, 31));
        let (ta, tb) = (a.transformed(&tm).unwrap(), b.transformed(&tm).unwrap());
        let rec = run_orbit(&a, &b, s.clone(), &exact(true, 100)).unwrap();
        let trec = run_orbit(&ta, &tb, map_state(&tm, &s), &exact(true, 100)).unwrap();
        prop_assert_eq!(rec.states.len(), trec.states.len());
        for (x, y) in rec.states.iter().zip(&trec.states) {
            prop_assert_eq!(&map_state(&tm, x), y);
        }
    }
}
