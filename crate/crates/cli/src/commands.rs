use std::f64::consts::PI;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use symtile::dynamics::{
    classify, phase_portrait, run_orbit, ClassifyConfig, OrbitOptions, OrbitRecord, PairState, PortraitSpec, Verdict,
};
use symtile::geom::{rational_circle_point, ExactScalar, Scalar, Vec2};
use symtile::linkage::{solve_equiangular, EquilateralPolygon, Polygon};
use symtile::moduli::{
    hyperbolic_distance, inside_walls, pentagon_walls, poincare_disk, to_hyperbolic, verify_pentagon,
    HyperbolicPoint, OffsetVector,
};
use symtile::pipeline::equilateral_to_hyperbolic_with_radius;
use symtile::tiling::{Axis, EdgeRef, Grid, Particle, Sunburst, Tiling};
use symtile::weave::{
    holonomy, orbit_sunburst, random_balanced, random_sunburst, solve_phase, weave_interval, SunburstPair, WeaveError,
};

use crate::config::{
    ExperimentConfig, GridOrbitArgs, GridPair, GridPortraitArgs, LinkageConvertArgs, ModuliEmbedArgs,
    PentagonVerifyArgs, SunburstSolveArgs,
};
use crate::render::{palette, ppm, verdict_color, Svg};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Input(_) => 2,
        }
    }
}

fn input(e: impl Display) -> CliError {
    CliError::Input(e.to_string())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    write_file(path, text + "\n")
}

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    match cfg {
        ExperimentConfig::GridOrbit(a) => grid_orbit(a),
        ExperimentConfig::GridPortrait(a) => grid_portrait(a),
        ExperimentConfig::SunburstSolve(a) => sunburst_solve(a),
        ExperimentConfig::LinkageConvert(a) => linkage_convert(a),
        ExperimentConfig::ModuliEmbed(a) => moduli_embed(a),
        ExperimentConfig::PentagonVerify(a) => pentagon_verify(a),
    }
}

/// Parses `pi/4`, `3pi/4`, `-pi`, `2*pi/5` or a plain number of radians.
pub fn parse_angle(s: &str) -> Result<f64, CliError> {
    let bad = || CliError::Input(format!("cannot read angle {s:?}"));
    let t: String = s.to_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    let Some(i) = t.find("pi") else {
        return t.parse().map_err(|_| bad());
    };
    let coef = match t[..i].trim_end_matches('*') {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse().map_err(|_| bad())?,
    };
    let den: f64 = match &t[i + 2..] {
        "" => 1.0,
        rest => rest.strip_prefix('/').ok_or_else(bad)?.parse().map_err(|_| bad())?,
    };
    Ok(coef * PI / den)
}

/// Parses `AXIS:LINE:CELL`, e.g. `V:0:0`.
pub fn parse_edge(s: &str) -> Result<EdgeRef, CliError> {
    let bad = || CliError::Input(format!("cannot read edge {s:?}, expected AXIS:LINE:CELL"));
    let parts: Vec<&str> = s.split(':').collect();
    let [axis, line, cell] = parts[..] else {
        return Err(bad());
    };
    let axis = match axis.trim() {
        "V" | "v" => Axis::V,
        "H" | "h" => Axis::H,
        _ => return Err(bad()),
    };
    Ok(EdgeRef::Grid {
        axis,
        line: line.trim().parse().map_err(|_| bad())?,
        cell: cell.trim().parse().map_err(|_| bad())?,
    })
}

/// Parses `WxH`.
pub fn parse_resolution(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Input(format!("cannot read resolution {s:?}, expected WxH"));
    let (w, h) = s.to_lowercase().split_once('x').map(|(w, h)| (w.trim().parse(), h.trim().parse())).ok_or_else(bad)?;
    Ok((w.map_err(|_| bad())?, h.map_err(|_| bad())?))
}

trait Param: Scalar + Serialize + DeserializeOwned {
    fn parse_param(s: &str) -> Result<Self, CliError>;
}

impl Param for ExactScalar {
    fn parse_param(s: &str) -> Result<Self, CliError> {
        s.parse().map_err(input)
    }
}

impl Param for f64 {
    fn parse_param(s: &str) -> Result<Self, CliError> {
        match s.parse::<f64>() {
            Ok(v) => Ok(v),
            Err(_) => ExactScalar::parse_param(s).map(|q| q.to_f64()),
        }
    }
}

enum Rotation {
    Exact(Vec2<ExactScalar>),
    Float(Vec2<f64>),
}

fn rotation(g: &GridPair) -> Result<Rotation, CliError> {
    match (&g.angle, g.float) {
        (Some(_), false) => Err(input("--angle needs --float: an arbitrary rotation has no exact rational form")),
        (Some(a), true) => Ok(Rotation::Float(Vec2::from_angle(parse_angle(a)?))),
        (None, float) => {
            let u = rational_circle_point(&ExactScalar::parse_param(&g.t)?);
            Ok(if float { Rotation::Float(u.to_f64()) } else { Rotation::Exact(u) })
        }
    }
}

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

fn seed<S: Scalar>(g: &Grid<S>, edge: EdgeRef, t: &S) -> Result<Particle<S>, CliError> {
    let bad = || CliError::Input(format!("no start point on edge {edge:?}"));
    Ok(Particle::new(g.edge_point(&edge, t).ok_or_else(bad)?, edge, g.crossing(&edge).ok_or_else(bad)?))
}

pub fn grid_orbit(args: &GridOrbitArgs) -> Result<(), CliError> {
    match rotation(&args.grid)? {
        Rotation::Exact(u) => grid_orbit_in(Grid::standard(), Grid::rotated(&u), args),
        Rotation::Float(u) => grid_orbit_in(Grid::standard(), Grid::rotated(&u), args),
    }
}

fn grid_orbit_in<S: Param>(a: Grid<S>, b: Grid<S>, args: &GridOrbitArgs) -> Result<(), CliError> {
    let start = match &args.start {
        Some(path) => read_json::<PairState<S>>(path)?,
        None => PairState::new(
            seed(&a, V00, &S::parse_param(&args.ta)?)?,
            seed(&b, H00, &S::parse_param(&args.tb)?)?,
        ),
    };
    start
        .validate(&a, &b, args.grid.tol)
        .map_err(|e| CliError::Input(format!("invalid start: {e}")))?;
    let opts = OrbitOptions {
        max_steps: args.max_steps,
        tol: args.grid.tol,
        keep_states: true,
    };
    let rec = run_orbit(&a, &b, start, &opts).map_err(input)?;
    let c = classify(&rec, &ClassifyConfig::default());
    if let Some(path) = &args.json {
        write_json(path, &rec)?;
    }
    if let Some(path) = &args.out {
        write_file(path, orbit_svg(&a, &b, &rec, args.backdrop))?;
    }
    eprintln!("verdict: {:?}", c.verdict);
    println!("steps: {}", rec.steps);
    println!("verdict: {:?}", c.verdict);
    println!("detail: {}", c.evidence.summary);
    if let (Some(da), Some(db)) = (c.evidence.drift_a, c.evidence.drift_b) {
        let w = a.lattice_vector(da).to_f64();
        println!("drift: A {da:?}, B {db:?}, world ({}, {})", w.x, w.y);
    }
    Ok(())
}

/// Grid lines of `g` crossing the frame, skipped when there are too many
/// to draw.
fn backdrop<S: Scalar>(svg: &mut Svg, g: &Grid<S>, color: &str) {
    let (c0, c1) = (g.basis().column(0).to_f64(), g.basis().column(1).to_f64());
    let det = c0.cross(&c1);
    let (min, max) = svg.bounds();
    let corners = [[min[0], min[1]], [max[0], min[1]], [min[0], max[1]], [max[0], max[1]]];
    let local: Vec<[f64; 2]> = corners
        .iter()
        .map(|p| {
            let v = Vec2::new(p[0], p[1]);
            [v.cross(&c1) / det, c0.cross(&v) / det]
        })
        .collect();
    let lo = |i: usize| local.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min).floor();
    let hi = |i: usize| local.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max).ceil();
    let (x0, x1, y0, y1) = (lo(0), hi(0), lo(1), hi(1));
    if (x1 - x0) + (y1 - y0) > 400.0 {
        return;
    }
    let world = |x: f64, y: f64| [x * c0.x + y * c1.x, x * c0.y + y * c1.y];
    let w = 0.25 * svg.stroke();
    let mut x = x0;
    while x <= x1 {
        svg.line(world(x, y0), world(x, y1), color, w);
        x += 1.0;
    }
    let mut y = y0;
    while y <= y1 {
        svg.line(world(x0, y), world(x1, y), color, w);
        y += 1.0;
    }
}

fn orbit_svg<S: Scalar>(a: &Grid<S>, b: &Grid<S>, rec: &OrbitRecord<S>, with_grids: bool) -> String {
    let mut svg = Svg::fit(rec.trace_a.iter().chain(&rec.trace_b));
    let w = svg.stroke();
    if with_grids {
        svg.open_group("grids");
        backdrop(&mut svg, a, "#9ab");
        backdrop(&mut svg, b, "#dba");
        svg.close_group();
    }
    svg.open_group("factor-a");
    svg.polyline(&rec.trace_a, "#1f4fbf", w, false);
    svg.dot(rec.trace_a[0], 2.0 * w, "#1f4fbf");
    svg.close_group();
    svg.open_group("factor-b");
    svg.polyline(&rec.trace_b, "#d9730d", w, false);
    svg.dot(rec.trace_b[0], 2.0 * w, "#d9730d");
    svg.close_group();
    svg.finish()
}

pub fn grid_portrait(args: &GridPortraitArgs) -> Result<(), CliError> {
    match rotation(&args.grid)? {
        Rotation::Exact(u) => grid_portrait_in(Grid::<ExactScalar>::standard(), Grid::rotated(&u), args),
        Rotation::Float(u) => grid_portrait_in(Grid::<f64>::standard(), Grid::rotated(&u), args),
    }
}

fn grid_portrait_in<S: Param>(a: Grid<S>, b: Grid<S>, args: &GridPortraitArgs) -> Result<(), CliError> {
    let (width, height) = parse_resolution(&args.resolution)?;
    let spec = PortraitSpec {
        edge_a: parse_edge(&args.edge_a)?,
        edge_b: parse_edge(&args.edge_b)?,
        width,
        height,
        orbit: OrbitOptions {
            max_steps: args.max_steps,
            tol: args.grid.tol,
            keep_states: false,
        },
        classify: ClassifyConfig::default(),
    };
    let portrait = phase_portrait(&a, &b, &spec).map_err(input)?;
    if let Some(path) = &args.out {
        let pixels: Vec<[u8; 3]> = (0..height)
            .rev()
            .flat_map(|j| (0..width).map(move |i| (i, j)))
            .map(|(i, j)| verdict_color(portrait.get(i, j)))
            .collect();
        write_file(path, ppm(width, height, &pixels))?;
    }
    if let Some(path) = &args.json {
        write_json(path, &portrait)?;
    }
    for v in [
        Verdict::Periodic,
        Verdict::UnboundedDrift,
        Verdict::BoundedAttracted,
        Verdict::Singular,
        Verdict::Inconclusive,
    ] {
        println!("{v:?}: {}", portrait.count(v));
    }
    Ok(())
}

fn load_sunburst(path: &Path) -> Result<Sunburst<f64>, CliError> {
    let angles: Vec<f64> = read_json(path)?;
    Sunburst::from_angles(&angles).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: usize,
    pub pair: SunburstPair,
    pub interval: [f64; 2],
    pub phase: f64,
    pub h: f64,
    pub log_h: f64,
    pub step_factors: Vec<f64>,
    pub closure: f64,
    pub convex: bool,
    pub orbit: Vec<[f64; 2]>,
}

fn is_convex(pts: &[[f64; 2]]) -> bool {
    let n = pts.len();
    (0..n).all(|i| {
        let (p, q, r) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
        (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0]) > 0.0
    })
}

pub fn sunburst_solve(args: &SunburstSolveArgs) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    if args.a.is_none() && args.n < 3 {
        return Err(input("a sunburst needs at least 3 rays"));
    }
    let a = match (&args.a, args.random, args.balanced) {
        (Some(path), ..) => load_sunburst(path)?,
        (None, true, true) => random_balanced(args.n, &mut rng),
        (None, true, false) => random_sunburst(args.n, &mut rng),
        (None, false, _) => Sunburst::regular(args.n, 0.0),
    };
    let n = a.len();
    let b = match &args.b {
        Some(path) => load_sunburst(path)?,
        None => Sunburst::regular(n, 0.0),
    };
    if b.len() != n {
        return Err(input(format!("sunbursts have {n} and {} rays", b.len())));
    }
    let interval = match weave_interval(&a, &b) {
        Ok(iv) => iv,
        Err(WeaveError::EmptyInterval { arcs }) => {
            eprintln!("no phase makes the pair an oriented weave; admissible arc per index:");
            for (i, arc) in arcs.iter().enumerate() {
                eprintln!("  {i}: ({:.6}, {:.6})", arc.lo, arc.hi);
            }
            return Err(input("empty weave interval"));
        }
        Err(e) => return Err(input(e)),
    };
    let phase = solve_phase(&a, &b, args.tol).map_err(input)?;
    let pair = SunburstPair::new(a, b, phase).map_err(input)?;
    let hol = holonomy(&pair).map_err(input)?;
    let pts = orbit_sunburst(&pair, 1.0, n).map_err(input)?;
    let closure = (&pts[n] - &pts[0]).norm();
    let orbit: Vec<[f64; 2]> = pts[..n].iter().map(|p| [p.x, p.y]).collect();
    let report = SolveReport {
        n,
        interval: [interval.lo, interval.hi],
        phase,
        h: hol.h,
        log_h: hol.h.ln(),
        step_factors: hol.step_factors,
        closure,
        convex: is_convex(&orbit),
        orbit,
        pair,
    };
    if let Some(path) = &args.json {
        write_json(path, &report)?;
    }
    if let Some(path) = &args.out {
        write_file(path, sunburst_svg(&report))?;
    }
    println!("phase: {}", report.phase);
    println!("weave interval: ({}, {})", report.interval[0], report.interval[1]);
    println!("h: {} (log h = {:e})", report.h, report.log_h);
    println!("closure: {:e}", report.closure);
    println!("convex: {}", report.convex);
    Ok(())
}

/// A with the closed orbit on the left, turned B on the right. Orbit edge
/// `k` and ray `k + 1` of B share a color: the edge runs parallel to it.
fn sunburst_svg(r: &SolveReport) -> String {
    let n = r.n;
    let radius = 1.25 * r.orbit.iter().map(|p| p[0].hypot(p[1])).fold(1.0, f64::max);
    let shift = 2.6 * radius;
    let frame = [[-radius, -radius], [shift + radius, radius]];
    let mut svg = Svg::fit(&frame);
    let w = svg.stroke();
    let ray = |d: &Vec2<f64>, dx: f64| {
        let u = d.normalized();
        [dx + radius * u.x, radius * u.y]
    };
    svg.open_group("sunburst-a");
    for d in r.pair.a().rays() {
        svg.line([0.0, 0.0], ray(d, 0.0), "#888", w);
    }
    svg.close_group();
    svg.open_group("orbit");
    for k in 0..n {
        svg.line(r.orbit[k], r.orbit[(k + 1) % n], &palette((k + 1) % n, n), 1.5 * w);
    }
    svg.close_group();
    svg.open_group("sunburst-b");
    for (k, d) in r.pair.b_rotated().rays().iter().enumerate() {
        svg.line([shift, 0.0], ray(d, shift), &palette(k, n), w);
    }
    svg.close_group();
    svg.finish()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinkageReport {
    pub input: Polygon,
    pub equiangular: Polygon,
    pub phase: f64,
    pub closure: f64,
    pub interior_angles: Vec<f64>,
}

fn load_or_random_polygon(path: Option<&Path>, n: usize, seed: u64) -> Result<EquilateralPolygon, CliError> {
    match path {
        Some(path) => EquilateralPolygon::new(read_json::<Polygon>(path)?).map_err(input),
        None if n < 3 => Err(input("a polygon needs at least 3 sides")),
        None => Ok(EquilateralPolygon::random_convex(n, &mut ChaCha8Rng::seed_from_u64(seed))),
    }
}

pub fn linkage_convert(args: &LinkageConvertArgs) -> Result<(), CliError> {
    let p = load_or_random_polygon(args.polygon.as_deref(), args.n, args.seed)?;
    let sol = solve_equiangular(&p, 1.0).map_err(input)?;
    let report = LinkageReport {
        input: p.polygon().clone(),
        interior_angles: sol.polygon.interior_angles(),
        equiangular: sol.polygon,
        phase: sol.phase,
        closure: sol.closure,
    };
    if let Some(path) = &args.json {
        write_json(path, &report)?;
    }
    if let Some(path) = &args.out {
        write_file(path, linkage_svg(&report))?;
    }
    println!("sides: {}", report.input.len());
    println!("phase: {}", report.phase);
    println!("closure: {:e}", report.closure);
    let spread = report.interior_angles.iter().fold(0.0f64, |m, a| m.max((a - report.interior_angles[0]).abs()));
    println!("interior angle spread: {spread:e}");
    Ok(())
}

/// Centers `p` and scales it to circumradius 1.
fn normalized(p: &Polygon) -> Vec<[f64; 2]> {
    let n = p.len() as f64;
    let c = p.vertices.iter().fold(Vec2::<f64>::zero(), |acc, v| acc + v.clone()).scale(&(1.0 / n));
    let r = p.vertices.iter().map(|v| (v - &c).norm()).fold(0.0, f64::max);
    p.vertices.iter().map(|v| [(v.x - c.x) / r, (v.y - c.y) / r]).collect()
}

fn linkage_svg(r: &LinkageReport) -> String {
    let left = normalized(&r.input);
    let right: Vec<[f64; 2]> = normalized(&r.equiangular).iter().map(|p| [p[0] + 2.5, p[1]]).collect();
    let mut svg = Svg::fit(left.iter().chain(&right));
    let w = svg.stroke();
    let n = left.len();
    // Vertex k of the equiangular polygon lies on the ray along input edge k;
    // both share a color.
    svg.open_group("equilateral");
    for k in 0..n {
        svg.line(left[k], left[(k + 1) % n], &palette(k, n), w);
    }
    svg.close_group();
    svg.open_group("equiangular");
    svg.polyline(&right, "#333", w, true);
    for (k, p) in right.iter().enumerate() {
        svg.dot(*p, 2.5 * w, &palette(k, n));
    }
    svg.close_group();
    svg.finish()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbedReport {
    pub point: HyperbolicPoint,
    pub distance_to_regular: f64,
    pub poincare_disk: Vec<f64>,
    /// Strictly inside the five walls; pentagons only.
    pub inside_walls: Option<bool>,
}

pub fn moduli_embed(args: &ModuliEmbedArgs) -> Result<(), CliError> {
    let point = match (&args.offsets, &args.polygon) {
        (Some(path), _) => to_hyperbolic(&read_json::<OffsetVector>(path)?).map_err(input)?,
        (None, polygon) => {
            let p = load_or_random_polygon(polygon.as_deref(), args.n, args.seed)?;
            equilateral_to_hyperbolic_with_radius(&p, args.radius).map_err(input)?
        }
    };
    let regular = to_hyperbolic(&OffsetVector::new(vec![1.0; point.n])).map_err(input)?;
    let inside = if point.n == 5 {
        Some(inside_walls(&point, &pentagon_walls()).map_err(input)?)
    } else {
        None
    };
    let report = EmbedReport {
        distance_to_regular: hyperbolic_distance(&point, &regular).map_err(input)?,
        poincare_disk: poincare_disk(&point).map_err(input)?,
        inside_walls: inside,
        point,
    };
    if let Some(path) = &args.json {
        write_json(path, &report)?;
    }
    println!("point: {:?}", report.point.x);
    println!("distance to regular: {}", report.distance_to_regular);
    println!("poincare disk: {:?}", report.poincare_disk);
    if let Some(inside) = report.inside_walls {
        println!("inside walls: {inside}");
    }
    Ok(())
}

pub fn pentagon_verify(args: &PentagonVerifyArgs) -> Result<(), CliError> {
    let report = verify_pentagon(args.tol).map_err(input)?;
    if let Some(path) = &args.json {
        write_json(path, &report)?;
    }
    let worst = report.butterflies.iter().map(|b| b.involution.max(b.isometry)).fold(0.0, f64::max);
    let (p, q) = report.quotient_signature;
    println!("quotient signature: ({p}, {q})");
    println!("butterfly residual: {worst:e}");
    println!("max angle error: {:e}", report.max_angle_error);
    println!("pass: {}", report.pass);
    Ok(())
}
