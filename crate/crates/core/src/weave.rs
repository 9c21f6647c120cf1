//! Pairs of sunbursts: the oriented weave condition, holonomy of the
//! sunburst orbit, and the phase at which every orbit closes up.
//!
//! Ray `i` of `A` plays the role of `A_{2i+1}` and ray `i` of `B` the role of
//! `B_{2i}` (so `B[0]` is `B_{2N}`). The weave condition asks `B[i]` to sit
//! strictly inside the sector from `A[i]` counterclockwise to `-A[i-1]`, and
//! the orbit starting on `A[0]` moves parallel to `B[1]` onto `A[1]`, then
//! parallel to `B[2]` onto `A[2]`, and so on.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{intersect_lines, Line, Vec2};
use crate::tiling::{Sunburst, SunburstError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeaveError {
    #[error("sunbursts have {0} and {1} rays")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Sunburst(#[from] SunburstError),
    #[error("pair is not an oriented weave (index {0})")]
    NotOrientedWeave(usize),
    #[error("step {0} of the orbit is degenerate")]
    DegenerateStep(usize),
    #[error("no phase makes the pair an oriented weave")]
    EmptyInterval { arcs: Vec<Arc> },
    #[error("bisection stopped with |log h| = {0:e}")]
    NoConvergence(f64),
}

/// Two sunbursts with the same number of rays and a rotation applied to `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairAngles", into = "PairAngles")]
pub struct SunburstPair {
    a: Sunburst<f64>,
    b: Sunburst<f64>,
    phase: f64,
    rotated: Sunburst<f64>,
}

/// JSON form: ray angles in radians.
#[derive(Serialize, Deserialize)]
struct PairAngles {
    a: Vec<f64>,
    b: Vec<f64>,
    phase: f64,
}

impl TryFrom<PairAngles> for SunburstPair {
    type Error = WeaveError;
    fn try_from(p: PairAngles) -> Result<Self, WeaveError> {
        SunburstPair::new(Sunburst::from_angles(&p.a)?, Sunburst::from_angles(&p.b)?, p.phase)
    }
}

impl From<SunburstPair> for PairAngles {
    fn from(p: SunburstPair) -> Self {
        PairAngles {
            a: p.a.angles(),
            b: p.b.angles(),
            phase: p.phase,
        }
    }
}

impl SunburstPair {
    pub fn new(a: Sunburst<f64>, b: Sunburst<f64>, phase: f64) -> Result<Self, WeaveError> {
        if a.len() != b.len() {
            return Err(WeaveError::SizeMismatch(a.len(), b.len()));
        }
        let rotated = b.rotated_by(phase);
        Ok(SunburstPair { a, b, phase, rotated })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &Sunburst<f64> {
        &self.a
    }

    /// `B` before the phase rotation.
    pub fn b(&self) -> &Sunburst<f64> {
        &self.b
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// `B` rotated counterclockwise by the phase.
    pub fn b_rotated(&self) -> &Sunburst<f64> {
        &self.rotated
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        SunburstPair::new(self.a.clone(), self.b.clone(), phase).expect("sizes already match")
    }
}

/// `(cross(A[i], B[i]), cross(B[i], -A[i-1]))`; both positive exactly when
/// `B[i]` is strictly inside the sector from `A[i]` to `-A[i-1]`.
fn margins(a: &Sunburst<f64>, b: &Sunburst<f64>, i: usize) -> (f64, f64) {
    let n = a.len();
    let bi = b.ray(i);
    (a.ray(i).cross(bi), a.ray(i + n - 1).cross(bi))
}

pub fn is_oriented_weave(p: &SunburstPair) -> bool {
    first_violation(p).is_none()
}

fn first_violation(p: &SunburstPair) -> Option<usize> {
    (0..p.n()).find(|&i| {
        let (l, r) = margins(p.a(), p.b_rotated(), i);
        l <= 0.0 || r <= 0.0
    })
}

fn require_weave(p: &SunburstPair) -> Result<(), WeaveError> {
    match first_violation(p) {
        Some(i) => Err(WeaveError::NotOrientedWeave(i)),
        None => Ok(()),
    }
}

/// The points `a_1, a_3, ...` of the orbit starting at distance `r0` on
/// `A[0]`; point `k` lies on ray `A[k mod N]`. Each step intersects the line
/// through the current point parallel to `B[k+1]` with the next ray.
pub fn orbit_sunburst(p: &SunburstPair, r0: f64, steps: usize) -> Result<Vec<Vec2<f64>>, WeaveError> {
    require_weave(p)?;
    let (a, b) = (p.a(), p.b_rotated());
    let mut pts = Vec::with_capacity(steps + 1);
    pts.push(a.ray(0).normalized().scale(&r0));
    for k in 0..steps {
        let cur = &pts[k];
        let next_ray = a.ray(k + 1);
        let chord = Line::new(cur.clone(), b.ray(k + 1).clone()).expect("nonzero ray");
        let ray_line = Line::new(Vec2::zero(), next_ray.clone()).expect("nonzero ray");
        // Parametrize along the ray so the result is a pure scaling of it.
        let x = intersect_lines(&ray_line, &chord).map_err(|_| WeaveError::DegenerateStep(k % p.n()))?;
        if x.dot(next_ray) <= 0.0 {
            return Err(WeaveError::DegenerateStep(k % p.n()));
        }
        pts.push(x);
    }
    Ok(pts)
}

/// The companion orbit on `B`: from distance `r0` on `B[0]`, step `k` moves
/// parallel to `A[k]` onto `B[k+1]`.
pub fn orbit_sunburst_right(p: &SunburstPair, r0: f64, steps: usize) -> Result<Vec<Vec2<f64>>, WeaveError> {
    require_weave(p)?;
    let (a, b) = (p.a(), p.b_rotated());
    let mut pts = Vec::with_capacity(steps + 1);
    pts.push(b.ray(0).normalized().scale(&r0));
    for k in 0..steps {
        let next_ray = b.ray(k + 1);
        let chord = Line::new(pts[k].clone(), a.ray(k).clone()).expect("nonzero ray");
        let ray_line = Line::new(Vec2::zero(), next_ray.clone()).expect("nonzero ray");
        // Parametrize along the ray so the result is a pure scaling of it.
        let x = intersect_lines(&ray_line, &chord).map_err(|_| WeaveError::DegenerateStep(k % p.n()))?;
        if x.dot(next_ray) <= 0.0 {
            return Err(WeaveError::DegenerateStep(k % p.n()));
        }
        pts.push(x);
    }
    Ok(pts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HolonomyMethod {
    /// Product of the closed-form radial factors of each step.
    Product,
    /// Ratio of radii after running the orbit once around.
    Iteration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolonomyReport {
    pub h: f64,
    /// Radial factor of each step; for `Iteration` these are the measured
    /// ratios `|a_{k+1}| / |a_k|`.
    pub step_factors: Vec<f64>,
    pub method: HolonomyMethod,
}

fn radial_ratios(pts: &[Vec2<f64>]) -> Vec<f64> {
    pts.windows(2).map(|w| w[1].norm() / w[0].norm()).collect()
}

/// Expansion of the orbit on `A` after one trip around the sunburst.
pub fn holonomy(p: &SunburstPair) -> Result<HolonomyReport, WeaveError> {
    holonomy_by(p, HolonomyMethod::Product)
}

pub fn holonomy_by(p: &SunburstPair, method: HolonomyMethod) -> Result<HolonomyReport, WeaveError> {
    let n = p.n();
    let (step_factors, h) = match method {
        HolonomyMethod::Product => {
            require_weave(p)?;
            let (a, b) = (p.a(), p.b_rotated());
            // a_k + t B[k+1] = s A[k+1] with unit rays and |a_k| = 1 gives
            // s = cross(A[k], B[k+1]) / cross(A[k+1], B[k+1]).
            let f: Vec<f64> = (0..n)
                .map(|k| {
                    let (ak, ak1, bk1) = (a.ray(k).normalized(), a.ray(k + 1).normalized(), b.ray(k + 1));
                    ak.cross(bk1).abs() / ak1.cross(bk1).abs()
                })
                .collect();
            let h = f.iter().product();
            (f, h)
        }
        HolonomyMethod::Iteration => {
            let pts = orbit_sunburst(p, 1.0, n)?;
            (radial_ratios(&pts), pts[n].norm() / pts[0].norm())
        }
    };
    Ok(HolonomyReport { h, step_factors, method })
}

/// Expansion of the companion orbit on `B`.
pub fn right_holonomy_by(p: &SunburstPair, method: HolonomyMethod) -> Result<HolonomyReport, WeaveError> {
    let n = p.n();
    let (step_factors, h) = match method {
        HolonomyMethod::Product => {
            require_weave(p)?;
            let (a, b) = (p.a(), p.b_rotated());
            let f: Vec<f64> = (0..n)
                .map(|k| {
                    let (bk, bk1, ak) = (b.ray(k).normalized(), b.ray(k + 1).normalized(), a.ray(k));
                    bk.cross(ak).abs() / bk1.cross(ak).abs()
                })
                .collect();
            let h = f.iter().product();
            (f, h)
        }
        HolonomyMethod::Iteration => {
            let pts = orbit_sunburst_right(p, 1.0, n)?;
            (radial_ratios(&pts), pts[n].norm() / pts[0].norm())
        }
    };
    Ok(HolonomyReport { h, step_factors, method })
}

/// Left holonomy times right holonomy, each measured by iterating its orbit.
pub fn left_times_right_holonomy(p: &SunburstPair) -> Result<f64, WeaveError> {
    let left = holonomy_by(p, HolonomyMethod::Iteration)?.h;
    let right = right_holonomy_by(p, HolonomyMethod::Iteration)?.h;
    Ok(left * right)
}

/// Open arc of angles `(lo, hi)` with `lo <= hi < lo + 2 pi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub lo: f64,
    pub hi: f64,
}

impl Arc {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    /// Distance counterclockwise from `lo` to `theta`, in `[0, 2 pi)`.
    fn offset(&self, theta: f64) -> f64 {
        (theta - self.lo).rem_euclid(TAU)
    }

    pub fn contains(&self, theta: f64) -> bool {
        let d = self.offset(theta);
        d > 0.0 && d < self.len()
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Phases that make the pair an oriented weave, and the per-index arcs they
/// were intersected from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseInterval {
    pub lo: f64,
    pub hi: f64,
    pub per_index_arcs: Vec<Arc>,
}

impl PhaseInterval {
    pub fn arc(&self) -> Arc {
        Arc { lo: self.lo, hi: self.hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.arc().contains(theta)
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// For each `k`, rotating `B[k]` by a phase in the arc
/// `(angle A[k] - angle B[k], angle A[k-1] + pi - angle B[k])` puts it inside
/// its sector. Each arc is shorter than `pi`, so the intersection is a single
/// arc starting at one of the arc starts; every start is tested against all
/// arcs.
pub fn weave_interval(a: &Sunburst<f64>, b: &Sunburst<f64>) -> Result<PhaseInterval, WeaveError> {
    if a.len() != b.len() {
        return Err(WeaveError::SizeMismatch(a.len(), b.len()));
    }
    let n = a.len();
    let arcs: Vec<Arc> = (0..n)
        .map(|k| {
            let beta = b.ray(k).angle();
            let (prev, cur) = (a.ray(k + n - 1), a.ray(k));
            let lo = cur.angle() - beta;
            let gap = prev.cross(cur).atan2(prev.dot(cur));
            Arc { lo, hi: lo + PI - gap }
        })
        .collect();
    for start in &arcs {
        let lo = start.lo;
        // Half-open membership: `lo` itself may be the start of other arcs.
        let inside = arcs.iter().all(|c| c.offset(lo) < c.len());
        if !inside {
            continue;
        }
        let len = arcs
            .iter()
            .map(|c| c.len() - c.offset(lo))
            .fold(f64::INFINITY, f64::min);
        if len > 0.0 {
            let lo = lo.rem_euclid(TAU);
            return Ok(PhaseInterval {
                lo,
                hi: lo + len,
                per_index_arcs: arcs,
            });
        }
    }
    Err(WeaveError::EmptyInterval { arcs })
}

/// The phase at which the holonomy is 1, so that every orbit closes into a
/// convex polygon. The holonomy decreases strictly as `B` turns
/// counterclockwise across the weave interval, from `+inf` to `0`, so plain
/// bisection on `log h` finds it.
pub fn solve_phase(a: &Sunburst<f64>, b: &Sunburst<f64>, tol: f64) -> Result<f64, WeaveError> {
    let iv = weave_interval(a, b)?;
    let pair = SunburstPair::new(a.clone(), b.clone(), iv.mid())?;
    let log_h = |theta: f64| holonomy(&pair.with_phase(theta)).map(|r| r.h.ln());
    let (mut lo, mut hi) = (iv.lo, iv.hi);
    let mut best = (f64::INFINITY, iv.mid());
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = log_h(mid)?;
        if v.abs() < best.0 {
            best = (v.abs(), mid);
        }
        if v.abs() <= tol {
            return Ok(mid);
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if best.0 <= tol {
        Ok(best.1)
    } else {
        Err(WeaveError::NoConvergence(best.0))
    }
}

/// Unit vectors summing to zero, sorted by angle: `n - 2` uniform directions
/// and the two unit vectors that close them up. Redraws until the two closing
/// vectors exist and the result is a valid sunburst.
pub fn random_balanced<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Sunburst<f64> {
    assert!(n >= 3, "a sunburst needs at least 3 rays");
    loop {
        let mut dirs: Vec<Vec2<f64>> = (0..n - 2).map(|_| Vec2::from_angle(rng.gen_range(0.0..TAU))).collect();
        let sum = dirs.iter().fold(Vec2::<f64>::zero(), |acc, d| acc + d.clone());
        let half = sum.norm() / 2.0;
        if !(1e-9..1.0).contains(&half) {
            continue;
        }
        // u + v = -sum with |u| = |v| = 1.
        let m = sum.scale(&-0.5);
        let off = m.normalized().perp().scale(&(1.0 - half * half).sqrt());
        dirs.push(&m + &off);
        dirs.push(&m - &off);
        dirs.sort_by(|p, q| p.angle().total_cmp(&q.angle()));
        if let Ok(s) = Sunburst::new(dirs) {
            return s;
        }
    }
}

/// `n` uniform random directions sorted by angle, redrawn until no gap
/// reaches `pi`.
pub fn random_sunburst<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Sunburst<f64> {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        if let Ok(s) = Sunburst::from_angles(&angles) {
            return s;
        }
    }
}

/// A random pair of sunbursts with a phase drawn from the inner 90% of its
/// weave interval.
pub fn random_oriented_weave<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SunburstPair {
    loop {
        let a = random_sunburst(n, rng);
        let b = random_sunburst(n, rng);
        if let Ok(iv) = weave_interval(&a, &b) {
            let theta = iv.lo + iv.len() * rng.gen_range(0.05..0.95);
            let p = SunburstPair::new(a, b, theta).expect("same size");
            if is_oriented_weave(&p) {
                return p;
            }
        }
    }
}

/// `sin(pi t) - t / (1 - t)`, positive on `(0, 1/2)`.
pub fn sine_gap(t: f64) -> f64 {
    (PI * t).sin() - t / (1.0 - t)
}

/// `sin(pi (j - 1) / n) > (j - 1) / (n - j + 1)`, for `j >= 2` and
/// `j - 1 < n / 2`.
pub fn discrete_sine_bound(n: usize, j: usize) -> bool {
    let (nf, k) = (n as f64, (j - 1) as f64);
    (PI * k / nf).sin() > k / (nf - k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{step, PairState};
    use crate::tiling::{EdgeRef, Particle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn symmetric_phase(n: usize) -> f64 {
        PI / 2.0 - PI / n as f64
    }

    fn circle_dist(x: f64, y: f64, period: f64) -> f64 {
        let d = (x - y).rem_euclid(period);
        d.min(period - d)
    }

    fn regular_pair(n: usize) -> SunburstPair {
        let a = Sunburst::regular(n, 0.0);
        SunburstPair::new(a.clone(), a, symmetric_phase(n)).unwrap()
    }

    #[test]
    fn regular_pairs_interleave() {
        let p = regular_pair(5);
        assert!(is_oriented_weave(&p));
        assert!(is_oriented_weave(&p.with_phase(PI / 5.0)));
        assert!(!is_oriented_weave(&p.with_phase(0.0)));
    }

    #[test]
    fn regular_orbit_is_regular_polygon() {
        for n in 3..10 {
            let p = regular_pair(n);
            let pts = orbit_sunburst(&p, 1.0, n).unwrap();
            for q in &pts {
                assert!((q.norm() - 1.0).abs() < 1e-12);
            }
            assert!((&pts[n] - &pts[0]).norm() < 1e-12);
            let h = holonomy(&p).unwrap();
            assert!((h.h - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn clockwise_turn_expands() {
        let p = regular_pair(5);
        assert!(holonomy(&p.with_phase(p.phase() - 0.01)).unwrap().h > 1.0);
        assert!(holonomy(&p.with_phase(p.phase() + 0.01)).unwrap().h < 1.0);
    }

    #[test]
    fn orbit_scales_with_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_oriented_weave(6, &mut rng);
        let one = orbit_sunburst(&p, 1.0, 12).unwrap();
        let two = orbit_sunburst(&p, 2.0, 12).unwrap();
        for (x, y) in one.iter().zip(&two) {
            assert!((&x.scale(&2.0) - y).norm() < 1e-12 * y.norm());
        }
    }

    // The closed-form orbit must agree with the billiard map itself on the
    // two sunbursts.
    #[test]
    fn orbit_matches_billiard_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3, 5, 8] {
            let p = random_oriented_weave(n, &mut rng);
            let (a, b) = (p.a(), p.b_rotated());
            let pts = orbit_sunburst(&p, 1.0, 2 * n).unwrap();
            let mut s = PairState::new(
                Particle::new(pts[0].clone(), EdgeRef::Ray(0), a.ray(0).perp()),
                Particle::new(b.ray(1).normalized(), EdgeRef::Ray(1), b.ray(1).perp()),
            );
            for (k, want) in pts.iter().enumerate().skip(1) {
                s = step(a, b, &s).unwrap();
                assert_eq!(s.a.edge, EdgeRef::Ray(k % n));
                assert!((&s.a.point - want).norm() < 1e-9 * want.norm().max(1.0));
            }
        }
    }

    #[test]
    fn non_weave_is_rejected() {
        let p = regular_pair(4).with_phase(0.0);
        assert!(matches!(orbit_sunburst(&p, 1.0, 4), Err(WeaveError::NotOrientedWeave(_))));
    }

    #[test]
    fn regular_interval_length() {
        for n in 3..13 {
            let a = Sunburst::regular(n, 0.2);
            let iv = weave_interval(&a, &a).unwrap();
            assert!((iv.len() - (PI - TAU / n as f64)).abs() < 1e-12);
            assert!(circle_dist(iv.mid(), symmetric_phase(n), TAU) < 1e-12);
            assert!(!iv.contains(0.0));
        }
    }

    #[test]
    fn interval_endpoints_are_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = random_sunburst(5, &mut rng);
            let b = random_balanced(5, &mut rng);
            let Ok(iv) = weave_interval(&a, &b) else { continue };
            let p = SunburstPair::new(a, b, iv.mid()).unwrap();
            assert!(is_oriented_weave(&p));
            assert!(is_oriented_weave(&p.with_phase(iv.lo + 1e-9)));
            assert!(is_oriented_weave(&p.with_phase(iv.hi - 1e-9)));
            assert!(!is_oriented_weave(&p.with_phase(iv.lo - 1e-9)));
            assert!(!is_oriented_weave(&p.with_phase(iv.hi + 1e-9)));
        }
    }

    #[test]
    fn empty_interval_is_reported() {
        // Three rays of B bunched together cannot all be threaded.
        let a = Sunburst::regular(3, 0.0);
        let b = Sunburst::from_angles(&[0.0, 0.1, PI + 0.05]).unwrap();
        assert!(matches!(weave_interval(&a, &b), Err(WeaveError::EmptyInterval { .. })));
    }

    #[test]
    fn symmetric_phase_solves_regular() {
        for n in 3..10 {
            let a = Sunburst::regular(n, 0.0);
            let theta = solve_phase(&a, &a, 1e-12).unwrap();
            assert!(circle_dist(theta, symmetric_phase(n), TAU / n as f64) < 1e-9);
        }
    }

    #[test]
    fn balanced_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 3..12 {
            assert!(random_balanced(n, &mut rng).is_balanced());
        }
    }

    #[test]
    fn pair_json_uses_angles() {
        let p = regular_pair(3);
        let v: serde_json::Value = serde_json::to_value(&p).unwrap();
        assert_eq!(v["a"].as_array().unwrap().len(), 3);
        let back: SunburstPair = serde_json::from_value(v).unwrap();
        assert!((back.phase() - p.phase()).abs() == 0.0);
        assert!(back.b_rotated().ray(1).close(p.b_rotated().ray(1), 1e-15));
    }

    #[test]
    fn calculus_bounds() {
        assert!(sine_gap(0.25) > 0.0);
        assert!(sine_gap(0.6) < 0.0);
        assert!(discrete_sine_bound(5, 2));
    }
}
