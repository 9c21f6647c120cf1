//! Convex equilateral polygons and the equiangular polygons inscribed in the
//! sunbursts of their edge directions.
//!
//! The edge directions of a convex unit equilateral `N`-gon `P` are unit
//! vectors summing to zero, listed counterclockwise: a balanced sunburst
//! `A_P`. Pairing it with the regular sunburst and solving for the closing
//! phase gives a closed convex orbit whose vertices sit on the rays of `A_P`
//! and whose edges are parallel to a rotated regular sunburst, so it is
//! equiangular. It is unique up to dilation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::tiling::Sunburst;
use crate::weave::{orbit_sunburst, random_balanced, solve_phase, SunburstPair, WeaveError};

/// Tolerance on edge lengths of equilateral polygons.
pub const EQUILATERAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinkageError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge {edge} has length {length}, not 1")]
    NotEquilateral { edge: usize, length: f64 },
    #[error("polygon is not strictly convex and counterclockwise at vertex {0}")]
    NotConvex(usize),
    #[error(transparent)]
    Weave(#[from] WeaveError),
}

/// Closed polygon; vertex `i` is joined to vertex `i + 1 mod N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct Polygon {
    pub vertices: Vec<Vec2<f64>>,
}

impl From<Vec<[f64; 2]>> for Polygon {
    fn from(v: Vec<[f64; 2]>) -> Self {
        Polygon::new(v.into_iter().map(|[x, y]| Vec2::new(x, y)).collect())
    }
}

impl From<Polygon> for Vec<[f64; 2]> {
    fn from(p: Polygon) -> Self {
        p.vertices.iter().map(|v| [v.x, v.y]).collect()
    }
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2<f64>>) -> Self {
        Polygon { vertices }
    }

    /// Regular `n`-gon with circumradius 1 and a vertex at angle `offset`.
    pub fn regular(n: usize, offset: f64) -> Self {
        let step = std::f64::consts::TAU / n as f64;
        Polygon::new((0..n).map(|k| Vec2::from_angle(offset + step * k as f64)).collect())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vec2<f64> {
        &self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edges(&self) -> Vec<Vec2<f64>> {
        (0..self.len()).map(|i| self.vertex(i + 1) - self.vertex(i)).collect()
    }

    /// Shoelace area; positive for counterclockwise polygons.
    pub fn signed_area(&self) -> f64 {
        0.5 * (0..self.len()).map(|i| self.vertex(i).cross(self.vertex(i + 1))).sum::<f64>()
    }

    /// First vertex where consecutive edges fail to turn strictly left.
    pub fn convexity_violation(&self) -> Option<usize> {
        let e = self.edges();
        let n = e.len();
        // Strict left turns everywhere plus total turning of one full circle.
        let mut turning = 0.0;
        for i in 0..n {
            let (p, q) = (&e[(i + n - 1) % n], &e[i]);
            if p.cross(q) <= 0.0 {
                return Some(i);
            }
            turning += p.cross(q).atan2(p.dot(q));
        }
        ((turning - std::f64::consts::TAU).abs() > 1e-6).then_some(0)
    }

    pub fn is_convex(&self) -> bool {
        self.len() >= 3 && self.convexity_violation().is_none()
    }

    /// Interior angle at each vertex, in radians.
    pub fn interior_angles(&self) -> Vec<f64> {
        let e = self.edges();
        let n = e.len();
        (0..n)
            .map(|i| {
                let (p, q) = (&e[(i + n - 1) % n], &e[i]);
                std::f64::consts::PI - p.cross(q).atan2(p.dot(q))
            })
            .collect()
    }

    pub fn map(&self, f: impl Fn(&Vec2<f64>) -> Vec2<f64>) -> Self {
        Polygon::new(self.vertices.iter().map(f).collect())
    }

    /// Rotation by `theta` about the origin.
    pub fn rotated(&self, theta: f64) -> Self {
        let u = Vec2::from_angle(theta);
        self.map(|v| v.rotate(&u))
    }

    pub fn translated(&self, t: &Vec2<f64>) -> Self {
        self.map(|v| v + t)
    }

    pub fn scaled(&self, k: f64) -> Self {
        self.map(|v| v.scale(&k))
    }

    /// Vertex `i` of the result is vertex `i + k` of `self`.
    pub fn relabeled(&self, k: usize) -> Self {
        Polygon::new((0..self.len()).map(|i| self.vertex(i + k).clone()).collect())
    }

    /// Same vertices in the opposite order.
    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Polygon::new(v)
    }
}

/// A polygon with every edge of length 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Polygon", into = "Polygon")]
pub struct EquilateralPolygon(Polygon);

impl TryFrom<Polygon> for EquilateralPolygon {
    type Error = LinkageError;
    fn try_from(p: Polygon) -> Result<Self, LinkageError> {
        EquilateralPolygon::new(p)
    }
}

impl From<EquilateralPolygon> for Polygon {
    fn from(p: EquilateralPolygon) -> Self {
        p.0
    }
}

impl EquilateralPolygon {
    pub fn new(p: Polygon) -> Result<Self, LinkageError> {
        if p.len() < 3 {
            return Err(LinkageError::TooFewVertices(p.len()));
        }
        for (edge, e) in p.edges().iter().enumerate() {
            let length = e.norm();
            if (length - 1.0).abs() > EQUILATERAL_TOL {
                return Err(LinkageError::NotEquilateral { edge, length });
            }
        }
        Ok(EquilateralPolygon(p))
    }

    /// Walks the unit vectors `dirs` starting from `start`; the last edge
    /// closes the polygon.
    pub fn from_directions(dirs: &[Vec2<f64>], start: Vec2<f64>) -> Result<Self, LinkageError> {
        let mut v = vec![start];
        for d in &dirs[..dirs.len().saturating_sub(1)] {
            let next = v.last().expect("nonempty") + d;
            v.push(next);
        }
        EquilateralPolygon::new(Polygon::new(v))
    }

    /// Unit regular `n`-gon with first edge pointing along the x-axis.
    pub fn regular(n: usize) -> Self {
        let step = std::f64::consts::TAU / n as f64;
        let dirs: Vec<Vec2<f64>> = (0..n).map(|k| Vec2::from_angle(step * k as f64)).collect();
        EquilateralPolygon::from_directions(&dirs, Vec2::zero()).expect("regular polygon is equilateral")
    }

    /// Convex equilateral `n`-gon with edge directions from
    /// [`random_balanced`], started at the origin.
    pub fn random_convex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let s = random_balanced(n, rng);
            if let Ok(p) = EquilateralPolygon::from_directions(s.rays(), Vec2::zero()) {
                if p.0.is_convex() {
                    return p;
                }
            }
        }
    }

    pub fn polygon(&self) -> &Polygon {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The sunburst of unit edge directions; ray `i` is parallel to edge `i`.
pub fn directions_to_sunburst(p: &EquilateralPolygon) -> Result<Sunburst<f64>, LinkageError> {
    if let Some(i) = p.0.convexity_violation() {
        return Err(LinkageError::NotConvex(i));
    }
    let dirs: Vec<Vec2<f64>> = p.0.edges().iter().map(|e| e.normalized()).collect();
    Sunburst::new(dirs).map_err(|_| LinkageError::NotConvex(0))
}

/// The closed orbit produced by the phase solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equiangular {
    /// Vertex `k` lies on ray `k` of the direction sunburst.
    pub polygon: Polygon,
    /// Rotation applied to the regular sunburst `exp(2 pi i k / N)`; edge `k`
    /// of the polygon is parallel to ray `k + 1` of the rotated sunburst.
    pub phase: f64,
    /// Distance between the start and the point reached after one loop,
    /// relative to the start radius.
    pub closure: f64,
}

/// Equiangular polygon with its first vertex at distance `r0` from the origin.
pub fn solve_equiangular(p: &EquilateralPolygon, r0: f64) -> Result<Equiangular, LinkageError> {
    let a = directions_to_sunburst(p)?;
    let n = a.len();
    let b = Sunburst::regular(n, 0.0);
    let phase = solve_phase(&a, &b, 1e-12)?;
    let pair = SunburstPair::new(a, b, phase)?;
    let mut pts = orbit_sunburst(&pair, r0, n)?;
    let closure = (&pts[n] - &pts[0]).norm() / r0;
    pts.truncate(n);
    Ok(Equiangular {
        polygon: Polygon::new(pts),
        phase,
        closure,
    })
}

/// The convex equiangular polygon inscribed in the direction sunburst of
/// `p`, normalized so its first vertex is at distance 1 on ray 0.
pub fn equilateral_to_equiangular(p: &EquilateralPolygon) -> Result<Polygon, LinkageError> {
    solve_equiangular(p, 1.0).map(|e| e.polygon)
}
