use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{EdgeRef, Hit, Particle, Tiling, TilingError};
use crate::geom::{Scalar, Vec2};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SunburstError {
    #[error("a sunburst needs at least 3 rays, got {0}")]
    TooFewRays(usize),
    #[error("ray {0} has zero direction")]
    ZeroRay(usize),
    #[error("rays {0} and {1} are not separated by a counterclockwise turn in (0, pi)")]
    BadTurn(usize, usize),
    #[error("rays wind {0:.3} turns around the origin instead of exactly once")]
    Winding(f64),
}

/// `N` rays from the origin, listed counterclockwise, not contained in any
/// closed halfplane. The tiles are the sectors between consecutive rays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "Vec<Vec2<S>>",
    into = "Vec<Vec2<S>>",
    bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>")
)]
pub struct Sunburst<S: Scalar> {
    rays: Vec<Vec2<S>>,
}

impl<S: Scalar> Sunburst<S> {
    pub fn new(rays: Vec<Vec2<S>>) -> Result<Self, SunburstError> {
        let n = rays.len();
        if n < 3 {
            return Err(SunburstError::TooFewRays(n));
        }
        if let Some(i) = rays.iter().position(|r| r.is_zero()) {
            return Err(SunburstError::ZeroRay(i));
        }
        let mut turning = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            if rays[i].cross(&rays[j]).sign() <= 0 {
                return Err(SunburstError::BadTurn(i, j));
            }
            let (a, b) = (rays[i].to_f64(), rays[j].to_f64());
            turning += a.cross(&b).atan2(a.dot(&b));
        }
        // Each turn lies in (0, pi), so the total is a positive multiple of 2 pi.
        let winding = turning / TAU;
        if (winding - 1.0).abs() > 0.5 {
            return Err(SunburstError::Winding(winding));
        }
        Ok(Sunburst { rays })
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn rays(&self) -> &[Vec2<S>] {
        &self.rays
    }

    /// Ray `i`, indices taken modulo `N`.
    pub fn ray(&self, i: usize) -> &Vec2<S> {
        &self.rays[i % self.rays.len()]
    }

    pub fn point_on_ray(&self, i: usize, r: &S) -> Vec2<S> {
        self.ray(i).scale(r)
    }

    /// Every ray multiplied by the unit complex number `u`.
    pub fn rotated(&self, u: &Vec2<S>) -> Self {
        Sunburst {
            rays: self.rays.iter().map(|r| r.rotate(u)).collect(),
        }
    }
}

impl Sunburst<f64> {
    /// Unit rays at the given angles (radians).
    pub fn from_angles(angles: &[f64]) -> Result<Self, SunburstError> {
        Self::new(angles.iter().map(|&a| Vec2::from_angle(a)).collect())
    }

    /// Rays at `offset + 2 pi k / n`.
    pub fn regular(n: usize, offset: f64) -> Self {
        let angles: Vec<f64> = (0..n).map(|k| offset + TAU * k as f64 / n as f64).collect();
        Self::from_angles(&angles).expect("regular sunburst with n >= 3")
    }

    pub fn angles(&self) -> Vec<f64> {
        self.rays.iter().map(|r| r.angle()).collect()
    }

    pub fn rotated_by(&self, theta: f64) -> Self {
        self.rotated(&Vec2::from_angle(theta))
    }

    /// Unit rays summing to zero within `1e-12`.
    pub fn is_balanced(&self) -> bool {
        let sum = self
            .rays
            .iter()
            .fold(Vec2::<f64>::zero(), |acc, r| acc + r.normalized());
        sum.norm() <= 1e-12
    }

    /// Consecutive rays all `2 pi / N` apart within `1e-12`.
    pub fn is_regular(&self) -> bool {
        let n = self.rays.len();
        let gap = TAU / n as f64;
        (0..n).all(|i| {
            let (a, b) = (&self.rays[i], &self.rays[(i + 1) % n]);
            let turn = a.cross(b).atan2(a.dot(b));
            (turn - gap).abs() <= 1e-12
        })
    }
}

impl<S: Scalar> From<Sunburst<S>> for Vec<Vec2<S>> {
    fn from(s: Sunburst<S>) -> Self {
        s.rays
    }
}

impl<S: Scalar> TryFrom<Vec<Vec2<S>>> for Sunburst<S> {
    type Error = SunburstError;
    fn try_from(rays: Vec<Vec2<S>>) -> Result<Self, Self::Error> {
        Sunburst::new(rays)
    }
}

impl<S: Scalar> Tiling<S> for Sunburst<S> {
    fn first_hit(
        &self,
        start: &Vec2<S>,
        travel: &Vec2<S>,
        from: Option<&EdgeRef>,
    ) -> Result<Hit<S>, TilingError> {
        if travel.is_zero() {
            return Err(TilingError::ZeroTravel);
        }
        let skip = match from {
            Some(EdgeRef::Ray(i)) => Some(*i),
            _ => None,
        };
        let mut best: Option<(S, S, usize)> = None;
        for (j, ray) in self.rays.iter().enumerate() {
            if Some(j) == skip {
                continue;
            }
            // start + s * travel = r * ray
            let denom = travel.cross(ray);
            if denom.is_zero() {
                continue;
            }
            let s = ray.cross(start) / denom.clone();
            let r = start.cross(travel) / -denom;
            if s.sign() <= 0 || r.sign() < 0 {
                continue;
            }
            if best.as_ref().is_none_or(|(bs, _, _)| s < *bs) {
                best = Some((s, r, j));
            }
        }
        let (s, r, j) = best.ok_or(TilingError::Escaped)?;
        let point = start + &travel.scale(&s);
        if r.is_zero() {
            return Err(TilingError::VertexHit { point: point.to_f64() });
        }
        Ok(Hit {
            point,
            edge: EdgeRef::Ray(j),
        })
    }

    fn edge_direction(&self, edge: &EdgeRef) -> Result<Vec2<S>, TilingError> {
        match edge {
            EdgeRef::Ray(i) if *i < self.rays.len() => Ok(self.rays[*i].clone()),
            e => Err(TilingError::ForeignEdge(*e)),
        }
    }

    fn edge_directions(&self) -> Vec<Vec2<S>> {
        self.rays.clone()
    }

    fn on_edge(&self, point: &Vec2<S>, edge: &EdgeRef, tol: f64) -> bool {
        let EdgeRef::Ray(i) = *edge else { return false };
        let Some(ray) = self.rays.get(i) else { return false };
        let along = ray.dot(point);
        let off = ray.cross(point);
        if S::EXACT {
            off.is_zero() && along.sign() > 0
        } else {
            off.to_f64().abs() <= tol * (1.0 + along.to_f64().abs()) && along.to_f64() > tol
        }
    }

    fn reduce(&self, particle: &Particle<S>) -> (Particle<S>, [i64; 2]) {
        (particle.clone(), [0, 0])
    }

    /// Radius `t / (1 - t)` along the ray.
    fn edge_point(&self, edge: &EdgeRef, t: &S) -> Option<Vec2<S>> {
        let EdgeRef::Ray(i) = *edge else { return None };
        let ray = self.rays.get(i)?;
        let rest = S::one() - t.clone();
        if t.sign() <= 0 || rest.sign() <= 0 {
            return None;
        }
        Some(ray.scale(&(t.clone() / rest)))
    }

    /// Points into the sector counterclockwise of the ray.
    fn crossing(&self, edge: &EdgeRef) -> Option<Vec2<S>> {
        let EdgeRef::Ray(i) = *edge else { return None };
        self.rays.get(i).map(|r| r.perp())
    }

    fn lattice_vector(&self, _offset: [i64; 2]) -> Vec2<S> {
        Vec2::zero()
    }
}
