//! The symplectic tiling billiards map and orbit analysis.

mod classify;
mod orbit;
mod portrait;

use serde::{Deserialize, Serialize};

use crate::geom::{Scalar, Vec2};
use crate::tiling::{Particle, Tiling, TilingError};

pub use classify::{classify, ClassifyConfig, Classification, Evidence, Verdict};
pub use orbit::{run_orbit, BoundingBox, OrbitOptions, OrbitRecord, Termination};
pub use portrait::{phase_portrait, portrait_start, PhasePortrait, PortraitSpec};

/// Which factor of the pair an event refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("particle on {factor:?} hits a vertex at ({}, {})", .point.x, .point.y)]
    VertexHit { factor: Factor, point: Vec2<f64> },
    #[error("particle on {0:?} escapes to infinity")]
    Escaped(Factor),
    #[error("edges under the two particles are parallel")]
    NonTransverseEdges,
    #[error("invalid particle on {factor:?}: {source}")]
    InvalidParticle { factor: Factor, source: TilingError },
}

impl DynamicsError {
    fn from_tiling(factor: Factor, e: TilingError) -> Self {
        match e {
            TilingError::VertexHit { point } => DynamicsError::VertexHit { factor, point },
            TilingError::Escaped => DynamicsError::Escaped(factor),
            source => DynamicsError::InvalidParticle { factor, source },
        }
    }
}

/// A particle on each tiling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairState<S> {
    pub a: Particle<S>,
    pub b: Particle<S>,
}

impl<S: Scalar> PairState<S> {
    pub fn new(a: Particle<S>, b: Particle<S>) -> Self {
        PairState { a, b }
    }

    pub fn close(&self, o: &Self, tol: f64) -> bool {
        self.a.close(&o.a, tol) && self.b.close(&o.b, tol)
    }

    pub fn bit_length(&self) -> u64 {
        self.a.point.bit_length().max(self.b.point.bit_length())
    }

    /// Checks both particles against their tilings and that their edges
    /// are not parallel.
    pub fn validate<TA, TB>(&self, a: &TA, b: &TB, tol: f64) -> Result<(), DynamicsError>
    where
        TA: Tiling<S> + ?Sized,
        TB: Tiling<S> + ?Sized,
    {
        a.check_particle(&self.a, tol)
            .map_err(|source| DynamicsError::InvalidParticle { factor: Factor::A, source })?;
        b.check_particle(&self.b, tol)
            .map_err(|source| DynamicsError::InvalidParticle { factor: Factor::B, source })?;
        let ea = a.edge_direction(&self.a.edge).map_err(|e| DynamicsError::from_tiling(Factor::A, e))?;
        let eb = b.edge_direction(&self.b.edge).map_err(|e| DynamicsError::from_tiling(Factor::B, e))?;
        if ea.cross(&eb).is_zero() {
            return Err(DynamicsError::NonTransverseEdges);
        }
        Ok(())
    }
}

/// `guide` or its negative: the one on the same side of `edge` as `side`.
fn orient_travel<S: Scalar>(
    guide: Vec2<S>,
    edge: &Vec2<S>,
    side: &Vec2<S>,
) -> Result<Vec2<S>, DynamicsError> {
    let want = edge.cross(side).sign();
    let got = edge.cross(&guide).sign();
    if want == 0 || got == 0 {
        return Err(DynamicsError::NonTransverseEdges);
    }
    Ok(if want == got { guide } else { -guide })
}

/// Moves one particle parallel to `guide` until it meets its tiling again.
fn advance<S, T>(tiling: &T, p: &Particle<S>, guide: Vec2<S>, factor: Factor) -> Result<Particle<S>, DynamicsError>
where
    S: Scalar,
    T: Tiling<S> + ?Sized,
{
    let edge = tiling
        .edge_direction(&p.edge)
        .map_err(|e| DynamicsError::from_tiling(factor, e))?;
    let travel = orient_travel(guide, &edge, &p.direction)?;
    let hit = tiling
        .first_hit(&p.point, &travel, Some(&p.edge))
        .map_err(|e| DynamicsError::from_tiling(factor, e))?;
    Ok(Particle::new(hit.point, hit.edge, travel))
}

/// One application of the map: `(a1, b2) -> (a3, b4)`.
///
/// `a3` lies where the ray from `a1` parallel to the edge under `b2` first
/// meets `A`; the ray is oriented into the tile `a1` points into, and that
/// same vector becomes the direction of `a3`. Then `b4` is built the same
/// way from `b2` and the edge under `a3`.
pub fn step<S, TA, TB>(a: &TA, b: &TB, s: &PairState<S>) -> Result<PairState<S>, DynamicsError>
where
    S: Scalar,
    TA: Tiling<S> + ?Sized,
    TB: Tiling<S> + ?Sized,
{
    let guide_a = b
        .edge_direction(&s.b.edge)
        .map_err(|e| DynamicsError::from_tiling(Factor::B, e))?;
    let a3 = advance(a, &s.a, guide_a, Factor::A)?;
    let guide_b = a
        .edge_direction(&a3.edge)
        .map_err(|e| DynamicsError::from_tiling(Factor::A, e))?;
    let b4 = advance(b, &s.b, guide_b, Factor::B)?;
    Ok(PairState::new(a3, b4))
}
