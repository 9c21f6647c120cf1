//! Tilings with first-hit ray queries: lattice (square) grids and sunbursts.

mod grid;
mod sunburst;

use serde::{Deserialize, Serialize};

use crate::geom::{Scalar, Vec2};

pub use grid::Grid;
pub use sunburst::{Sunburst, SunburstError};

/// Grid edge family, in grid-local coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    /// Horizontal: the line `y = line`, cell `[cell, cell + 1]` in x.
    H,
    /// Vertical: the line `x = line`, cell `[cell, cell + 1]` in y.
    V,
}

/// Identifies one open edge segment (grid) or one open ray (sunburst).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeRef {
    Grid { axis: Axis, line: i64, cell: i64 },
    Ray(usize),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TilingError {
    #[error("ray hits a tiling vertex at ({}, {})", .point.x, .point.y)]
    VertexHit { point: Vec2<f64> },
    #[error("ray leaves every tile without meeting an edge")]
    Escaped,
    #[error("travel direction is zero")]
    ZeroTravel,
    #[error("edge {0:?} does not belong to this tiling")]
    ForeignEdge(EdgeRef),
    #[error("point is not on the interior of edge {0:?}")]
    OffEdge(EdgeRef),
    #[error("particle direction is not transverse to its edge")]
    NotTransverse,
}

/// Result of a first-hit query.
#[derive(Clone, Debug, PartialEq)]
pub struct Hit<S> {
    pub point: Vec2<S>,
    pub edge: EdgeRef,
}

/// Point on an open edge together with a transverse direction selecting one
/// of the two adjacent tiles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Particle<S> {
    pub point: Vec2<S>,
    pub edge: EdgeRef,
    pub direction: Vec2<S>,
}

impl<S: Scalar> Particle<S> {
    pub fn new(point: Vec2<S>, edge: EdgeRef, direction: Vec2<S>) -> Self {
        Particle {
            point,
            edge,
            direction,
        }
    }

    pub fn close(&self, o: &Self, tol: f64) -> bool {
        self.edge == o.edge && self.point.close(&o.point, tol) && self.direction.close(&o.direction, tol)
    }
}

/// A planar tiling by convex (possibly unbounded) tiles.
pub trait Tiling<S: Scalar>: Sync {
    /// First point where the open ray `start + s * travel`, `s > 0`, meets
    /// an edge. `from` names the edge `start` lies on, if any; it is never
    /// reported as the hit.
    fn first_hit(
        &self,
        start: &Vec2<S>,
        travel: &Vec2<S>,
        from: Option<&EdgeRef>,
    ) -> Result<Hit<S>, TilingError>;

    /// Direction vector of the edge (not normalized for exact grids).
    fn edge_direction(&self, edge: &EdgeRef) -> Result<Vec2<S>, TilingError>;

    /// One representative direction per parallel class of edges.
    fn edge_directions(&self) -> Vec<Vec2<S>>;

    /// Whether `point` lies on the interior of `edge`.
    fn on_edge(&self, point: &Vec2<S>, edge: &EdgeRef, tol: f64) -> bool;

    /// Splits a particle into its class modulo the tiling's translation
    /// lattice and the lattice offset that recovers it. Tilings without
    /// translational symmetry return the particle itself and a zero offset.
    fn reduce(&self, particle: &Particle<S>) -> (Particle<S>, [i64; 2]);

    /// Point on `edge` at parameter `t` in `(0, 1)`.
    fn edge_point(&self, edge: &EdgeRef, t: &S) -> Option<Vec2<S>>;

    /// A direction crossing `edge`, used to seed particles.
    fn crossing(&self, edge: &EdgeRef) -> Option<Vec2<S>>;

    /// World vector of a lattice offset.
    fn lattice_vector(&self, offset: [i64; 2]) -> Vec2<S>;

    fn check_particle(&self, p: &Particle<S>, tol: f64) -> Result<(), TilingError> {
        if !self.on_edge(&p.point, &p.edge, tol) {
            return Err(TilingError::OffEdge(p.edge));
        }
        let dir = self.edge_direction(&p.edge)?;
        if dir.cross(&p.direction).is_zero() {
            return Err(TilingError::NotTransverse);
        }
        Ok(())
    }
}

/// True when no edge of `a` is parallel to an edge of `b`.
pub fn is_transverse<S: Scalar, A: Tiling<S> + ?Sized, B: Tiling<S> + ?Sized>(a: &A, b: &B) -> bool {
    let db = b.edge_directions();
    a.edge_directions()
        .iter()
        .all(|da| db.iter().all(|d| !da.cross(d).is_zero()))
}
