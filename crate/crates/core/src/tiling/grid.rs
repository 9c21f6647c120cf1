use serde::{Deserialize, Serialize};

use super::{Axis, EdgeRef, Hit, Particle, Tiling, TilingError};
use crate::geom::{Mat2, Scalar, Vec2};

/// Image of the integer square grid under an invertible linear map.
///
/// The square grid rotated by a unit vector `u` (complex multiplication by
/// `u`) is the common case; general maps arise from affine transport of
/// orbits. Queries run in grid-local coordinates, where edges are the unit
/// segments of the integer grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "GridSpec<S>",
    into = "GridSpec<S>",
    bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>")
)]
pub struct Grid<S: Scalar> {
    basis: Mat2<S>,
    inverse: Mat2<S>,
}

#[derive(Serialize, Deserialize)]
struct GridSpec<S> {
    basis: Mat2<S>,
}

impl<S: Scalar> TryFrom<GridSpec<S>> for Grid<S> {
    type Error = &'static str;
    fn try_from(spec: GridSpec<S>) -> Result<Self, Self::Error> {
        Grid::from_basis(spec.basis).ok_or("grid basis is singular")
    }
}

impl<S: Scalar> From<Grid<S>> for GridSpec<S> {
    fn from(g: Grid<S>) -> Self {
        GridSpec { basis: g.basis }
    }
}

impl<S: Scalar> Grid<S> {
    /// The usual square grid.
    pub fn standard() -> Self {
        Self::from_basis(Mat2::identity()).expect("identity is invertible")
    }

    /// The square grid multiplied by the unit complex number `rotation`.
    pub fn rotated(rotation: &Vec2<S>) -> Self {
        Self::from_basis(Mat2::from_columns(rotation, &rotation.perp()))
            .expect("rotation must be nonzero")
    }

    /// Grid whose local unit vectors map to the columns of `basis`;
    /// `None` when `basis` is singular.
    pub fn from_basis(basis: Mat2<S>) -> Option<Self> {
        let inverse = basis.inverse()?;
        Some(Grid { basis, inverse })
    }

    /// Image of this grid under the linear map `t`.
    pub fn transformed(&self, t: &Mat2<S>) -> Option<Self> {
        Self::from_basis(t.mul(&self.basis))
    }

    pub fn basis(&self) -> &Mat2<S> {
        &self.basis
    }

    pub fn to_local(&self, p: &Vec2<S>) -> Vec2<S> {
        self.inverse.apply(p)
    }

    pub fn to_world(&self, p: &Vec2<S>) -> Vec2<S> {
        self.basis.apply(p)
    }

    /// World point at local parameter `t` in `(0, 1)` along a grid edge.
    pub fn point_on_edge(&self, edge: &EdgeRef, t: &S) -> Option<Vec2<S>> {
        let local = match *edge {
            EdgeRef::Grid { axis: Axis::V, line, cell } => {
                Vec2::new(S::from_i64(line), S::from_i64(cell) + t.clone())
            }
            EdgeRef::Grid { axis: Axis::H, line, cell } => {
                Vec2::new(S::from_i64(cell) + t.clone(), S::from_i64(line))
            }
            EdgeRef::Ray(_) => return None,
        };
        Some(self.to_world(&local))
    }

    /// Transverse direction of a grid edge in world coordinates: the image of
    /// the local `+x` (vertical edges) or `+y` (horizontal edges) axis.
    pub fn crossing_direction(&self, edge: &EdgeRef) -> Option<Vec2<S>> {
        match edge {
            EdgeRef::Grid { axis: Axis::V, .. } => Some(self.basis.column(0)),
            EdgeRef::Grid { axis: Axis::H, .. } => Some(self.basis.column(1)),
            EdgeRef::Ray(_) => None,
        }
    }

    // Local coordinates of `start`, snapped exactly onto the line of `from`.
    fn local_start(&self, start: &Vec2<S>, from: Option<&EdgeRef>) -> Vec2<S> {
        let mut p = self.to_local(start);
        match from {
            Some(EdgeRef::Grid { axis: Axis::V, line, .. }) => p.x = S::from_i64(*line),
            Some(EdgeRef::Grid { axis: Axis::H, line, .. }) => p.y = S::from_i64(*line),
            _ => {}
        }
        p
    }
}

// Next integer strictly beyond `x` when moving with sign `dir`.
fn next_line<S: Scalar>(x: &S, dir: i32) -> i64 {
    if dir > 0 {
        x.floor_i64() + 1
    } else {
        -((-x.clone()).floor_i64()) - 1
    }
}

fn is_integer<S: Scalar>(x: &S) -> bool {
    S::from_i64(x.floor_i64()) == *x
}

impl<S: Scalar> Tiling<S> for Grid<S> {
    fn first_hit(
        &self,
        start: &Vec2<S>,
        travel: &Vec2<S>,
        from: Option<&EdgeRef>,
    ) -> Result<Hit<S>, TilingError> {
        if travel.is_zero() {
            return Err(TilingError::ZeroTravel);
        }
        let p = self.local_start(start, from);
        let d = self.to_local(travel);

        // Parameter along the ray to the next vertical / horizontal line.
        let tx = (d.x.sign() != 0).then(|| {
            let line = next_line(&p.x, d.x.sign());
            (line, (S::from_i64(line) - p.x.clone()) / d.x.clone())
        });
        let ty = (d.y.sign() != 0).then(|| {
            let line = next_line(&p.y, d.y.sign());
            (line, (S::from_i64(line) - p.y.clone()) / d.y.clone())
        });

        let vertex = |local: Vec2<S>| TilingError::VertexHit {
            point: self.to_world(&local).to_f64(),
        };
        let (local, edge) = match (tx, ty) {
            (Some((lx, sx)), Some((ly, sy))) if sx == sy => {
                return Err(vertex(Vec2::new(S::from_i64(lx), S::from_i64(ly))));
            }
            (Some((lx, sx)), Some((_, sy))) if sx < sy => self.hit_vertical(&p, &d, lx, sx),
            (Some((lx, sx)), None) => self.hit_vertical(&p, &d, lx, sx),
            (_, Some((ly, sy))) => self.hit_horizontal(&p, &d, ly, sy),
            (None, None) => return Err(TilingError::ZeroTravel),
        };
        let Some(edge) = edge else {
            return Err(vertex(local));
        };
        Ok(Hit {
            point: self.to_world(&local),
            edge,
        })
    }

    fn edge_direction(&self, edge: &EdgeRef) -> Result<Vec2<S>, TilingError> {
        match edge {
            EdgeRef::Grid { axis: Axis::V, .. } => Ok(self.basis.column(1)),
            EdgeRef::Grid { axis: Axis::H, .. } => Ok(self.basis.column(0)),
            EdgeRef::Ray(_) => Err(TilingError::ForeignEdge(*edge)),
        }
    }

    fn edge_directions(&self) -> Vec<Vec2<S>> {
        vec![self.basis.column(0), self.basis.column(1)]
    }

    fn on_edge(&self, point: &Vec2<S>, edge: &EdgeRef, tol: f64) -> bool {
        let p = self.to_local(point);
        let (across, along, line, cell) = match *edge {
            EdgeRef::Grid { axis: Axis::V, line, cell } => (p.x, p.y, line, cell),
            EdgeRef::Grid { axis: Axis::H, line, cell } => (p.y, p.x, line, cell),
            EdgeRef::Ray(_) => return false,
        };
        let lo = S::from_i64(cell);
        let hi = S::from_i64(cell + 1);
        if S::EXACT {
            across == S::from_i64(line) && along > lo && along < hi
        } else {
            let a = along.to_f64();
            (across.to_f64() - line as f64).abs() <= tol && a > lo.to_f64() + tol && a < hi.to_f64() - tol
        }
    }

    fn reduce(&self, particle: &Particle<S>) -> (Particle<S>, [i64; 2]) {
        let offset = match particle.edge {
            EdgeRef::Grid { axis: Axis::V, line, cell } => [line, cell],
            EdgeRef::Grid { axis: Axis::H, line, cell } => [cell, line],
            EdgeRef::Ray(_) => [0, 0],
        };
        let edge = match particle.edge {
            EdgeRef::Grid { axis, .. } => EdgeRef::Grid { axis, line: 0, cell: 0 },
            e => e,
        };
        let shift = self.lattice_vector(offset);
        let point = &particle.point - &shift;
        (Particle::new(point, edge, particle.direction.clone()), offset)
    }

    fn edge_point(&self, edge: &EdgeRef, t: &S) -> Option<Vec2<S>> {
        self.point_on_edge(edge, t)
    }

    fn crossing(&self, edge: &EdgeRef) -> Option<Vec2<S>> {
        self.crossing_direction(edge)
    }

    fn lattice_vector(&self, offset: [i64; 2]) -> Vec2<S> {
        self.to_world(&Vec2::new(S::from_i64(offset[0]), S::from_i64(offset[1])))
    }
}

impl<S: Scalar> Grid<S> {
    fn hit_vertical(&self, p: &Vec2<S>, d: &Vec2<S>, line: i64, s: S) -> (Vec2<S>, Option<EdgeRef>) {
        let y = p.y.clone() + s * d.y.clone();
        let local = Vec2::new(S::from_i64(line), y.clone());
        if is_integer(&y) {
            return (local, None);
        }
        let cell = y.floor_i64();
        (local, Some(EdgeRef::Grid { axis: Axis::V, line, cell }))
    }

    fn hit_horizontal(&self, p: &Vec2<S>, d: &Vec2<S>, line: i64, s: S) -> (Vec2<S>, Option<EdgeRef>) {
        let x = p.x.clone() + s * d.x.clone();
        let local = Vec2::new(x.clone(), S::from_i64(line));
        if is_integer(&x) {
            return (local, None);
        }
        let cell = x.floor_i64();
        (local, Some(EdgeRef::Grid { axis: Axis::H, line, cell }))
    }
}
