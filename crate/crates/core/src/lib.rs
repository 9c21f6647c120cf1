//! Symplectic tiling billiards.
//!
//! Two tilings `A` and `B` and a pair of particles `(a, b)`: `a` travels
//! parallel to the edge of `B` under `b` until it meets an edge of `A`, then
//! `b` travels parallel to that new edge of `A` until it meets an edge of
//! `B`. This crate provides
//!
//! - exact rational geometry and rotated square grids ([`geom`], [`tiling`]),
//! - orbit iteration with exact periodicity detection ([`dynamics`]),
//! - sunburst pairs, holonomy and the phase solver that produces closed
//!   convex orbits ([`weave`]),
//! - the resulting map from convex equilateral polygons to equiangular ones
//!   ([`linkage`]) and from there into the hyperboloid model built from the
//!   signed-area form on line offsets ([`moduli`], [`pipeline`]).

pub mod dynamics;
pub mod geom;
pub mod linkage;
pub mod moduli;
pub mod pipeline;
pub mod tiling;
pub mod weave;
