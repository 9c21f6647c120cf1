//! Convex equilateral polygon → convex equiangular polygon → point of the
//! hyperbolic moduli space.

use serde::{Deserialize, Serialize};

use crate::linkage::{solve_equiangular, EquilateralPolygon, LinkageError};
use crate::moduli::{cyclic_shift_point, hyperbolic_distance, to_hyperbolic, HyperbolicPoint, ModuliError, OffsetVector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("the hyperbolic embedding needs at least 5 sides, got {0}")]
    TooFewSides(usize),
    #[error(transparent)]
    Linkage(#[from] LinkageError),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
}

/// Line offsets of the equiangular polygon of `p`, turned so that edge `k`
/// runs along family `k + 1`. `r0` is the orbit start radius; it only
/// dilates the offsets.
pub fn equiangular_offsets(p: &EquilateralPolygon, r0: f64) -> Result<OffsetVector, PipelineError> {
    let sol = solve_equiangular(p, r0)?;
    // Edge k is parallel to ray k + 1 of the regular sunburst turned by the
    // phase; undo the turn.
    let aligned = sol.polygon.rotated(-sol.phase);
    Ok(OffsetVector::from_polygon(&aligned)?)
}

pub fn equilateral_to_hyperbolic(p: &EquilateralPolygon) -> Result<HyperbolicPoint, PipelineError> {
    equilateral_to_hyperbolic_with_radius(p, 1.0)
}

pub fn equilateral_to_hyperbolic_with_radius(p: &EquilateralPolygon, r0: f64) -> Result<HyperbolicPoint, PipelineError> {
    if p.len() < 5 {
        return Err(PipelineError::TooFewSides(p.len()));
    }
    Ok(to_hyperbolic(&equiangular_offsets(p, r0)?)?)
}

/// Images of a polygon and of its cyclic relabeling, and how far the second
/// is from the first moved by the matching relabeling isometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelabelReport {
    pub shift: usize,
    pub original: HyperbolicPoint,
    pub relabeled: HyperbolicPoint,
    pub discrepancy: f64,
}

/// Starts the vertex labels of `p` at vertex `k`.
pub fn cyclic_relabel(p: &EquilateralPolygon, k: usize) -> Result<RelabelReport, PipelineError> {
    let q = EquilateralPolygon::new(p.polygon().relabeled(k))?;
    let original = equilateral_to_hyperbolic(p)?;
    let relabeled = equilateral_to_hyperbolic(&q)?;
    let moved = cyclic_shift_point(&original, k)?;
    let discrepancy = hyperbolic_distance(&relabeled, &moved)?;
    Ok(RelabelReport {
        shift: k,
        original,
        relabeled,
        discrepancy,
    })
}
