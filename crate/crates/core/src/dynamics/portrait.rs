use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::{classify, ClassifyConfig, Verdict};
use super::orbit::{run_orbit, OrbitOptions};
use super::{DynamicsError, Factor, PairState};
use crate::geom::Scalar;
use crate::tiling::{EdgeRef, Particle, Tiling, TilingError};

/// Phase-space slice: starts on one edge of each tiling, sampled at cell
/// midpoints `(2i + 1) / 2w` along `edge_a` and `(2j + 1) / 2h` along
/// `edge_b`, each particle pointing along the tiling's crossing direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortraitSpec {
    pub edge_a: EdgeRef,
    pub edge_b: EdgeRef,
    pub width: usize,
    pub height: usize,
    pub orbit: OrbitOptions,
    pub classify: ClassifyConfig,
}

/// Verdicts in row-major order; row `j` holds the starts with the `j`-th
/// position along `edge_b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePortrait {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<Verdict>,
}

impl PhasePortrait {
    pub fn get(&self, i: usize, j: usize) -> Verdict {
        self.cells[j * self.width + i]
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.cells.iter().filter(|&&c| c == v).count()
    }
}

fn midpoint<S: Scalar>(k: usize, n: usize) -> S {
    S::from_i64(2 * k as i64 + 1) / S::from_i64(2 * n as i64)
}

fn seed<S: Scalar, T: Tiling<S> + ?Sized>(
    tiling: &T,
    edge: &EdgeRef,
    t: &S,
    factor: Factor,
) -> Result<Particle<S>, DynamicsError> {
    let bad = |source| DynamicsError::InvalidParticle { factor, source };
    let point = tiling.edge_point(edge, t).ok_or(bad(TilingError::ForeignEdge(*edge)))?;
    let dir = tiling.crossing(edge).ok_or(bad(TilingError::ForeignEdge(*edge)))?;
    Ok(Particle::new(point, *edge, dir))
}

/// Start state for cell `(i, j)` of a portrait.
pub fn portrait_start<S, TA, TB>(
    a: &TA,
    b: &TB,
    spec: &PortraitSpec,
    i: usize,
    j: usize,
) -> Result<PairState<S>, DynamicsError>
where
    S: Scalar,
    TA: Tiling<S> + ?Sized,
    TB: Tiling<S> + ?Sized,
{
    Ok(PairState::new(
        seed(a, &spec.edge_a, &midpoint(i, spec.width), Factor::A)?,
        seed(b, &spec.edge_b, &midpoint(j, spec.height), Factor::B)?,
    ))
}

/// Classifies the orbit of every cell. Cells are independent and evaluated
/// in parallel; any start or orbit failure marks the cell `Singular`.
pub fn phase_portrait<S, TA, TB>(a: &TA, b: &TB, spec: &PortraitSpec) -> Result<PhasePortrait, DynamicsError>
where
    S: Scalar,
    TA: Tiling<S> + ?Sized,
    TB: Tiling<S> + ?Sized,
{
    // The edges themselves must be usable; a bad edge is not a cell property.
    if spec.width > 0 && spec.height > 0 {
        portrait_start(a, b, spec, 0, 0)?.validate(a, b, spec.orbit.tol)?;
    }
    let opts = OrbitOptions {
        keep_states: false,
        ..spec.orbit.clone()
    };
    let cells = (0..spec.width * spec.height)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % spec.width, k / spec.width);
            portrait_start(a, b, spec, i, j)
                .and_then(|s| run_orbit(a, b, s, &opts))
                .map(|rec| classify(&rec, &spec.classify).verdict)
                .unwrap_or(Verdict::Singular)
        })
        .collect();
    Ok(PhasePortrait {
        width: spec.width,
        height: spec.height,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ExactScalar;
    use crate::tiling::{Axis, Grid};

    #[test]
    fn one_cell_is_one_classification() {
        let a = Grid::<ExactScalar>::standard();
        let b = Grid::rotated(&crate::geom::rational_circle_point(&ExactScalar::new(1, 3)));
        let spec = PortraitSpec {
            edge_a: EdgeRef::Grid { axis: Axis::V, line: 0, cell: 0 },
            edge_b: EdgeRef::Grid { axis: Axis::H, line: 0, cell: 0 },
            width: 1,
            height: 1,
            orbit: OrbitOptions { max_steps: 200, ..Default::default() },
            classify: ClassifyConfig::default(),
        };
        let p = phase_portrait(&a, &b, &spec).unwrap();
        let s = portrait_start(&a, &b, &spec, 0, 0).unwrap();
        let direct = classify(&run_orbit(&a, &b, s, &spec.orbit).unwrap(), &spec.classify);
        assert_eq!(p.cells, vec![direct.verdict]);
    }

    #[test]
    fn parallel_edges_are_rejected() {
        let g = Grid::<f64>::standard();
        let e = EdgeRef::Grid { axis: Axis::V, line: 0, cell: 0 };
        let spec = PortraitSpec {
            edge_a: e,
            edge_b: e,
            width: 2,
            height: 2,
            orbit: OrbitOptions::default(),
            classify: ClassifyConfig::default(),
        };
        assert!(phase_portrait(&g, &g, &spec).is_err());
    }
}
