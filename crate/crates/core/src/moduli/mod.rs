//! Equiangular polygons as choices of one line from each of `N` parallel
//! families, and the signed-area form on the space of line offsets.
//!
//! Family `k` has direction `d_k = exp(2 pi i k / N)` and left normal
//! `n_k = i d_k`; an offset vector `s` selects the lines
//! `l_k = { x : n_k . x = s_k }` and the polygon with vertex `k` at
//! `l_k ∩ l_{k+1}`. Translating the polygon by `v` adds `(n_k . v)_k` to `s`,
//! and the signed area is a quadratic form whose radical is exactly this
//! translation plane. On the quotient it has signature `(1, N - 3)`, so for
//! `N = 5` the unit-area polygons form a hyperboloid model of the hyperbolic
//! plane.

mod hyperbolic;
mod verify;

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::linkage::Polygon;

pub use hyperbolic::{
    chart_c, cyclic_shift_point, hyperbolic_distance, inside_walls, pentagon_walls, poincare_disk,
    right_angled_pentagon, to_hyperbolic, walls, HyperbolicPoint, RightAngledPentagon, Wall,
};
pub use verify::{verify_pentagon, ButterflyCheck, PairCheck, PentagonReport};

/// Relative size below which an eigenvalue counts as zero.
const ZERO_EIGEN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModuliError {
    #[error("need at least {needed} line families, got {got}")]
    TooFewFamilies { needed: usize, got: usize },
    #[error("offset vectors have {0} and {1} entries")]
    SizeMismatch(usize, usize),
    #[error("quotient signature is {got:?}, expected {expected:?}")]
    SignatureMismatch { expected: (usize, usize), got: (usize, usize) },
    #[error("radical of the area form is not the translation plane (dimension {0})")]
    RadicalMismatch(usize),
    #[error("lines {0} and {1} are parallel, butterfly {2} is undefined")]
    ParallelWitnessLines(usize, usize, usize),
    #[error("signed area {0} is not positive")]
    NonPositiveArea(f64),
    #[error("edge {0} is not parallel to its line family")]
    NotAligned(usize),
}

pub fn family_direction(n: usize, k: usize) -> Vec2<f64> {
    Vec2::from_angle(TAU * (k % n) as f64 / n as f64)
}

pub fn family_normal(n: usize, k: usize) -> Vec2<f64> {
    family_direction(n, k).perp()
}

/// Signed offsets of one line from each family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OffsetVector {
    pub s: Vec<f64>,
}

impl OffsetVector {
    pub fn new(s: Vec<f64>) -> Self {
        OffsetVector { s }
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// Offsets of the translation by `v`.
    pub fn translation(n: usize, v: &Vec2<f64>) -> Self {
        OffsetVector::new((0..n).map(|k| family_normal(n, k).dot(v)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        OffsetVector::new(self.s.iter().zip(&o.s).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: f64) -> Self {
        OffsetVector::new(self.s.iter().map(|a| a * k).collect())
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.s)
    }

    pub fn from_vector(v: &DVector<f64>) -> Self {
        OffsetVector::new(v.iter().copied().collect())
    }

    /// Offsets of a polygon whose edge from vertex `k` to vertex `k + 1` is
    /// parallel to family `k + 1`.
    pub fn from_polygon(p: &Polygon) -> Result<Self, ModuliError> {
        let n = p.len();
        if n < 3 {
            return Err(ModuliError::TooFewFamilies { needed: 3, got: n });
        }
        let mut s = vec![0.0; n];
        for (k, e) in p.edges().iter().enumerate() {
            let fam = (k + 1) % n;
            if family_direction(n, fam).cross(e).abs() > 1e-9 * e.norm().max(1.0) {
                return Err(ModuliError::NotAligned(k));
            }
            let mid = (p.vertex(k) + p.vertex(k + 1)).scale(&0.5);
            s[fam] = family_normal(n, fam).dot(&mid);
        }
        Ok(OffsetVector::new(s))
    }
}

/// `l_i ∩ l_j`, or `None` when the families are parallel.
pub fn line_intersection(s: &OffsetVector, i: usize, j: usize) -> Option<Vec2<f64>> {
    let n = s.n();
    let (a, b) = (family_normal(n, i), family_normal(n, j));
    let det = a.cross(&b);
    if det.abs() < 1e-12 {
        return None;
    }
    let (si, sj) = (s.s[i % n], s.s[j % n]);
    // a . x = si, b . x = sj
    Some(Vec2::new((si * b.y - sj * a.y) / det, (a.x * sj - b.x * si) / det))
}

/// Vertex `k` is `l_k ∩ l_{k+1}`. The polygon is equiangular but may be
/// non-convex or self-intersecting.
pub fn polygon_from_offsets(s: &OffsetVector) -> Polygon {
    let n = s.n();
    Polygon::new(
        (0..n)
            .map(|k| line_intersection(s, k, k + 1).expect("consecutive families are never parallel"))
            .collect(),
    )
}

pub fn signed_area(s: &OffsetVector) -> f64 {
    polygon_from_offsets(s).signed_area()
}

/// `(positive, negative, zero)` eigenvalue counts of a symmetric matrix.
pub fn signature(m: &DMatrix<f64>) -> (usize, usize, usize) {
    let eig = SymmetricEigen::new(m.clone());
    let scale = eig.eigenvalues.amax().max(1e-300);
    let mut sig = (0, 0, 0);
    for &l in eig.eigenvalues.iter() {
        if l.abs() <= ZERO_EIGEN * scale {
            sig.2 += 1;
        } else if l > 0.0 {
            sig.0 += 1;
        } else {
            sig.1 += 1;
        }
    }
    sig
}

/// The signed-area quadratic form on offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct AreaForm {
    pub n: usize,
    /// `area(s) = s^T gram s`.
    pub gram: DMatrix<f64>,
    /// Offsets of the unit translations along x and y.
    pub radical_basis: [DVector<f64>; 2],
    /// Eigenvalue signs of `gram`.
    pub signature: (usize, usize, usize),
    /// Restriction of `gram` to gauge coordinates `s_2, ..., s_{N-1}`.
    pub quotient: DMatrix<f64>,
}

impl AreaForm {
    /// Signature of the induced form on offsets modulo translation.
    pub fn quotient_signature(&self) -> (usize, usize) {
        let (p, q, _) = signature(&self.quotient);
        (p, q)
    }

    pub fn area(&self, s: &OffsetVector) -> f64 {
        let v = s.to_vector();
        v.dot(&(&self.gram * &v))
    }

    /// Bilinear form on gauge coordinates.
    pub fn q(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.quotient * y))
    }

    /// Adds the translation that makes `s_0 = s_1 = 0`.
    pub fn gauge_fix(&self, s: &OffsetVector) -> OffsetVector {
        gauge_fix(s)
    }

    /// `(s_2, ..., s_{N-1})` after gauge fixing.
    pub fn quotient_coords(&self, s: &OffsetVector) -> DVector<f64> {
        quotient_coords(s)
    }

    /// Offsets with `s_0 = s_1 = 0` and the given gauge coordinates.
    pub fn lift(&self, x: &DVector<f64>) -> OffsetVector {
        let mut s = vec![0.0, 0.0];
        s.extend(x.iter());
        OffsetVector::new(s)
    }
}

fn gauge_fix(s: &OffsetVector) -> OffsetVector {
    let n = s.n();
    let v = line_intersection(s, 0, 1).expect("families 0 and 1 are not parallel");
    let mut out = s.add(&OffsetVector::translation(n, &v).scale(-1.0));
    out.s[0] = 0.0;
    out.s[1] = 0.0;
    out
}

fn quotient_coords(s: &OffsetVector) -> DVector<f64> {
    DVector::from_column_slice(&gauge_fix(s).s[2..])
}

fn basis(n: usize, i: usize) -> OffsetVector {
    let mut s = vec![0.0; n];
    s[i] = 1.0;
    OffsetVector::new(s)
}

/// Gram matrix by polarization of the shoelace area, with self-checks that
/// the radical is the translation plane and the quotient has signature
/// `(1, N - 3)`.
pub fn area_form(n: usize) -> Result<AreaForm, ModuliError> {
    if n < 4 {
        return Err(ModuliError::TooFewFamilies { needed: 4, got: n });
    }
    let diag: Vec<f64> = (0..n).map(|i| signed_area(&basis(n, i))).collect();
    let gram = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else {
            0.5 * (signed_area(&basis(n, i).add(&basis(n, j))) - diag[i] - diag[j])
        }
    });
    let radical_basis = [
        OffsetVector::translation(n, &Vec2::new(1.0, 0.0)).to_vector(),
        OffsetVector::translation(n, &Vec2::new(0.0, 1.0)).to_vector(),
    ];
    let sig = signature(&gram);
    let scale = gram.amax();
    let annihilated = radical_basis.iter().all(|t| (&gram * t).amax() <= 1e-12 * scale.max(1.0));
    if sig.2 != 2 || !annihilated {
        return Err(ModuliError::RadicalMismatch(sig.2));
    }
    let quotient = gram.view((2, 2), (n - 2, n - 2)).into_owned();
    let form = AreaForm {
        n,
        gram,
        radical_basis,
        signature: sig,
        quotient,
    };
    let got = form.quotient_signature();
    if got != (1, n - 3) {
        return Err(ModuliError::SignatureMismatch { expected: (1, n - 3), got });
    }
    Ok(form)
}

/// Replaces `l_k` by its mirror image through `l_{k-1} ∩ l_{k+1}`.
pub fn butterfly(s: &OffsetVector, k: usize) -> Result<OffsetVector, ModuliError> {
    let n = s.n();
    let k = k % n;
    let (prev, next) = ((k + n - 1) % n, (k + 1) % n);
    let p = line_intersection(s, prev, next).ok_or(ModuliError::ParallelWitnessLines(prev, next, k))?;
    let mut out = s.clone();
    out.s[k] = 2.0 * family_normal(n, k).dot(&p) - s.s[k];
    Ok(out)
}

/// Matrix of the (linear) butterfly move on offsets.
pub fn butterfly_matrix(n: usize, k: usize) -> Result<DMatrix<f64>, ModuliError> {
    let cols: Vec<DVector<f64>> = (0..n)
        .map(|i| butterfly(&basis(n, i), k).map(|b| b.to_vector()))
        .collect::<Result<_, _>>()?;
    Ok(DMatrix::from_columns(&cols))
}

/// Butterfly move induced on gauge coordinates.
pub fn quotient_butterfly(n: usize, k: usize) -> Result<DMatrix<f64>, ModuliError> {
    let m = n - 2;
    let cols: Vec<DVector<f64>> = (0..m)
        .map(|i| {
            let mut s = vec![0.0; n];
            s[i + 2] = 1.0;
            butterfly(&OffsetVector::new(s), k).map(|b| quotient_coords(&b))
        })
        .collect::<Result<_, _>>()?;
    Ok(DMatrix::from_columns(&cols))
}

/// Relabels lines so that `l'_i = l_{i+k}` after rotating the plane by
/// `-2 pi k / N`: `s'_i = s_{i+k}`.
pub fn cyclic_shift(s: &OffsetVector, k: usize) -> OffsetVector {
    let n = s.n();
    OffsetVector::new((0..n).map(|i| s.s[(i + k) % n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_offsets(n: usize, rng: &mut ChaCha8Rng) -> OffsetVector {
        OffsetVector::new((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
    }

    #[test]
    fn equal_offsets_give_regular_polygon() {
        let p = polygon_from_offsets(&OffsetVector::new(vec![-1.0; 5]));
        for v in &p.vertices {
            assert!((v.norm() - 1.0 / (PI / 5.0).cos()).abs() < 1e-12);
        }
        // Circumradius 1 pentagon: apothem cos(pi/5).
        let c = (PI / 5.0).cos();
        let unit = polygon_from_offsets(&OffsetVector::new(vec![-c; 5]));
        assert!((unit.signed_area() - 2.5 * (TAU / 5.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn rectangle_area() {
        // Families 0..3 point along x, y, -x, -y.
        let (a, b) = (1.5, 0.5);
        let s = OffsetVector::new(vec![0.0, 0.0, a, b]);
        let p = polygon_from_offsets(&s);
        // Lines: y = 0, x = 0, y = -a, x = -b (n_2 = (0,-1), n_3 = (1,0)).
        let want = [
            Vec2::new(0.0, 0.0),
            Vec2::new(0.0, -a),
            Vec2::new(b, -a),
            Vec2::new(b, 0.0),
        ];
        for (v, w) in p.vertices.iter().zip(&want) {
            assert!((v - w).norm() < 1e-12, "{v:?} vs {w:?}");
        }
        // Direct shoelace on the four corners.
        let shoelace = 0.5 * (0..4).map(|i| want[i].cross(&want[(i + 1) % 4])).sum::<f64>();
        assert!((signed_area(&s) - shoelace).abs() < 1e-12);
        assert!((signed_area(&s) - a * b).abs() < 1e-12);
    }

    #[test]
    fn vertices_lie_on_their_lines() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 4..9 {
            let s = random_offsets(n, &mut rng);
            let p = polygon_from_offsets(&s);
            for k in 0..n {
                let v = p.vertex(k);
                assert!((family_normal(n, k).dot(v) - s.s[k]).abs() < 1e-12);
                assert!((family_normal(n, k + 1).dot(v) - s.s[(k + 1) % n]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_reproduces_area() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 4..=10 {
            let f = area_form(n).unwrap();
            assert_eq!(f.quotient_signature(), (1, n - 3));
            for _ in 0..50 {
                let s = random_offsets(n, &mut rng);
                let a = signed_area(&s);
                assert!((f.area(&s) - a).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
        assert!(matches!(area_form(3), Err(ModuliError::TooFewFamilies { .. })));
    }

    #[test]
    fn area_is_translation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_offsets(6, &mut rng);
        let t = OffsetVector::translation(6, &Vec2::new(0.3, -1.7));
        assert!((signed_area(&s.add(&t)) - signed_area(&s)).abs() < 1e-12);
    }

    #[test]
    fn polygon_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = random_offsets(7, &mut rng);
        let back = OffsetVector::from_polygon(&polygon_from_offsets(&s)).unwrap();
        for (x, y) in s.s.iter().zip(&back.s) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn butterfly_is_area_preserving_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 5..9 {
            for k in 0..n {
                let s = random_offsets(n, &mut rng);
                let b = butterfly(&s, k).unwrap();
                let bb = butterfly(&b, k).unwrap();
                for (x, y) in s.s.iter().zip(&bb.s) {
                    assert!((x - y).abs() < 1e-12);
                }
                assert!((signed_area(&b) - signed_area(&s)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn concurrent_lines_are_fixed() {
        let n = 5;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut s = random_offsets(n, &mut rng);
        let p = line_intersection(&s, 1, 3).unwrap();
        s.s[2] = family_normal(n, 2).dot(&p);
        assert_eq!(butterfly(&s, 2).unwrap().s[2], s.s[2]);
    }

    #[test]
    fn square_butterfly_is_undefined() {
        let s = OffsetVector::new(vec![0.0, 0.0, 1.0, 1.0]);
        assert!(matches!(butterfly(&s, 1), Err(ModuliError::ParallelWitnessLines(0, 2, 1))));
    }

    #[test]
    fn cyclic_shift_is_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = random_offsets(5, &mut rng);
        let p = polygon_from_offsets(&s).rotated(-TAU / 5.0);
        let q = polygon_from_offsets(&cyclic_shift(&s, 1));
        for k in 0..5 {
            assert!((q.vertex(k) - p.vertex(k + 1)).norm() < 1e-12);
        }
    }
}
