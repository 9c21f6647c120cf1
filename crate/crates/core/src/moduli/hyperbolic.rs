use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use super::{area_form, cyclic_shift, line_intersection, quotient_butterfly, AreaForm, ModuliError, OffsetVector};

/// Unit-area equiangular polygon modulo translation, in gauge coordinates
/// `(s_2, ..., s_{N-1})`; `Q(x, x) = 1` on the sheet containing the regular
/// polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    pub n: usize,
    pub x: Vec<f64>,
}

impl HyperbolicPoint {
    pub fn coords(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.x)
    }
}

fn form_for(n: usize) -> Result<AreaForm, ModuliError> {
    if n < 5 {
        return Err(ModuliError::TooFewFamilies { needed: 5, got: n });
    }
    area_form(n)
}

fn regular_coords(form: &AreaForm) -> DVector<f64> {
    let x = form.quotient_coords(&OffsetVector::new(vec![1.0; form.n]));
    let a = form.q(&x, &x);
    x / a.sqrt()
}

fn normalize(form: &AreaForm, x: DVector<f64>) -> Result<DVector<f64>, ModuliError> {
    let a = form.q(&x, &x);
    if a <= 0.0 {
        return Err(ModuliError::NonPositiveArea(a));
    }
    let x = x / a.sqrt();
    // `s` and `-s` are the same polygon turned by a half turn.
    Ok(if form.q(&x, &regular_coords(form)) < 0.0 { -x } else { x })
}

/// Removes translation and scale: the point of the hyperboloid representing
/// the polygon of `s`.
pub fn to_hyperbolic(s: &OffsetVector) -> Result<HyperbolicPoint, ModuliError> {
    let form = form_for(s.n())?;
    let x = normalize(&form, form.quotient_coords(s))?;
    Ok(HyperbolicPoint {
        n: s.n(),
        x: x.iter().copied().collect(),
    })
}

/// `arccosh Q(p, q)`, evaluated as `2 asinh(sqrt(-Q(p - q, p - q)) / 2)`,
/// which equals it on the hyperboloid and keeps full precision for nearby
/// points.
pub fn hyperbolic_distance(p: &HyperbolicPoint, q: &HyperbolicPoint) -> Result<f64, ModuliError> {
    if p.n != q.n {
        return Err(ModuliError::SizeMismatch(p.n, q.n));
    }
    let form = form_for(p.n)?;
    let d = p.coords() - q.coords();
    Ok(2.0 * ((-form.q(&d, &d)).max(0.0).sqrt() / 2.0).asinh())
}

/// The point of the relabeled polygon `s'_i = s_{i+k}`; an isometry.
pub fn cyclic_shift_point(p: &HyperbolicPoint, k: usize) -> Result<HyperbolicPoint, ModuliError> {
    let form = form_for(p.n)?;
    to_hyperbolic(&cyclic_shift(&form.lift(&p.coords()), k))
}

/// Mirror of butterfly move `k`: `B_k x = x - 2 Q(x, w) / Q(w, w) w`, with
/// `Q(w, w) = -1` and the regular polygon on the positive side. Its zero set
/// is the set of polygons whose edge on `l_k` has collapsed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Wall {
    pub k: usize,
    pub normal: Vec<f64>,
}

impl Wall {
    pub fn normal(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.normal)
    }
}

/// The mirror of every butterfly move for `N >= 5` families.
pub fn walls(n: usize) -> Result<Vec<Wall>, ModuliError> {
    let form = form_for(n)?;
    let center = regular_coords(&form);
    (0..n)
        .map(|k| {
            let m = quotient_butterfly(n, k)? - DMatrix::identity(n - 2, n - 2);
            // Rank one: every column is a multiple of the normal.
            let (col, _) = m
                .column_iter()
                .enumerate()
                .map(|(i, c)| (i, c.norm()))
                .fold((0, 0.0), |best, c| if c.1 > best.1 { c } else { best });
            let w = m.column(col).into_owned();
            let qq = form.q(&w, &w);
            let mut w = w / (-qq).sqrt();
            if form.q(&center, &w) < 0.0 {
                w = -w;
            }
            Ok(Wall {
                k,
                normal: w.iter().copied().collect(),
            })
        })
        .collect()
}

pub fn pentagon_walls() -> Vec<Wall> {
    walls(5).expect("the pentagon area form is valid")
}

/// Strictly on the regular polygon's side of every wall.
pub fn inside_walls(p: &HyperbolicPoint, walls: &[Wall]) -> Result<bool, ModuliError> {
    let form = form_for(p.n)?;
    let x = p.coords();
    Ok(walls.iter().all(|w| form.q(&x, &w.normal()) > 0.0))
}

/// The pentagon cut out by the five pentagon walls, taken in the cyclic
/// order `0, 2, 4, 1, 3` in which consecutive walls meet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RightAngledPentagon {
    pub order: [usize; 5],
    pub walls: Vec<Wall>,
    /// `corners[i]` lies on walls `order[i]` and `order[i + 1]`.
    pub corners: Vec<HyperbolicPoint>,
    /// Interior angle at each corner.
    pub angles: Vec<f64>,
    /// Smallest `Q(corner, w)` over walls not through the corner; positive
    /// when every corner is strictly inside the other three half-planes.
    pub corner_margin: f64,
}

pub fn right_angled_pentagon() -> Result<RightAngledPentagon, ModuliError> {
    let form = form_for(5)?;
    let walls = walls(5)?;
    let order = [0, 2, 4, 1, 3];
    let mut corners = Vec::new();
    let mut angles = Vec::new();
    let mut corner_margin = f64::INFINITY;
    for i in 0..5 {
        let (wa, wb) = (walls[order[i]].normal(), walls[order[(i + 1) % 5]].normal());
        // Interior angle between the half-planes Q(x, w) > 0 with unit
        // spacelike normals: cos = Q(wa, wb).
        angles.push(form.q(&wa, &wb).clamp(-1.0, 1.0).acos());
        // x is Q-orthogonal to both normals.
        let (qa, qb) = (&form.quotient * &wa, &form.quotient * &wb);
        let c = Vector3::new(qa[0], qa[1], qa[2]).cross(&Vector3::new(qb[0], qb[1], qb[2]));
        let x = normalize(&form, DVector::from_column_slice(c.as_slice()))?;
        for (j, w) in walls.iter().enumerate() {
            if j != order[i] && j != order[(i + 1) % 5] {
                corner_margin = corner_margin.min(form.q(&x, &w.normal()));
            }
        }
        corners.push(HyperbolicPoint {
            n: 5,
            x: x.iter().copied().collect(),
        });
    }
    Ok(RightAngledPentagon {
        order,
        walls,
        corners,
        angles,
        corner_margin,
    })
}

/// The chart coordinate `((l_0 ∩ l_2) - (l_0 ∩ l_3)) . (1, 0)` of a pentagon:
/// a signed distance along `l_0`, linear in `s` and blind to translation.
pub fn chart_c(s: &OffsetVector) -> f64 {
    let p = line_intersection(s, 0, 2).expect("families 0 and 2 are not parallel");
    let q = line_intersection(s, 0, 3).expect("families 0 and 3 are not parallel");
    p.x - q.x
}

/// Poincaré disk coordinates of a point, centred at the regular polygon.
pub fn poincare_disk(p: &HyperbolicPoint) -> Result<Vec<f64>, ModuliError> {
    let form = form_for(p.n)?;
    let m = p.n - 2;
    let e0 = regular_coords(&form);
    // Q-orthonormal frame: e0 timelike, the rest spacelike with Q = -1.
    let mut frame: Vec<DVector<f64>> = Vec::new();
    for i in 0..m {
        let mut v = DVector::from_fn(m, |r, _| if r == i { 1.0 } else { 0.0 });
        v -= &e0 * form.q(&v, &e0);
        for e in &frame {
            v += e * form.q(&v, e);
        }
        let qq = -form.q(&v, &v);
        if qq > 1e-9 {
            frame.push(v / qq.sqrt());
        }
        if frame.len() == m - 1 {
            break;
        }
    }
    let x = p.coords();
    let y0 = form.q(&x, &e0);
    Ok(frame.iter().map(|e| -form.q(&x, e) / (1.0 + y0)).collect())
}
