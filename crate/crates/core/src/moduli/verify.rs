use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{area_form, butterfly_matrix, quotient_butterfly, right_angled_pentagon, signature, walls, ModuliError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ButterflyCheck {
    pub k: usize,
    /// `max |B^2 - I|`.
    pub involution: f64,
    /// `max |B^T G B - G|`.
    pub isometry: f64,
    /// Rank of `B - I` on the gauge quotient; 1 for a reflection.
    pub moved_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    /// `max |B_i B_j - B_j B_i|`.
    pub commutator: f64,
    /// `|Q(w_i, w_j)|`.
    pub wall_product: f64,
}

/// Residuals of every moduli invariant for `N = 5`, plus the radical
/// dimension for `N = 4..=10`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PentagonReport {
    pub quotient_signature: (usize, usize),
    pub radical_dimensions: Vec<(usize, usize)>,
    pub butterflies: Vec<ButterflyCheck>,
    pub non_adjacent: Vec<PairCheck>,
    pub angles: Vec<f64>,
    pub max_angle_error: f64,
    pub corner_margin: f64,
    pub tol: f64,
    pub pass: bool,
}

fn rank(m: &DMatrix<f64>, tol: f64) -> usize {
    m.clone().svd(false, false).singular_values.iter().filter(|&&s| s > tol).count()
}

/// `tol` bounds the commutators, wall products and angle errors; involution
/// and isometry residuals are held to `1e-12`.
pub fn verify_pentagon(tol: f64) -> Result<PentagonReport, ModuliError> {
    let n = 5;
    let form = area_form(n)?;
    let radical_dimensions = (4..=10)
        .map(|m| area_form(m).map(|f| (m, signature(&f.gram).2)))
        .collect::<Result<Vec<_>, _>>()?;

    let id = DMatrix::<f64>::identity(n, n);
    let mut mats = Vec::new();
    let mut butterflies = Vec::new();
    for k in 0..n {
        let b = butterfly_matrix(n, k)?;
        let moved = quotient_butterfly(n, k)? - DMatrix::identity(n - 2, n - 2);
        butterflies.push(ButterflyCheck {
            k,
            involution: (&b * &b - &id).amax(),
            isometry: (b.transpose() * &form.gram * &b - &form.gram).amax(),
            moved_rank: rank(&moved, 1e-9),
        });
        mats.push(b);
    }

    let ws = walls(n)?;
    let mut non_adjacent = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if (j + 1) % n == i {
                continue;
            }
            non_adjacent.push(PairCheck {
                i,
                j,
                commutator: (&mats[i] * &mats[j] - &mats[j] * &mats[i]).amax(),
                wall_product: form.q(&ws[i].normal(), &ws[j].normal()).abs(),
            });
        }
    }

    let pent = right_angled_pentagon()?;
    let max_angle_error = pent.angles.iter().map(|a| (a - FRAC_PI_2).abs()).fold(0.0, f64::max);
    let quotient_signature = form.quotient_signature();
    let pass = quotient_signature == (1, 2)
        && radical_dimensions.iter().all(|&(_, d)| d == 2)
        && butterflies
            .iter()
            .all(|b| b.involution <= 1e-12 && b.isometry <= 1e-12 && b.moved_rank == 1)
        && non_adjacent.iter().all(|p| p.commutator <= tol && p.wall_product <= tol)
        && max_angle_error <= tol
        && pent.corner_margin > 0.0;

    Ok(PentagonReport {
        quotient_signature,
        radical_dimensions,
        butterflies,
        non_adjacent,
        angles: pent.angles,
        max_angle_error,
        corner_margin: pent.corner_margin,
        tol,
        pass,
    })
}
