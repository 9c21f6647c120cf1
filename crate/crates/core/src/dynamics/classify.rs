use serde::{Deserialize, Serialize};

use super::orbit::{BoundingBox, OrbitRecord, Termination};
use crate::geom::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Periodic,
    UnboundedDrift,
    BoundedAttracted,
    Singular,
    Inconclusive,
}

/// Thresholds for the bounded-attraction heuristic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    /// Required ratio of the final bit length to the bit length at the
    /// midpoint of the orbit.
    pub bit_growth: f64,
    /// Largest allowed relative growth of each factor's bounding-box
    /// diameter over the second half of the orbit.
    pub bbox_tolerance: f64,
    /// Orbits shorter than this are never called bounded.
    pub min_steps: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            bit_growth: 2.0,
            bbox_tolerance: 0.01,
            min_steps: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub steps: usize,
    pub period: Option<usize>,
    pub drift_a: Option<[i64; 2]>,
    pub drift_b: Option<[i64; 2]>,
    pub bits_mid: u64,
    pub bits_end: u64,
    /// `bits_end / bits_mid`, absent in floating mode.
    pub bit_growth: Option<f64>,
    /// Relative diameter growth of the bounding boxes over the second half,
    /// the larger of the two factors.
    pub bbox_growth: f64,
    pub bbox_a: BoundingBox,
    pub bbox_b: BoundingBox,
    pub summary: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

fn relative_growth(half: &BoundingBox, full: &BoundingBox) -> f64 {
    let d0 = half.diameter();
    let d1 = full.diameter();
    if d0 > 0.0 {
        (d1 - d0) / d0
    } else if d1 > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Periodic and drift verdicts come straight from exact repetition found by
/// the orbit runner. `BoundedAttracted` is a heuristic: the bounding boxes
/// stop growing during the second half while coordinate sizes keep growing.
pub fn classify<S: Scalar>(rec: &OrbitRecord<S>, cfg: &ClassifyConfig) -> Classification {
    let n = rec.trace_a.len();
    let mid = (n - 1) / 2;
    let half_a = BoundingBox::of(&rec.trace_a[..=mid]).expect("nonempty");
    let half_b = BoundingBox::of(&rec.trace_b[..=mid]).expect("nonempty");
    let bbox_a = rec.bbox_a();
    let bbox_b = rec.bbox_b();
    let bbox_growth = relative_growth(&half_a, &bbox_a).max(relative_growth(&half_b, &bbox_b));
    let bits_mid = rec.bit_lengths[mid];
    let bits_end = *rec.bit_lengths.last().expect("nonempty");
    let bit_growth = S::EXACT.then(|| bits_end as f64 / bits_mid.max(1) as f64);

    let mut ev = Evidence {
        steps: rec.steps,
        period: None,
        drift_a: None,
        drift_b: None,
        bits_mid,
        bits_end,
        bit_growth,
        bbox_growth,
        bbox_a,
        bbox_b,
        summary: String::new(),
    };

    let verdict = match &rec.termination {
        Termination::Periodic { period, start, residual } => {
            ev.period = Some(*period);
            ev.summary = format!("period {period} from state {start}, residual {residual:.3e}");
            Verdict::Periodic
        }
        Termination::TranslationPeriodic {
            period,
            start,
            drift_a,
            drift_b,
            ..
        } => {
            ev.period = Some(*period);
            ev.drift_a = Some(*drift_a);
            ev.drift_b = Some(*drift_b);
            ev.summary = format!(
                "repeats after {period} steps from state {start} shifted by {drift_a:?} on A and {drift_b:?} on B"
            );
            Verdict::UnboundedDrift
        }
        Termination::VertexHit { step, factor, .. } => {
            ev.summary = format!("vertex hit on {factor:?} at step {step}");
            Verdict::Singular
        }
        Termination::Escaped { step, factor } => {
            ev.summary = format!("escape on {factor:?} at step {step}");
            Verdict::Singular
        }
        Termination::MaxSteps => {
            let stable = bbox_growth < cfg.bbox_tolerance;
            let growing = bit_growth.is_some_and(|g| g >= cfg.bit_growth);
            let long = rec.steps >= cfg.min_steps;
            ev.summary = format!(
                "{} steps, box growth {:.3}% over second half, bits {} -> {}",
                rec.steps,
                100.0 * bbox_growth,
                bits_mid,
                bits_end
            );
            if stable && growing && long {
                Verdict::BoundedAttracted
            } else {
                Verdict::Inconclusive
            }
        }
    };
    Classification { verdict, evidence: ev }
}
