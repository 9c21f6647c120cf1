use serde::{Deserialize, Serialize};

use super::{step, DynamicsError, Factor, PairState};
use crate::geom::{Scalar, Vec2};
use crate::tiling::{Particle, Tiling};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitOptions {
    pub max_steps: usize,
    /// State comparison tolerance for floating scalars; exact scalars
    /// always compare literally.
    pub tol: f64,
    /// Keep every state. When false only the start and the final state are
    /// stored; traces and bit lengths are always kept.
    pub keep_states: bool,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            max_steps: 1000,
            tol: 1e-9,
            keep_states: true,
        }
    }
}

/// Why iteration stopped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    MaxSteps,
    /// `states[start] == states[start + period]`, `period` minimal.
    Periodic { period: usize, start: usize, residual: f64 },
    /// `states[start + period]` is `states[start]` translated by lattice
    /// vectors of the two grids; drifts are in grid-local integer units.
    TranslationPeriodic {
        period: usize,
        start: usize,
        drift_a: [i64; 2],
        drift_b: [i64; 2],
        residual: f64,
    },
    VertexHit { step: usize, factor: Factor, point: [f64; 2] },
    Escaped { step: usize, factor: Factor },
}

impl Termination {
    pub fn is_singular(&self) -> bool {
        matches!(self, Termination::VertexHit { .. } | Termination::Escaped { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl BoundingBox {
    pub fn of(points: &[[f64; 2]]) -> Option<Self> {
        let first = points.first()?;
        let mut bb = BoundingBox { min: *first, max: *first };
        for p in points {
            bb.include(*p);
        }
        Some(bb)
    }

    pub fn include(&mut self, p: [f64; 2]) {
        for k in 0..2 {
            self.min[k] = self.min[k].min(p[k]);
            self.max[k] = self.max[k].max(p[k]);
        }
    }

    pub fn union(&self, o: &Self) -> Self {
        let mut bb = *self;
        bb.include(o.min);
        bb.include(o.max);
        bb
    }

    pub fn diameter(&self) -> f64 {
        (self.max[0] - self.min[0]).hypot(self.max[1] - self.min[1])
    }
}

/// A finite orbit segment with diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct OrbitRecord<S> {
    /// Every visited state starting with the initial one (or only the first
    /// and last when states were not kept).
    pub states: Vec<PairState<S>>,
    /// Number of steps taken.
    pub steps: usize,
    pub termination: Termination,
    /// Largest coordinate bit length of each visited state.
    pub bit_lengths: Vec<u64>,
    /// Floating approximations of the `a` and `b` points of each state.
    pub trace_a: Vec<[f64; 2]>,
    pub trace_b: Vec<[f64; 2]>,
}

impl<S: Scalar> OrbitRecord<S> {
    pub fn start(&self) -> &PairState<S> {
        &self.states[0]
    }

    pub fn last(&self) -> &PairState<S> {
        self.states.last().expect("orbit has a start state")
    }

    pub fn bbox_a(&self) -> BoundingBox {
        BoundingBox::of(&self.trace_a).expect("orbit has a start state")
    }

    pub fn bbox_b(&self) -> BoundingBox {
        BoundingBox::of(&self.trace_b).expect("orbit has a start state")
    }

    pub fn max_bit_length(&self) -> u64 {
        self.bit_lengths.iter().copied().max().unwrap_or(0)
    }

    pub fn has_all_states(&self) -> bool {
        self.states.len() == self.steps + 1
    }

    /// Re-applies the map to every stored state and checks each successor.
    pub fn replay<TA, TB>(&self, a: &TA, b: &TB, tol: f64) -> Result<bool, DynamicsError>
    where
        TA: Tiling<S> + ?Sized,
        TB: Tiling<S> + ?Sized,
    {
        if !self.has_all_states() {
            return Ok(false);
        }
        for w in self.states.windows(2) {
            let next = step(a, b, &w[0])?;
            if !next.close(&w[1], tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

struct Reduced<S> {
    state: PairState<S>,
    offset_a: [i64; 2],
    offset_b: [i64; 2],
}

fn reduce<S, TA, TB>(a: &TA, b: &TB, s: &PairState<S>) -> Reduced<S>
where
    S: Scalar,
    TA: Tiling<S> + ?Sized,
    TB: Tiling<S> + ?Sized,
{
    let (ra, offset_a) = a.reduce(&s.a);
    let (rb, offset_b) = b.reduce(&s.b);
    Reduced {
        state: PairState::new(ra, rb),
        offset_a,
        offset_b,
    }
}

fn residual<S: Scalar>(x: &PairState<S>, y: &PairState<S>) -> f64 {
    let d = |p: &Particle<S>, q: &Particle<S>| (&p.point - &q.point).to_f64().norm();
    d(&x.a, &y.a).max(d(&x.b, &y.b))
}

fn point(v: &Vec2<impl Scalar>) -> [f64; 2] {
    let f = v.to_f64();
    [f.x, f.y]
}

/// Iterates the map from `start` until a repetition (exact state or lattice
/// translate), a singular step, or `max_steps`.
///
/// Repetitions are found with Brent's cycle search on states reduced modulo
/// the tilings' translation lattices, so memory stays constant and the
/// reported period is minimal.
pub fn run_orbit<S, TA, TB>(
    a: &TA,
    b: &TB,
    start: PairState<S>,
    opts: &OrbitOptions,
) -> Result<OrbitRecord<S>, DynamicsError>
where
    S: Scalar,
    TA: Tiling<S> + ?Sized,
    TB: Tiling<S> + ?Sized,
{
    start.validate(a, b, opts.tol)?;

    let mut rec = OrbitRecord {
        bit_lengths: vec![start.bit_length()],
        trace_a: vec![point(&start.a.point)],
        trace_b: vec![point(&start.b.point)],
        states: vec![start.clone()],
        steps: 0,
        termination: Termination::MaxSteps,
    };

    let mut checkpoint = reduce(a, b, &start);
    let mut checkpoint_index = 0usize;
    let mut power = 1usize;
    let mut lam = 0usize;
    let mut current = start;

    for i in 1..=opts.max_steps {
        let next = match step(a, b, &current) {
            Ok(s) => s,
            Err(DynamicsError::VertexHit { factor, point }) => {
                rec.termination = Termination::VertexHit {
                    step: i,
                    factor,
                    point: [point.x, point.y],
                };
                break;
            }
            Err(DynamicsError::Escaped(factor)) => {
                rec.termination = Termination::Escaped { step: i, factor };
                break;
            }
            Err(e) => return Err(e),
        };
        rec.steps = i;
        rec.bit_lengths.push(next.bit_length());
        rec.trace_a.push(point(&next.a.point));
        rec.trace_b.push(point(&next.b.point));
        if opts.keep_states {
            rec.states.push(next.clone());
        }

        let r = reduce(a, b, &next);
        lam += 1;
        if r.state.close(&checkpoint.state, opts.tol) {
            let drift_a = [
                r.offset_a[0] - checkpoint.offset_a[0],
                r.offset_a[1] - checkpoint.offset_a[1],
            ];
            let drift_b = [
                r.offset_b[0] - checkpoint.offset_b[0],
                r.offset_b[1] - checkpoint.offset_b[1],
            ];
            let res = residual(&r.state, &checkpoint.state);
            rec.termination = if drift_a == [0, 0] && drift_b == [0, 0] {
                Termination::Periodic {
                    period: lam,
                    start: checkpoint_index,
                    residual: res,
                }
            } else {
                Termination::TranslationPeriodic {
                    period: lam,
                    start: checkpoint_index,
                    drift_a,
                    drift_b,
                    residual: res,
                }
            };
            current = next;
            break;
        }
        if lam == power {
            checkpoint = r;
            checkpoint_index = i;
            power *= 2;
            lam = 0;
        }
        current = next;
    }

    if !opts.keep_states && rec.steps > 0 {
        rec.states.push(current);
    }
    Ok(rec)
}
