//! Seeded random walks of the mapping class group on a level set.
//!
//! The walk keeps the reduced word it has travelled as a stack of
//! `(move, previous point)`. Drawing the inverse of the top move pops the
//! stack and restores the earlier point exactly, so backtracking never
//! accumulates rounding.
//!
//! Once a coordinate on the current word exceeds the escape radius the
//! point is marked escaped and no longer computed: descending from large
//! values by `xy − z` cancels catastrophically in floating point. Escaped
//! points are excluded from drift checks and never count as returns; popping
//! back below the radius restores the stored point.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{classify_real_point, fourholed_residual_raw, fourholed_term_scale, kappa_poly, kappa_term_scale};
use crate::error::{Error, Result};
use crate::model::{re, BoundaryData, CharacterClass, Scalar, SurfaceModel, TracePoint};
use crate::moves::{apply_kind_scalar, MoveKind};

use super::equidistribution::{Histogram2D, HistogramSpec};
use super::regime::{classify_level_set_regime, Regime};

pub const DEFAULT_DRIFT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_EPSILON: f64 = 0.1;
/// Below this modulus products of coordinates stay exact for integer points.
pub const DEFAULT_ESCAPE_RADIUS: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveSampler {
    /// Uniform over the four twists `TwistX±`, `TwistY±`.
    Twists,
    /// Uniform over twists, Vieta involutions and (one-holed torus only)
    /// sign flips; runs using it are marked as extended-group runs.
    Extended,
}

impl MoveSampler {
    pub fn moves(self, model: SurfaceModel) -> Vec<MoveKind> {
        match self {
            MoveSampler::Twists => MoveKind::TWISTS.to_vec(),
            MoveSampler::Extended => MoveKind::ALL
                .into_iter()
                .filter(|k| k.supported_on(model))
                .collect(),
        }
    }

    pub fn is_extended(self) -> bool {
        self == MoveSampler::Extended
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub seed: u64,
    pub steps: u64,
    pub move_sampler: MoveSampler,
    pub record_every: u64,
    /// Relative κ drift that aborts the run.
    pub tolerance: f64,
    /// Sup-norm radius for the recurrence statistic.
    pub epsilon: f64,
    /// Accumulate every step into this histogram.
    pub histogram: Option<HistogramSpec>,
    /// Boundary traces for four-holed sphere walks.
    pub boundary: Option<BoundaryData>,
    /// Undo a move exactly when its inverse is drawn next.
    pub exact_backtrack: bool,
    pub escape_radius: f64,
}

impl OrbitConfig {
    pub fn new(seed: u64, steps: u64) -> Self {
        Self {
            seed,
            steps,
            move_sampler: MoveSampler::Twists,
            record_every: 1,
            tolerance: DEFAULT_DRIFT_TOLERANCE,
            epsilon: DEFAULT_EPSILON,
            histogram: None,
            boundary: None,
            exact_backtrack: true,
            escape_radius: DEFAULT_ESCAPE_RADIUS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidConfig("steps must be positive".into()));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidConfig("record_every must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        if !(self.escape_radius > 0.0) {
            return Err(Error::InvalidConfig("escape_radius must be positive".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        if let Some(h) = &self.histogram {
            if h.bins == 0 || h.hi[0] <= h.lo[0] || h.hi[1] <= h.lo[1] {
                return Err(Error::InvalidConfig("empty histogram".into()));
            }
        }
        Ok(())
    }
}

/// The sequence of moves drawn by a walk with this configuration.
pub fn move_stream(cfg: &OrbitConfig, model: SurfaceModel) -> impl Iterator<Item = MoveKind> {
    let moves = cfg.move_sampler.moves(model);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.steps).map(move |_| moves[rng.gen_range(0..moves.len())])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub model: SurfaceModel,
    pub seed: u64,
    pub steps: u64,
    pub extended_group: bool,
    pub start: TracePoint,
    /// Level-set invariant at the start (κ for the one-holed torus).
    pub kappa0: Scalar,
    /// Largest `|κ − κ₀|` relative to the monomial scale of κ.
    pub kappa_drift: f64,
    pub kappa_drift_abs: f64,
    /// Recorded samples beyond the escape radius.
    pub escaped_samples: u64,
    /// Steps that ended beyond the escape radius.
    pub escaped_steps: u64,
    pub classification_counts: BTreeMap<CharacterClass, u64>,
    pub classification_constant: bool,
    pub recurrence_hits: u64,
    /// Fraction of recorded samples after the start within ε of it.
    pub recurrence_stat: f64,
    pub epsilon: f64,
    pub max_word_length: usize,
    pub final_word_length: usize,
    pub samples: Vec<TracePoint>,
    pub bins: Option<Histogram2D>,
}

struct Invariant {
    model: SurfaceModel,
    bd: Option<[Scalar; 4]>,
    bd_data: Option<BoundaryData>,
}

impl Invariant {
    fn value(&self, p: [Scalar; 3]) -> Scalar {
        match self.bd {
            None => kappa_poly(&p[0], &p[1], &p[2]),
            Some([a, b, c, d]) => fourholed_residual_raw(p[0], p[1], p[2], a, b, c, d),
        }
    }

    fn scale(&self, p: [Scalar; 3]) -> f64 {
        match &self.bd_data {
            None => kappa_term_scale(p[0], p[1], p[2]),
            Some(bd) => fourholed_term_scale(&TracePoint::fourholed(p[0], p[1], p[2]), bd),
        }
    }

    fn point(&self, p: [Scalar; 3]) -> TracePoint {
        TracePoint {
            model: self.model,
            values: p.to_vec(),
            sector: None,
        }
    }
}

fn finite(p: &[Scalar; 3]) -> bool {
    p.iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

fn beyond(p: &[Scalar; 3], radius: f64) -> bool {
    !finite(p) || p.iter().any(|v| v.norm() > radius)
}

fn sup_dist(a: &[Scalar; 3], b: &[Scalar; 3]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
}

/// Runs a seeded random walk of generator moves from `start`.
pub fn random_walk_orbit(start: &TracePoint, cfg: &OrbitConfig) -> Result<OrbitReport> {
    cfg.validate()?;
    let model = start.model;
    let inv = match model {
        SurfaceModel::OneHoledTorus => Invariant {
            model,
            bd: None,
            bd_data: None,
        },
        SurfaceModel::FourHoledSphere => {
            let bd = cfg.boundary.clone().ok_or_else(|| {
                Error::InvalidConfig("four-holed sphere walks need boundary traces".into())
            })?;
            SurfaceModel::FourHoledSphere.expect(bd.model)?;
            Invariant {
                model,
                bd: Some([bd.traces[0], bd.traces[1], bd.traces[2], bd.traces[3]]),
                bd_data: Some(bd),
            }
        }
        other => {
            return Err(Error::UnsupportedMove {
                kind: MoveKind::TwistX,
                model: other,
            })
        }
    };
    let p0 = start.triple();
    if !finite(&p0) {
        return Err(Error::InvalidConfig("start point is not finite".into()));
    }
    let k0 = inv.value(p0);
    let classify = model == SurfaceModel::OneHoledTorus;

    let mut hist = cfg.histogram.clone().map(Histogram2D::new);
    let batches = cfg.histogram.as_ref().map_or(1, |h| h.batches.max(1)) as u64;

    let mut classes: BTreeMap<CharacterClass, u64> = BTreeMap::new();
    let note_class = |p: &TracePoint, classes: &mut BTreeMap<CharacterClass, u64>| -> Result<()> {
        if classify {
            *classes.entry(classify_real_point(p)?).or_insert(0) += 1;
        }
        Ok(())
    };
    note_class(start, &mut classes)?;

    let mut samples = vec![start.clone()];
    let mut stack: Vec<(MoveKind, [Scalar; 3], bool)> = Vec::new();
    let mut cur = p0;
    let mut out = beyond(&p0, cfg.escape_radius);
    let mut drift: f64 = 0.0;
    let mut drift_abs: f64 = 0.0;
    let mut escaped_samples = 0u64;
    let mut escaped_steps = 0u64;
    let mut hits = 0u64;
    let mut recorded = 0u64;
    let mut max_len = 0usize;

    for (i, kind) in move_stream(cfg, model).enumerate() {
        let step = i as u64 + 1;
        let undo = cfg.exact_backtrack && stack.last().is_some_and(|(k, _, _)| *k == kind.inverse());
        if undo {
            if let Some((_, p, o)) = stack.pop() {
                cur = p;
                out = o;
            }
        } else {
            let next = if out {
                cur
            } else {
                apply_kind_scalar(model, kind, cur, inv.bd.as_ref())?
            };
            if cfg.exact_backtrack {
                stack.push((kind, cur, out));
                max_len = max_len.max(stack.len());
            }
            out = out || beyond(&next, cfg.escape_radius);
            cur = next;
        }

        if out {
            escaped_steps += 1;
        } else {
            let abs = (inv.value(cur) - k0).norm();
            let rel = abs / inv.scale(cur).max(1.0);
            drift_abs = drift_abs.max(abs);
            drift = drift.max(rel);
            if rel > cfg.tolerance {
                return Err(Error::NumericalDrift {
                    step,
                    drift: rel,
                    tolerance: cfg.tolerance,
                });
            }
        }

        if let Some(h) = hist.as_mut() {
            let batch = ((step - 1) * batches / cfg.steps) as usize;
            if out {
                h.record_outside(batch);
            } else {
                h.record(&cur, batch);
            }
        }

        if step.is_multiple_of(cfg.record_every) {
            recorded += 1;
            if out {
                escaped_samples += 1;
                samples.push(inv.point([Scalar::new(f64::NAN, 0.0); 3]));
            } else {
                let p = inv.point(cur);
                note_class(&p, &mut classes)?;
                if sup_dist(&cur, &p0) < cfg.epsilon {
                    hits += 1;
                }
                samples.push(p);
            }
        }
    }

    let classification_constant = classes.len() <= 1;
    Ok(OrbitReport {
        model,
        seed: cfg.seed,
        steps: cfg.steps,
        extended_group: cfg.move_sampler.is_extended(),
        start: start.clone(),
        kappa0: k0,
        kappa_drift: drift,
        kappa_drift_abs: drift_abs,
        escaped_samples,
        escaped_steps,
        classification_counts: classes,
        classification_constant,
        recurrence_hits: hits,
        recurrence_stat: if recorded == 0 { 0.0 } else { hits as f64 / recorded as f64 },
        epsilon: cfg.epsilon,
        max_word_length: max_len,
        final_word_length: stack.len(),
        samples,
        bins: hist,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    pub statistic: f64,
    pub hits: u64,
    pub samples: u64,
    pub epsilon: f64,
    pub regime: Regime,
}

/// Fraction of recorded samples within `epsilon` of a real start, alongside
/// the regime predicted for its level.
pub fn recurrence_probe(start: &TracePoint, cfg: &OrbitConfig, epsilon: f64) -> Result<RecurrenceReport> {
    if !start.is_real() {
        return Err(Error::NotReal);
    }
    let mut cfg = cfg.clone();
    cfg.epsilon = epsilon;
    let report = random_walk_orbit(start, &cfg)?;
    let t = crate::algebra::kappa(start).map(|k| k.re).unwrap_or(f64::NAN);
    Ok(RecurrenceReport {
        statistic: report.recurrence_stat,
        hits: report.recurrence_hits,
        samples: report.samples.len() as u64 - 1,
        epsilon,
        regime: classify_level_set_regime(t),
    })
}

/// A uniformly drawn point on one of the four Fricke discs at level `t < −2`,
/// with `x, y ∈ [3, 8]` and `z` the larger root.
pub fn random_fricke_point<R: Rng + ?Sized>(rng: &mut R, t: f64) -> Result<TracePoint> {
    if t >= -2.0 {
        return Err(Error::OutsideFricke("level must be below -2"));
    }
    loop {
        let x: f64 = rng.gen_range(3.0..8.0);
        let y: f64 = rng.gen_range(3.0..8.0);
        let disc = x * x * y * y - 4.0 * (x * x + y * y - 2.0 - t);
        if disc >= 0.0 {
            return Ok(TracePoint::oneholed_real(x, y, (x * y + disc.sqrt()) / 2.0));
        }
    }
}

/// A point on the SU(2) component of `κ = t` for `−2 < t < 2`.
pub fn random_su2_point<R: Rng + ?Sized>(rng: &mut R, t: f64) -> Result<TracePoint> {
    if !(t > -2.0 && t < 2.0) {
        return Err(Error::LevelOutOfRange(t));
    }
    let r = (t + 2.0).sqrt();
    loop {
        let x: f64 = rng.gen_range(-r..r);
        let c = 4.0 * (2.0 + t - x * x);
        let s2 = 4.0 - x * x;
        let ymax = (c / s2).sqrt();
        let y: f64 = rng.gen_range(-ymax..=ymax);
        let d = c - s2 * y * y;
        if d < 0.0 {
            continue;
        }
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let z = (x * y + sign * d.sqrt()) / 2.0;
        return Ok(TracePoint::oneholed(re(x), re(y), re(z)));
    }
}
