//! Binned comparison of orbit samples against the leafwise symplectic measure
//! on the compact SU(2) component of a one-holed torus level set.
//!
//! In the `(x, y)` chart the measure has density `1/|2z − xy|` summed over
//! both roots `z`, i.e. `2/√D` with `D = x²y² − 4(x² + y² − 2 − t)`. For a
//! fixed `x` the `y`-integral is an arcsine, so bin masses reduce to a
//! one-dimensional quadrature.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Scalar, REAL_TOL};

use super::walk::OrbitReport;

/// Minimum expected count for a bin to enter the statistics.
pub const DEFAULT_MIN_EXPECTED: f64 = 100.0;
pub const DEFAULT_BATCHES: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    /// Coordinate indices projected onto.
    pub chart: (usize, usize),
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub bins: usize,
    /// Number of consecutive batches tracked for Monte Carlo error estimates.
    pub batches: usize,
}

impl HistogramSpec {
    /// The `(x, y)` bounding box `[−√(t+2), √(t+2)]²` of the SU(2) component.
    pub fn su2_box(t: f64, bins: usize) -> Result<Self> {
        check_level(t)?;
        let r = (t + 2.0).sqrt();
        Ok(Self {
            chart: (0, 1),
            lo: [-r, -r],
            hi: [r, r],
            bins,
            batches: DEFAULT_BATCHES,
        })
    }

    pub fn cell(&self, v: &[Scalar]) -> Option<usize> {
        let (i, j) = self.chart;
        let a = v[i].re;
        let b = v[j].re;
        let ia = axis_index(a, self.lo[0], self.hi[0], self.bins)?;
        let ib = axis_index(b, self.lo[1], self.hi[1], self.bins)?;
        Some(ia * self.bins + ib)
    }
}

fn axis_index(v: f64, lo: f64, hi: f64, n: usize) -> Option<usize> {
    if !v.is_finite() || v < lo || v > hi {
        return None;
    }
    let k = ((v - lo) / (hi - lo) * n as f64) as usize;
    Some(k.min(n - 1))
}

fn check_level(t: f64) -> Result<()> {
    if t > -2.0 && t < 2.0 {
        Ok(())
    } else {
        Err(Error::LevelOutOfRange(t))
    }
}

/// Counts in a 2D chart, row-major with the first chart axis as the row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram2D {
    pub spec: HistogramSpec,
    pub counts: Vec<u64>,
    pub outside: u64,
    pub total: u64,
    /// Per-batch counts, `batches × bins²`.
    pub batch_counts: Vec<Vec<u64>>,
}

impl Histogram2D {
    pub fn new(spec: HistogramSpec) -> Self {
        let cells = spec.bins * spec.bins;
        Self {
            counts: vec![0; cells],
            outside: 0,
            total: 0,
            batch_counts: vec![vec![0; cells]; spec.batches],
            spec,
        }
    }

    /// Records one point in batch `batch`.
    pub fn record(&mut self, v: &[Scalar], batch: usize) {
        self.total += 1;
        match self.spec.cell(v) {
            Some(c) => {
                self.counts[c] += 1;
                if let Some(b) = self.batch_counts.get_mut(batch) {
                    b[c] += 1;
                }
            }
            None => self.outside += 1,
        }
    }

    /// Records a point known to lie outside every cell.
    pub fn record_outside(&mut self, _batch: usize) {
        self.total += 1;
        self.outside += 1;
    }

    pub fn occupied_cells(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Batch-means variance estimate of each cell's total count.
    pub fn count_variances(&self) -> Vec<f64> {
        let nb = self.batch_counts.len();
        if nb < 2 {
            return vec![f64::NAN; self.counts.len()];
        }
        (0..self.counts.len())
            .map(|c| {
                let xs: Vec<f64> = self.batch_counts.iter().map(|b| b[c] as f64).collect();
                let m = xs.iter().sum::<f64>() / nb as f64;
                let s2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (nb - 1) as f64;
                nb as f64 * s2
            })
            .collect()
    }
}

fn gauss_legendre_5(f: impl Fn(f64) -> f64, a: f64, b: f64, pieces: usize) -> f64 {
    const NODES: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / pieces as f64;
    let mut s = 0.0;
    for k in 0..pieces {
        let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
        let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        for (n, w) in NODES.iter().zip(WEIGHTS) {
            s += w * half * f(mid + half * n);
        }
    }
    s
}

/// Leaf-measure mass of `{x₀ ≤ x ≤ x₁, y₀ ≤ y ≤ y₁}` on the SU(2) component
/// of `κ = t`.
pub fn leaf_mass(t: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let column = |x: f64| {
        let c = 4.0 * (2.0 + t - x * x);
        if c <= 0.0 {
            return 0.0;
        }
        let s = (4.0 - x * x).sqrt();
        let rc = c.sqrt();
        let f = |y: f64| (s * y / rc).clamp(-1.0, 1.0).asin();
        2.0 / s * (f(y1) - f(y0))
    };
    let r = (t + 2.0).sqrt();
    let (a, b) = (x0.max(-r), x1.min(r));
    if a >= b {
        return 0.0;
    }
    gauss_legendre_5(column, a, b, 256)
}

/// Total leaf-measure mass of the SU(2) component of `κ = t`.
pub fn leaf_total_mass(t: f64) -> f64 {
    4.0 * PI * ((t + 2.0).sqrt() / 2.0).asin()
}

/// Probability of each cell of `spec` under the normalized leaf measure.
pub fn expected_probabilities(t: f64, spec: &HistogramSpec) -> Result<Vec<f64>> {
    check_level(t)?;
    if spec.chart != (0, 1) {
        return Err(Error::InvalidConfig("leaf masses are tabulated in the (x, y) chart".into()));
    }
    let n = spec.bins;
    let dx = (spec.hi[0] - spec.lo[0]) / n as f64;
    let dy = (spec.hi[1] - spec.lo[1]) / n as f64;
    let total = leaf_total_mass(t);
    let mut p = Vec::with_capacity(n * n);
    for i in 0..n {
        let (x0, x1) = (spec.lo[0] + i as f64 * dx, spec.lo[0] + (i + 1) as f64 * dx);
        for j in 0..n {
            let (y0, y1) = (spec.lo[1] + j as f64 * dy, spec.lo[1] + (j + 1) as f64 * dy);
            p.push(leaf_mass(t, x0, x1, y0, y1) / total);
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistributionStats {
    pub t: f64,
    pub bins: usize,
    pub total: u64,
    pub outside: u64,
    /// All samples fell in at most one cell.
    pub degenerate: bool,
    pub min_expected: f64,
    pub eligible_bins: usize,
    pub chi_square: f64,
    pub dof: usize,
    pub max_relative_deviation: f64,
}

fn degenerate_stats(t: f64, h: &Histogram2D, min_expected: f64) -> EquidistributionStats {
    EquidistributionStats {
        t,
        bins: h.spec.bins,
        total: h.total,
        outside: h.outside,
        degenerate: true,
        min_expected,
        eligible_bins: 0,
        chi_square: f64::NAN,
        dof: 0,
        max_relative_deviation: f64::NAN,
    }
}

/// Compares a histogram against the leaf measure on bins whose expected
/// count is at least `min_expected`.
pub fn histogram_statistics(h: &Histogram2D, t: f64, min_expected: f64) -> Result<EquidistributionStats> {
    if h.occupied_cells() <= 1 {
        return Ok(degenerate_stats(t, h, min_expected));
    }
    let probs = expected_probabilities(t, &h.spec)?;
    let n = h.total as f64;
    let mut eligible = 0;
    let mut chi = 0.0;
    let mut worst: f64 = 0.0;
    for (obs, p) in h.counts.iter().zip(&probs) {
        let e = n * p;
        if e >= min_expected {
            eligible += 1;
            let d = *obs as f64 - e;
            chi += d * d / e;
            worst = worst.max(d.abs() / e);
        }
    }
    if eligible == 0 {
        return Err(Error::InsufficientSamples {
            threshold: min_expected,
        });
    }
    Ok(EquidistributionStats {
        t,
        bins: h.spec.bins,
        total: h.total,
        outside: h.outside,
        degenerate: false,
        min_expected,
        eligible_bins: eligible,
        chi_square: chi,
        dof: eligible - 1,
        max_relative_deviation: worst,
    })
}

/// Equidistribution statistics for an orbit on the SU(2) component of
/// `κ = t`, using `bins × bins` cells over the component's bounding box.
///
/// Uses the histogram accumulated during the walk when its cells match,
/// otherwise bins the recorded samples.
pub fn equidistribution_test(report: &OrbitReport, t: f64, bins: usize) -> Result<EquidistributionStats> {
    let box_spec = HistogramSpec::su2_box(t, bins).unwrap_or(HistogramSpec {
        chart: (0, 1),
        lo: [-2.0, -2.0],
        hi: [2.0, 2.0],
        bins,
        batches: 0,
    });
    let built;
    let h = match &report.bins {
        Some(h) if h.spec.bins == bins => h,
        _ => {
            let mut h = Histogram2D::new(box_spec.clone());
            for s in report.samples.iter().skip(1) {
                h.record(&s.values, 0);
            }
            built = h;
            &built
        }
    };
    if h.occupied_cells() <= 1 {
        return Ok(degenerate_stats(t, h, DEFAULT_MIN_EXPECTED));
    }
    check_level(t)?;
    if (report.kappa0.re - t).abs() > 1e-6 || report.kappa0.im.abs() > REAL_TOL {
        return Err(Error::InvalidConfig(format!(
            "orbit lies on level {}, not {t}",
            report.kappa0
        )));
    }
    if (h.spec.chart, h.spec.lo, h.spec.hi) != (box_spec.chart, box_spec.lo, box_spec.hi) {
        return Err(Error::InvalidConfig("orbit histogram does not cover the SU(2) box".into()));
    }
    histogram_statistics(h, t, DEFAULT_MIN_EXPECTED)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedAgreement {
    pub eligible_bins: usize,
    /// Root mean square of per-bin `(n₁ − n₂)/σ`.
    pub rms_z: f64,
    pub max_abs_z: f64,
    /// `rms_z ≤ factor`.
    pub agree: bool,
    pub factor: f64,
}

/// Whether two equal-length runs agree cell by cell within `factor` Monte
/// Carlo standard errors, estimated by batch means.
pub fn seed_agreement(
    a: &Histogram2D,
    b: &Histogram2D,
    t: f64,
    min_expected: f64,
    factor: f64,
) -> Result<SeedAgreement> {
    if a.spec != b.spec {
        return Err(Error::InvalidConfig("histograms use different cells".into()));
    }
    let probs = expected_probabilities(t, &a.spec)?;
    let (va, vb) = (a.count_variances(), b.count_variances());
    let n = a.total.min(b.total) as f64;
    let mut zs = Vec::new();
    for c in 0..probs.len() {
        if n * probs[c] < min_expected {
            continue;
        }
        let se = (va[c] + vb[c]).sqrt();
        if !(se > 0.0) {
            continue;
        }
        zs.push((a.counts[c] as f64 - b.counts[c] as f64) / se);
    }
    if zs.is_empty() {
        return Err(Error::InsufficientSamples {
            threshold: min_expected,
        });
    }
    let rms = (zs.iter().map(|z| z * z).sum::<f64>() / zs.len() as f64).sqrt();
    let max = zs.iter().map(|z| z.abs()).fold(0.0, f64::max);
    Ok(SeedAgreement {
        eligible_bins: zs.len(),
        rms_z: rms,
        max_abs_z: max,
        agree: rms <= factor,
        factor,
    })
}
