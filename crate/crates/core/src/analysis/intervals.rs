use serde::{Deserialize, Serialize};

use super::regression;
use crate::error::{Error, Result};
use crate::model::TransitionSequence;

/// Histogram of the gaps between consecutive transitions. Bin `k` covers
/// `[k·bin_width, (k+1)·bin_width)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalHistogram {
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub intervals: u64,
    pub mean_interval: f64,
    pub min_interval: f64,
}

impl IntervalHistogram {
    pub fn bin_center(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.bin_width
    }
}

/// p(T) = p₀·exp(-T/T₀) fitted to the histogram tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalFit {
    /// Extrapolated counts per bin at T = 0.
    pub amplitude: f64,
    pub mean_interval: f64,
    pub mean_interval_se: f64,
    /// Centers of the first and last bin used.
    pub window: (f64, f64),
    pub bins: usize,
}

pub const DEFAULT_FIT_START: f64 = 35e-9;

pub fn interval_histogram(seq: &TransitionSequence, bin_width: f64) -> Result<IntervalHistogram> {
    if !bin_width.is_finite() || bin_width <= 0.0 {
        return Err(Error::Parameter(format!("bin width must be > 0, got {bin_width}")));
    }
    let times = seq.transition_times();
    if times.len() < 2 {
        return Err(Error::Degenerate(format!(
            "need at least 2 transitions, got {}",
            times.len()
        )));
    }
    let mut counts: Vec<u64> = Vec::new();
    let mut min_interval = f64::INFINITY;
    for w in times.windows(2) {
        let gap = w[1] - w[0];
        min_interval = min_interval.min(gap);
        let bin = (gap / bin_width) as usize;
        if bin >= counts.len() {
            counts.resize(bin + 1, 0);
        }
        counts[bin] += 1;
    }
    let intervals = (times.len() - 1) as u64;
    Ok(IntervalHistogram {
        bin_width,
        counts,
        intervals,
        mean_interval: (times[times.len() - 1] - times[0]) / intervals as f64,
        min_interval,
    })
}

/// Fit of ln(count) against bin center for bins centered at or after
/// `t_min` with a nonzero count. Each bin is weighted by its count (the
/// inverse Poisson variance of its logarithm), so sparse tail bins carry
/// little weight.
pub fn fit_interval_exponential(hist: &IntervalHistogram, t_min: f64) -> Result<IntervalFit> {
    let (mut x, mut y, mut w) = (Vec::new(), Vec::new(), Vec::new());
    for (k, &c) in hist.counts.iter().enumerate() {
        let center = hist.bin_center(k);
        if center >= t_min && c > 0 {
            x.push(center);
            y.push((c as f64).ln());
            w.push(c as f64);
        }
    }
    if x.len() < 5 {
        return Err(Error::Fit(format!(
            "{} nonzero bins at or above {t_min} s; need 5",
            x.len()
        )));
    }
    let line = regression::weighted(&x, &y, &w).ok_or_else(|| Error::Fit("regression is singular".into()))?;
    if line.slope >= 0.0 {
        return Err(Error::Fit("interval distribution does not decay".into()));
    }
    Ok(IntervalFit {
        amplitude: line.intercept.exp(),
        mean_interval: -1.0 / line.slope,
        mean_interval_se: line.slope_se / (line.slope * line.slope),
        window: (x[0], x[x.len() - 1]),
        bins: x.len(),
    })
}
