use serde::{Deserialize, Serialize};

use super::regression;
use crate::error::{Error, Result};

/// Normalized autocorrelation at lags `0..=max_lag`, lag 0 equal to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfCurve {
    pub sample_period: f64,
    /// Lag of each point in seconds.
    pub lags: Vec<f64>,
    pub values: Vec<f64>,
}

/// Exponential decay A(τ) = A₀·exp(-τ/τ_ac) fitted to an [`AcfCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcfFit {
    pub amplitude: f64,
    /// τ_ac in seconds; for a telegraph signal with toggle rate R this is 1/(2R).
    pub autocorrelation_time: f64,
    pub autocorrelation_time_se: f64,
    /// First and last lag (seconds) used in the fit.
    pub window: (f64, f64),
    pub points: usize,
}

pub const DEFAULT_DECAY_FLOOR: f64 = 0.05;

/// Biased estimator Σ(x_t - x̄)(x_{t+k} - x̄) / Σ(x_t - x̄)².
pub fn autocorrelation(trace: &[f64], sample_period: f64, max_lag: usize) -> Result<AcfCurve> {
    if max_lag < 1 {
        return Err(Error::Parameter("max_lag must be >= 1".into()));
    }
    if trace.len() < 2 * max_lag {
        return Err(Error::Parameter(format!(
            "trace of {} points is too short for max_lag {max_lag}",
            trace.len()
        )));
    }
    if !sample_period.is_finite() || sample_period <= 0.0 {
        return Err(Error::Parameter(format!("sample period must be > 0, got {sample_period}")));
    }
    let mean = trace.iter().sum::<f64>() / trace.len() as f64;
    let centered: Vec<f64> = trace.iter().map(|x| x - mean).collect();
    let c0: f64 = centered.iter().map(|x| x * x).sum();
    if c0 <= 0.0 {
        return Err(Error::Degenerate("trace has zero variance".into()));
    }
    let mut values = Vec::with_capacity(max_lag + 1);
    values.push(1.0);
    for k in 1..=max_lag {
        let ck: f64 = centered.iter().zip(&centered[k..]).map(|(a, b)| a * b).sum();
        values.push(ck / c0);
    }
    let lags = (0..=max_lag).map(|k| k as f64 * sample_period).collect();
    Ok(AcfCurve {
        sample_period,
        lags,
        values,
    })
}

pub fn fit_acf_decay(curve: &AcfCurve) -> Result<AcfFit> {
    fit_acf_decay_with_floor(curve, DEFAULT_DECAY_FLOOR)
}

/// Line fit of ln Â against lag over the leading run of lags with
/// Â > `floor`. The run stops at the first value at or below the floor so
/// that noise excursions in the tail never enter the fit.
pub fn fit_acf_decay_with_floor(curve: &AcfCurve, floor: f64) -> Result<AcfFit> {
    let used = curve.values.iter().take_while(|&&v| v > floor).count();
    if used < 5 {
        return Err(Error::Fit(format!(
            "only {used} leading lags lie above the decay floor {floor}; need 5"
        )));
    }
    let x = &curve.lags[..used];
    let y: Vec<f64> = curve.values[..used].iter().map(|v| v.ln()).collect();
    let line = regression::ordinary(x, &y).ok_or_else(|| Error::Fit("regression is singular".into()))?;
    if line.slope >= 0.0 {
        return Err(Error::Fit("autocorrelation does not decay".into()));
    }
    Ok(AcfFit {
        amplitude: line.intercept.exp(),
        autocorrelation_time: -1.0 / line.slope,
        autocorrelation_time_se: line.slope_se / (line.slope * line.slope),
        window: (x[0], x[used - 1]),
        points: used,
    })
}
