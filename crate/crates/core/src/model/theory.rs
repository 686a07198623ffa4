use serde::{Deserialize, Serialize};

use super::signal::Variant;
use crate::error::{Error, Result};

/// Reference quantities of an ideal device (no dead time, no dwell limit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalRates {
    /// Mean output transitions per second, R.
    pub toggle_rate: f64,
    /// 1/(2R); infinite when R = 0.
    pub autocorrelation_time: f64,
    /// 1/R; infinite when R = 0.
    pub mean_interval: f64,
}

impl TheoreticalRates {
    fn from_rate(toggle_rate: f64) -> Self {
        let (autocorrelation_time, mean_interval) = if toggle_rate > 0.0 {
            (1.0 / (2.0 * toggle_rate), 1.0 / toggle_rate)
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
        Self {
            toggle_rate,
            autocorrelation_time,
            mean_interval,
        }
    }
}

fn check(rate: f64, split: f64) -> Result<()> {
    if !rate.is_finite() || rate <= 0.0 {
        return Err(Error::Config(format!("detection rate must be > 0, got {rate}")));
    }
    if !(0.0..=1.0).contains(&split) {
        return Err(Error::Config(format!("split probability must lie in [0, 1], got {split}")));
    }
    Ok(())
}

/// Flip-flop device: from state 0 the wait for a D2 click is exponential with
/// rate λ(1-p), from state 1 the wait for a D1 click has rate λp, hence
/// R = 2λp(1-p).
pub fn theoretical_rates(detection_rate: f64, split_probability: f64) -> Result<TheoreticalRates> {
    check(detection_rate, split_probability)?;
    let p = split_probability;
    Ok(TheoreticalRates::from_rate(2.0 * detection_rate * p * (1.0 - p)))
}

pub fn theoretical_rates_for(variant: Variant, detection_rate: f64, split_probability: f64) -> Result<TheoreticalRates> {
    match variant {
        Variant::Toggle => theoretical_rates(detection_rate, split_probability),
        Variant::DividerXor => {
            check(detection_rate, split_probability)?;
            Ok(TheoreticalRates::from_rate(detection_rate))
        }
    }
}

/// Mean toggle rate when clicks closer than `min_dwell` to the previous
/// output edge are discarded (no dead time).
///
/// After an edge the next one needs a switching click after the dwell
/// window, so each dwell is `min_dwell` plus an exponential wait: the
/// flip-flop gives R = 2/(2d + 1/a + 1/b) with a = λ(1-p), b = λp, and the
/// divider/XOR output R = 1/(d + 1/λ).
pub fn dwell_limited_toggle_rate(variant: Variant, detection_rate: f64, split_probability: f64, min_dwell: f64) -> Result<f64> {
    check(detection_rate, split_probability)?;
    let d = min_dwell;
    Ok(match variant {
        Variant::DividerXor => 1.0 / (d + 1.0 / detection_rate),
        Variant::Toggle => {
            let a = detection_rate * (1.0 - split_probability);
            let b = detection_rate * split_probability;
            if a <= 0.0 || b <= 0.0 {
                0.0
            } else {
                2.0 / (2.0 * d + 1.0 / a + 1.0 / b)
            }
        }
    })
}

/// Asymptotic standard deviation of the number of output transitions in a
/// window of length `duration`.
///
/// The flip-flop output is an alternating renewal process whose dwell times
/// are exponential with rates a = λ(1-p) and b = λp. With cycle mean
/// μ = 1/a + 1/b and variance σ² = 1/a² + 1/b², the transition count has
/// variance ≈ 4·duration·σ²/μ³. The divider/XOR output is Poisson with rate λ.
pub fn transition_count_std_dev(variant: Variant, detection_rate: f64, split_probability: f64, duration: f64) -> f64 {
    match variant {
        Variant::DividerXor => (detection_rate * duration).sqrt(),
        Variant::Toggle => {
            let a = detection_rate * (1.0 - split_probability);
            let b = detection_rate * split_probability;
            if a <= 0.0 || b <= 0.0 {
                return 0.0;
            }
            let mu = 1.0 / a + 1.0 / b;
            let var = 1.0 / (a * a) + 1.0 / (b * b);
            (4.0 * duration * var / mu.powi(3)).sqrt()
        }
    }
}
