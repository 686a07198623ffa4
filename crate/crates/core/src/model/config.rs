use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the simulated device.
///
/// All times are in seconds and all rates in events per second. The
/// defaults describe a balanced splitter at the 26 MHz toggle-rate
/// operating point with a 75 ns pipeline latency. Set `min_dwell` to 3 ns
/// to model the rise/fall limit of the output driver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    /// Total detection rate over both detectors.
    pub detection_rate: f64,
    /// Probability that a detection lands in detector D1.
    pub split_probability: f64,
    /// Non-paralyzable dead time applied per detector.
    pub dead_time: f64,
    /// Minimum time between two output transitions.
    pub min_dwell: f64,
    /// Constant latency between a detection and its effect on the output.
    pub internal_delay: f64,
    /// Seed of the pseudo-random driver.
    pub seed: u64,
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self {
            detection_rate: 52e6,
            split_probability: 0.5,
            dead_time: 0.0,
            min_dwell: 0.0,
            internal_delay: 75e-9,
            seed: 1,
        }
    }
}

impl SourceConfig {
    /// Balanced device with the given detection rate and seed and no
    /// dead time, dwell limit or delay.
    pub fn ideal(detection_rate: f64, split_probability: f64, seed: u64) -> Self {
        Self {
            detection_rate,
            split_probability,
            dead_time: 0.0,
            min_dwell: 0.0,
            internal_delay: 0.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.detection_rate.is_finite() || self.detection_rate <= 0.0 {
            return Err(Error::Config(format!(
                "detection rate must be finite and > 0, got {}",
                self.detection_rate
            )));
        }
        if !(0.0..=1.0).contains(&self.split_probability) {
            return Err(Error::Config(format!(
                "split probability must lie in [0, 1], got {}",
                self.split_probability
            )));
        }
        check_time("dead time", self.dead_time)?;
        check_time("minimum dwell", self.min_dwell)?;
        check_time("internal delay", self.internal_delay)?;
        Ok(())
    }
}

pub(crate) fn check_time(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::Config(format!(
            "{name} must be finite and >= 0, got {value}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        SourceConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let base = SourceConfig::default();
        let bad = [
            SourceConfig { detection_rate: 0.0, ..base },
            SourceConfig { detection_rate: f64::NAN, ..base },
            SourceConfig { detection_rate: f64::INFINITY, ..base },
            SourceConfig { split_probability: -0.1, ..base },
            SourceConfig { split_probability: 1.5, ..base },
            SourceConfig { dead_time: -1e-9, ..base },
            SourceConfig { min_dwell: f64::NAN, ..base },
            SourceConfig { internal_delay: f64::INFINITY, ..base },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
        }
    }

    #[test]
    fn accepts_boundary_split() {
        for p in [0.0, 1.0] {
            SourceConfig::ideal(1e6, p, 0).validate().unwrap();
        }
    }
}
