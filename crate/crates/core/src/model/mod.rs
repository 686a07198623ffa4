//! Detection events and the binary signal synthesized from them.

mod config;
mod detection;
mod signal;
mod theory;

pub use config::SourceConfig;
pub use detection::{generate_detections, DetectionEvent, DetectionGenerator, DetectionStream, Detector};
pub use signal::{
    synthesize_divider_xor_signal, synthesize_toggle_signal, Synthesizer, TransitionSequence, Transitions, Variant,
};
pub use theory::{
    dwell_limited_toggle_rate, theoretical_rates, theoretical_rates_for, transition_count_std_dev, TheoreticalRates,
};

use crate::error::Result;
use crate::sampler::{sample_transitions, BitStream, SamplePlan};

/// A configured generator: source parameters plus output logic.
///
/// Every call starts from the configured seed, so repeated calls with the
/// same arguments give identical results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Device {
    pub config: SourceConfig,
    pub variant: Variant,
    pub initial_state: bool,
}

impl Device {
    pub fn new(config: SourceConfig, variant: Variant, initial_state: bool) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            variant,
            initial_state,
        })
    }

    pub fn detections(&self, duration: f64) -> Result<DetectionGenerator> {
        DetectionGenerator::new(&self.config, duration)
    }

    /// Lazily produced output transition times for detections in
    /// `[0, duration)`.
    pub fn transitions(&self, duration: f64) -> Result<Transitions<DetectionGenerator>> {
        let synth = Synthesizer::new(
            self.variant,
            self.initial_state,
            self.config.min_dwell,
            self.config.internal_delay,
        )?;
        Ok(Transitions::new(self.detections(duration)?, synth))
    }

    /// Full output signal for detections in `[0, duration)`; the signal
    /// itself extends to `duration + internal_delay`.
    pub fn signal(&self, duration: f64) -> Result<TransitionSequence> {
        let times: Vec<f64> = self.transitions(duration)?.collect();
        TransitionSequence::new(self.initial_state, times, duration + self.config.internal_delay)
    }

    /// Samples the output without materializing the transition list, so
    /// long acquisitions run in constant memory.
    pub fn sample(&self, plan: &SamplePlan) -> Result<BitStream> {
        plan.validate()?;
        let last = plan.last_instant().unwrap_or(0.0);
        let detect_for = (last - self.config.internal_delay).max(0.0);
        let duration = (detect_for + self.config.internal_delay).max(last);
        let mut bits = sample_transitions(self.initial_state, self.transitions(detect_for)?, duration, plan)?;
        bits.meta.period_s = Some(plan.period);
        bits.meta.seed = Some(self.config.seed);
        bits.meta.origin = format!(
            "simulated {} device: rate={} split={} dead_time={} min_dwell={} delay={}",
            self.variant,
            self.config.detection_rate,
            self.config.split_probability,
            self.config.dead_time,
            self.config.min_dwell,
            self.config.internal_delay
        );
        Ok(bits)
    }
}
