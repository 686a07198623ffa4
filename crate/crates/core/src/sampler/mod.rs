//! Periodic sampling of the telegraph signal and bit-stream storage.

mod bitstream;
mod file;

pub use bitstream::{BitMeta, BitStream, Bits};
pub use file::{meta_path, read_bitstream, write_atomic, write_bitstream};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::TransitionSequence;

/// Sample instants `phase + k * period` for `k` in `0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub period: f64,
    pub phase: f64,
    pub count: u64,
}

impl SamplePlan {
    pub fn new(period: f64, phase: f64, count: u64) -> Result<Self> {
        let plan = Self { period, phase, count };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.period.is_finite() || self.period <= 0.0 {
            return Err(Error::Parameter(format!("sampling period must be > 0, got {}", self.period)));
        }
        if !self.phase.is_finite() || self.phase < 0.0 {
            return Err(Error::Parameter(format!("sampling phase must be >= 0, got {}", self.phase)));
        }
        Ok(())
    }

    pub fn instant(&self, k: u64) -> f64 {
        self.phase + k as f64 * self.period
    }

    pub fn last_instant(&self) -> Option<f64> {
        self.count.checked_sub(1).map(|k| self.instant(k))
    }

    /// Largest sample count whose last instant does not exceed `duration`.
    pub fn max_count(&self, duration: f64) -> u64 {
        if self.phase > duration {
            return 0;
        }
        let mut n = ((duration - self.phase) / self.period).floor() as u64 + 1;
        while n > 0 && self.instant(n - 1) > duration {
            n -= 1;
        }
        while self.instant(n) <= duration {
            n += 1;
        }
        n
    }
}

/// Signal value at time `t`. A sample taken exactly at a transition sees the
/// post-transition state.
pub fn state_at(seq: &TransitionSequence, t: f64) -> Result<bool> {
    if !(0.0..=seq.duration()).contains(&t) {
        return Err(Error::Range(format!(
            "time {t} lies outside the signal [0, {}]",
            seq.duration()
        )));
    }
    let passed = seq.transition_times().partition_point(|&x| x <= t);
    Ok(seq.state_after(passed))
}

/// Samples a stored signal; one merge pass over the transition list.
pub fn sample_signal(seq: &TransitionSequence, plan: &SamplePlan) -> Result<BitStream> {
    sample_transitions(
        seq.initial_state(),
        seq.transition_times().iter().copied(),
        seq.duration(),
        plan,
    )
}

/// Samples a signal given as an increasing stream of transition times.
pub fn sample_transitions<I>(initial_state: bool, transitions: I, duration: f64, plan: &SamplePlan) -> Result<BitStream>
where
    I: IntoIterator<Item = f64>,
{
    plan.validate()?;
    if let Some(last) = plan.last_instant() {
        if last > duration {
            return Err(Error::PlanTooLong {
                max_count: plan.max_count(duration),
            });
        }
    }
    let mut transitions = transitions.into_iter().peekable();
    let mut state = initial_state;
    let mut bits = BitStream::with_capacity(plan.count);
    for k in 0..plan.count {
        let t = plan.instant(k);
        while transitions.next_if(|&x| x <= t).is_some() {
            state = !state;
        }
        bits.push(state);
    }
    bits.meta.period_s = Some(plan.period);
    Ok(bits)
}
