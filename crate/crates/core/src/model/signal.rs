use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::check_time;
use super::detection::{DetectionEvent, DetectionStream, Detector};
use crate::error::{Error, Result};

/// Binary telegraph signal stored as its initial state and the instants at
/// which it changes.
///
/// The state after `k` transitions is `initial_state ^ (k odd)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionSequence {
    initial_state: bool,
    transition_times: Vec<f64>,
    duration: f64,
}

impl TransitionSequence {
    /// Checks that times are finite, non-negative, strictly increasing and
    /// no later than `duration`.
    pub fn new(initial_state: bool, transition_times: Vec<f64>, duration: f64) -> Result<Self> {
        check_time("duration", duration)?;
        let mut previous = f64::NEG_INFINITY;
        for &t in &transition_times {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::Parameter(format!("invalid transition time {t}")));
            }
            if t <= previous {
                return Err(Error::Parameter(format!(
                    "transition times must be strictly increasing ({t} after {previous})"
                )));
            }
            if t > duration {
                return Err(Error::Parameter(format!(
                    "transition at {t} lies beyond the duration {duration}"
                )));
            }
            previous = t;
        }
        Ok(Self {
            initial_state,
            transition_times,
            duration,
        })
    }

    pub fn initial_state(&self) -> bool {
        self.initial_state
    }

    pub fn transition_times(&self) -> &[f64] {
        &self.transition_times
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn len(&self) -> usize {
        self.transition_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transition_times.is_empty()
    }

    pub fn state_after(&self, transitions: usize) -> bool {
        self.initial_state ^ (transitions % 2 == 1)
    }

    pub fn final_state(&self) -> bool {
        self.state_after(self.len())
    }

    /// Transitions per second over the whole duration.
    pub fn toggle_rate(&self) -> f64 {
        if self.duration > 0.0 {
            self.len() as f64 / self.duration
        } else {
            0.0
        }
    }

    /// Fraction of the duration spent in state 1.
    pub fn time_in_one(&self) -> f64 {
        if self.duration <= 0.0 {
            return if self.initial_state { 1.0 } else { 0.0 };
        }
        let mut state = self.initial_state;
        let mut since = 0.0;
        let mut high = 0.0;
        for &t in &self.transition_times {
            if state {
                high += t - since;
            }
            since = t;
            state = !state;
        }
        if state {
            high += self.duration - since;
        }
        high / self.duration
    }
}

/// Which detector-to-signal logic drives the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Set/reset flip-flop: D1 forces state 0, D2 forces state 1, repeated
    /// clicks on the same side are absorbed.
    #[default]
    Toggle,
    /// Each detector drives a divide-by-two stage and the two stages are
    /// combined by XOR, so every click flips the output.
    DividerXor,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Toggle => "toggle",
            Variant::DividerXor => "divider-xor",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "toggle" | "rs" | "flip-flop" => Ok(Variant::Toggle),
            "divider-xor" | "xor" => Ok(Variant::DividerXor),
            other => Err(Error::Parameter(format!(
                "unknown variant {other:?} (expected toggle or divider-xor)"
            ))),
        }
    }
}

/// Event-at-a-time state machine turning detections into output transitions.
#[derive(Debug, Clone)]
pub struct Synthesizer {
    variant: Variant,
    state: bool,
    dividers: [bool; 2],
    min_dwell: f64,
    internal_delay: f64,
    last_transition: f64,
}

impl Synthesizer {
    pub fn new(variant: Variant, initial_state: bool, min_dwell: f64, internal_delay: f64) -> Result<Self> {
        check_time("minimum dwell", min_dwell)?;
        check_time("internal delay", internal_delay)?;
        Ok(Self {
            variant,
            state: initial_state,
            // Output = initial_state ^ d1 ^ d2.
            dividers: [false; 2],
            min_dwell,
            internal_delay,
            last_transition: f64::NEG_INFINITY,
        })
    }

    pub fn state(&self) -> bool {
        self.state
    }

    /// Feeds one detection; returns the output transition time if the
    /// event changed the output.
    pub fn feed(&mut self, event: DetectionEvent) -> Option<f64> {
        let target = match self.variant {
            Variant::Toggle => match event.detector {
                Detector::D1 => false,
                Detector::D2 => true,
            },
            Variant::DividerXor => !self.state,
        };
        if target == self.state {
            return None;
        }
        // Too soon after the previous edge: the click is lost.
        if event.time - self.last_transition < self.min_dwell {
            return None;
        }
        if self.variant == Variant::DividerXor {
            let d = &mut self.dividers[(event.detector == Detector::D2) as usize];
            *d = !*d;
        }
        self.state = target;
        self.last_transition = event.time;
        Some(event.time + self.internal_delay)
    }
}

/// Iterator adapter mapping a detection iterator to output transition times.
#[derive(Debug, Clone)]
pub struct Transitions<I> {
    events: I,
    synth: Synthesizer,
}

impl<I: Iterator<Item = DetectionEvent>> Transitions<I> {
    pub fn new(events: I, synth: Synthesizer) -> Self {
        Self { events, synth }
    }
}

impl<I: Iterator<Item = DetectionEvent>> Iterator for Transitions<I> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        for ev in self.events.by_ref() {
            if let Some(t) = self.synth.feed(ev) {
                return Some(t);
            }
        }
        None
    }
}

pub(crate) fn synthesize(
    stream: &DetectionStream,
    variant: Variant,
    initial_state: bool,
    min_dwell: f64,
    internal_delay: f64,
) -> Result<TransitionSequence> {
    let synth = Synthesizer::new(variant, initial_state, min_dwell, internal_delay)?;
    let times: Vec<f64> = Transitions::new(stream.events().iter().copied(), synth).collect();
    Ok(TransitionSequence {
        initial_state,
        transition_times: times,
        duration: stream.duration() + internal_delay,
    })
}

/// Flip-flop logic: the first click on the opposite side switches the
/// output, further clicks on the same side leave it unchanged.
pub fn synthesize_toggle_signal(
    stream: &DetectionStream,
    initial_state: bool,
    min_dwell: f64,
    internal_delay: f64,
) -> Result<TransitionSequence> {
    synthesize(stream, Variant::Toggle, initial_state, min_dwell, internal_delay)
}

/// Divider/XOR logic: every accepted click flips the output, which starts
/// at 0.
pub fn synthesize_divider_xor_signal(stream: &DetectionStream, min_dwell: f64) -> Result<TransitionSequence> {
    synthesize(stream, Variant::DividerXor, false, min_dwell, 0.0)
}
