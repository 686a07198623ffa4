use rand::{Rng, SeedableRng};
use rand_distr::Exp1;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::config::{check_time, SourceConfig};
use crate::error::{Error, Result};

/// Output port of the beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Detector {
    D1,
    D2,
}

impl Detector {
    fn index(self) -> usize {
        match self {
            Detector::D1 => 0,
            Detector::D2 => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionEvent {
    pub time: f64,
    pub detector: Detector,
}

/// Time-ordered detector clicks over `[0, duration)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionStream {
    events: Vec<DetectionEvent>,
    duration: f64,
}

impl DetectionStream {
    /// Builds a stream, checking that times are finite, non-negative,
    /// strictly increasing and below `duration`.
    pub fn new(events: Vec<DetectionEvent>, duration: f64) -> Result<Self> {
        check_time("duration", duration)?;
        let mut previous = f64::NEG_INFINITY;
        for ev in &events {
            if !ev.time.is_finite() || ev.time < 0.0 {
                return Err(Error::Parameter(format!("invalid event time {}", ev.time)));
            }
            if ev.time <= previous {
                return Err(Error::Parameter(format!(
                    "event times must be strictly increasing ({} after {})",
                    ev.time, previous
                )));
            }
            if ev.time >= duration {
                return Err(Error::Parameter(format!(
                    "event at {} lies outside the stream duration {}",
                    ev.time, duration
                )));
            }
            previous = ev.time;
        }
        Ok(Self { events, duration })
    }

    pub fn events(&self) -> &[DetectionEvent] {
        &self.events
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn count(&self, detector: Detector) -> usize {
        self.events.iter().filter(|e| e.detector == detector).count()
    }

    /// Smallest gap between consecutive clicks of the same detector,
    /// `None` if no detector clicked twice.
    pub fn min_same_detector_gap(&self) -> Option<f64> {
        let mut last = [f64::NAN; 2];
        let mut gap: Option<f64> = None;
        for ev in &self.events {
            let i = ev.detector.index();
            if !last[i].is_nan() {
                let g = ev.time - last[i];
                gap = Some(gap.map_or(g, |m| m.min(g)));
            }
            last[i] = ev.time;
        }
        gap
    }
}

/// Lazy generator of detection events.
///
/// A single Poisson process of rate λ is split by independent Bernoulli(p)
/// assignments into the two detectors, which is equivalent to two
/// independent processes of rates λp and λ(1-p). Each detector then applies
/// its non-paralyzable dead time: a click arriving less than `dead_time`
/// after the last *accepted* click on the same detector is dropped and does
/// not extend the dead period.
///
/// The driver is xoshiro256++ (period 2^256 - 1) seeded through SplitMix64.
/// It is a simulation device for validating the model; it is not a source of
/// cryptographic or physical randomness.
#[derive(Debug, Clone)]
pub struct DetectionGenerator {
    rng: Xoshiro256PlusPlus,
    rate: f64,
    split: f64,
    dead_time: f64,
    duration: f64,
    clock: f64,
    last_emitted: f64,
    last_accepted: [f64; 2],
    done: bool,
}

impl DetectionGenerator {
    pub fn new(config: &SourceConfig, duration: f64) -> Result<Self> {
        config.validate()?;
        check_time("duration", duration)?;
        Ok(Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(config.seed),
            rate: config.detection_rate,
            split: config.split_probability,
            dead_time: config.dead_time,
            duration,
            clock: 0.0,
            last_emitted: f64::NEG_INFINITY,
            last_accepted: [f64::NEG_INFINITY; 2],
            done: false,
        })
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }
}

impl Iterator for DetectionGenerator {
    type Item = DetectionEvent;

    fn next(&mut self) -> Option<DetectionEvent> {
        if self.done {
            return None;
        }
        loop {
            let step: f64 = self.rng.sample(Exp1);
            self.clock += step / self.rate;
            if self.clock >= self.duration {
                self.done = true;
                return None;
            }
            let detector = if self.rng.gen::<f64>() < self.split {
                Detector::D1
            } else {
                Detector::D2
            };
            // Zero-length steps (or steps lost to rounding) would break
            // strict ordering.
            if self.clock <= self.last_emitted {
                continue;
            }
            let slot = &mut self.last_accepted[detector.index()];
            if self.clock - *slot < self.dead_time {
                continue;
            }
            *slot = self.clock;
            self.last_emitted = self.clock;
            return Some(DetectionEvent {
                time: self.clock,
                detector,
            });
        }
    }
}

/// Collects all detection events of `config` over `[0, duration)`.
pub fn generate_detections(config: &SourceConfig, duration: f64) -> Result<DetectionStream> {
    let events: Vec<_> = DetectionGenerator::new(config, duration)?.collect();
    Ok(DetectionStream { events, duration })
}
