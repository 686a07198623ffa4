//! Simulation of a photon-splitting random bit generator and the
//! statistical battery used to judge its output.
//!
//! Photon detections are modeled as a Poisson process split between two
//! detectors ([`model`]). The detector clicks drive a flip-flop (or a
//! divider/XOR network) whose output is a random telegraph signal. That
//! signal is sampled periodically into packed bit streams ([`sampler`]),
//! which [`analysis`] tests for bias, block entropy, run lengths, Monte-Carlo
//! π, autocorrelation decay and interval statistics.
//!
//! The pseudo-random driver is seeded xoshiro256++; the simulator validates
//! the device model and does not produce physical randomness.

pub mod analysis;
pub mod error;
pub mod model;
pub mod sampler;

pub use analysis::{run_battery, BatteryOptions, TestReport, Tolerances};
pub use error::{Error, Result};
pub use model::{
    generate_detections, synthesize_divider_xor_signal, synthesize_toggle_signal, theoretical_rates, DetectionEvent,
    DetectionStream, Detector, Device, SourceConfig, TheoreticalRates, TransitionSequence, Variant,
};
pub use sampler::{read_bitstream, sample_signal, state_at, write_bitstream, BitStream, SamplePlan};
