//! The full test battery over a bit stream and, optionally, the signal it
//! was sampled from.

use std::f64::consts::{LN_2, PI};
use std::thread;

use serde::{Deserialize, Serialize};

use super::acf::{autocorrelation, fit_acf_decay_with_floor, AcfCurve, AcfFit, DEFAULT_DECAY_FLOOR};
use super::blocks::{bit_bias, block_distribution, BitBias, BlockDistribution};
use super::intervals::{fit_interval_exponential, interval_histogram, IntervalFit, IntervalHistogram, DEFAULT_FIT_START};
use super::pi::{monte_carlo_pi, PiEstimate};
use super::runs::{run_length_counts, RunLengthDistribution, MIN_RUN_COUNT};
use crate::error::{Error, Result};
use crate::model::TransitionSequence;
use crate::sampler::{sample_signal, BitStream, SamplePlan};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Pass/fail thresholds. `None` disables the corresponding checks; the
/// statistics are still reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Width, in standard deviations of the ideal-source null model, of the
    /// bias, block, run-slope and π checks.
    pub sigma: Option<f64>,
    /// Allowed relative deviation of the fitted autocorrelation time from
    /// 1/(2R), R being the measured toggle rate.
    pub acf_relative: Option<f64>,
    /// Allowed relative deviation of the fitted interval decay constant from
    /// the mean interval in excess of the shortest one.
    pub interval_relative: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sigma: Some(4.0),
            acf_relative: Some(0.10),
            interval_relative: Some(0.05),
        }
    }
}

impl Tolerances {
    pub fn none() -> Self {
        Self {
            sigma: None,
            acf_relative: None,
            interval_relative: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatteryOptions {
    pub block_length: u32,
    pub pi_bits: u32,
    pub interval_bin_width: f64,
    pub interval_fit_start: f64,
    pub acf_sample_period: f64,
    pub acf_points: u64,
    pub acf_max_lag: usize,
    pub decay_floor: f64,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        Self {
            block_length: 8,
            pi_bits: 16,
            interval_bin_width: 1e-9,
            interval_fit_start: DEFAULT_FIT_START,
            acf_sample_period: 2e-9,
            acf_points: 150_000,
            acf_max_lag: 200,
            decay_floor: DEFAULT_DECAY_FLOOR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// |observed - expected| <= tolerance
    Within,
    /// observed >= expected - tolerance
    AtLeast,
}

/// One thresholded quantity of a test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub quantity: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub kind: CheckKind,
    pub pass: bool,
}

impl Check {
    fn new(quantity: &str, observed: f64, expected: f64, tolerance: f64, kind: CheckKind) -> Self {
        let pass = match kind {
            CheckKind::Within => (observed - expected).abs() <= tolerance,
            CheckKind::AtLeast => observed >= expected - tolerance,
        };
        Self {
            quantity: quantity.to_string(),
            observed,
            expected,
            tolerance,
            kind,
            pass,
        }
    }
}

/// Result of one test. `pass` is `None` when the test did not run or no
/// tolerance applies to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestBlock<P, S> {
    pub parameters: P,
    pub statistics: Option<S>,
    pub tolerance: Vec<Check>,
    pub pass: Option<bool>,
    pub error: Option<String>,
}

impl<P, S> TestBlock<P, S> {
    fn evaluate(parameters: P, result: Result<S>, checks: impl FnOnce(&S) -> Vec<Check>) -> Self {
        match result {
            Ok(stats) => {
                let tolerance = checks(&stats);
                let pass = (!tolerance.is_empty()).then(|| tolerance.iter().all(|c| c.pass));
                Self {
                    parameters,
                    statistics: Some(stats),
                    tolerance,
                    pass,
                    error: None,
                }
            }
            Err(e) => Self {
                parameters,
                statistics: None,
                tolerance: Vec::new(),
                pass: None,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn ran(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub origin: String,
    pub bit_count: u64,
    pub period_s: Option<f64>,
    pub seed: Option<u64>,
    pub transitions: Option<u64>,
    pub signal_duration: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasParameters {
    pub bit_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockParameters {
    pub bit_count: u64,
    pub block_length: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunParameters {
    pub bit_count: u64,
    pub min_run_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStatistics {
    #[serde(flatten)]
    pub distribution: RunLengthDistribution,
    pub implied_ones_from_zero_runs: Option<f64>,
    pub implied_ones_from_one_runs: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiParameters {
    pub bit_count: u64,
    pub bits_per_coordinate: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcfParameters {
    pub sample_period: f64,
    pub points: u64,
    pub max_lag: usize,
    pub decay_floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfStatistics {
    pub fit: AcfFit,
    pub measured_toggle_rate: f64,
    /// 1/(2R) for the measured toggle rate.
    pub expected_autocorrelation_time: f64,
    pub curve: AcfCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalParameters {
    pub transitions: u64,
    pub bin_width: f64,
    pub fit_start: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalStatistics {
    pub fit: IntervalFit,
    /// Mean interval minus the shortest interval: the decay constant of an
    /// exponential shifted by a dead zone.
    pub expected_mean_interval: f64,
    pub histogram: IntervalHistogram,
}

pub type BiasTest = TestBlock<BiasParameters, BitBias>;
pub type BlockTest = TestBlock<BlockParameters, BlockDistribution>;
pub type RunTest = TestBlock<RunParameters, RunStatistics>;
pub type PiTest = TestBlock<PiParameters, PiEstimate>;
pub type AcfTest = TestBlock<AcfParameters, AcfStatistics>;
pub type IntervalTest = TestBlock<IntervalParameters, IntervalStatistics>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub tolerances: Tolerances,
    pub bias: BiasTest,
    pub blocks: BlockTest,
    pub runs: RunTest,
    pub pi: PiTest,
    pub acf: Option<AcfTest>,
    pub intervals: Option<IntervalTest>,
}

/// Name, pass flag and error of one test, for summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct TestStatus<'a> {
    pub name: &'static str,
    pub pass: Option<bool>,
    pub error: Option<&'a str>,
}

impl TestReport {
    pub fn statuses(&self) -> Vec<TestStatus<'_>> {
        fn st<'a, P, S>(name: &'static str, t: &'a TestBlock<P, S>) -> TestStatus<'a> {
            TestStatus {
                name,
                pass: t.pass,
                error: t.error.as_deref(),
            }
        }
        let mut out = vec![
            st("bias", &self.bias),
            st("blocks", &self.blocks),
            st("runs", &self.runs),
            st("pi", &self.pi),
        ];
        if let Some(t) = &self.acf {
            out.push(st("acf", t));
        }
        if let Some(t) = &self.intervals {
            out.push(st("intervals", t));
        }
        out
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.statuses()
            .into_iter()
            .filter(|s| s.pass == Some(false))
            .map(|s| s.name)
            .collect()
    }

    pub fn all_pass(&self) -> bool {
        self.failed().is_empty()
    }
}

/// Runs every test; a failing test becomes an entry with `error` set and
/// never aborts the rest. The tests share only read-only input and run on
/// separate threads.
pub fn run_battery(
    bits: &BitStream,
    signal: Option<&TransitionSequence>,
    options: &BatteryOptions,
    tolerances: &Tolerances,
) -> TestReport {
    let n = bits.len();
    let sigma = tolerances.sigma;
    thread::scope(|s| {
        let bias = s.spawn(|| bias_test(bits, sigma));
        let blocks = s.spawn(|| block_test(bits, options.block_length, sigma));
        let runs = s.spawn(|| run_test(bits, sigma));
        let pi = s.spawn(|| pi_test(bits, options.pi_bits, sigma));
        let acf = signal.map(|seq| s.spawn(move || acf_test(seq, options, tolerances.acf_relative)));
        let intervals = signal.map(|seq| s.spawn(move || interval_test(seq, options, tolerances.interval_relative)));
        TestReport {
            schema_version: REPORT_SCHEMA_VERSION,
            provenance: Provenance {
                origin: bits.meta.origin.clone(),
                bit_count: n,
                period_s: bits.meta.period_s,
                seed: bits.meta.seed,
                transitions: signal.map(|s| s.len() as u64),
                signal_duration: signal.map(|s| s.duration()),
            },
            tolerances: *tolerances,
            bias: bias.join().expect("bias test panicked"),
            blocks: blocks.join().expect("block test panicked"),
            runs: runs.join().expect("run test panicked"),
            pi: pi.join().expect("pi test panicked"),
            acf: acf.map(|h| h.join().expect("acf test panicked")),
            intervals: intervals.map(|h| h.join().expect("interval test panicked")),
        }
    })
}

fn bias_test(bits: &BitStream, sigma: Option<f64>) -> BiasTest {
    let n = bits.len();
    TestBlock::evaluate(BiasParameters { bit_count: n }, bit_bias(bits), |b| {
        sigma
            .map(|k| {
                let sd = 0.5 / (n as f64).sqrt();
                vec![Check::new("ones_fraction", b.fraction, 0.5, k * sd, CheckKind::Within)]
            })
            .unwrap_or_default()
    })
}

fn block_test(bits: &BitStream, block_length: u32, sigma: Option<f64>) -> BlockTest {
    let params = BlockParameters {
        bit_count: bits.len(),
        block_length,
    };
    TestBlock::evaluate(params, block_distribution(bits, block_length), |d| {
        let Some(k) = sigma else { return Vec::new() };
        let values = (1u64 << d.block_length) as f64;
        let blocks = d.blocks as f64;
        // Uniform block values: variance (K² - 1)/12. Plug-in entropy of a
        // uniform source: 2B·ln2·(n - Ĥ) ~ χ² with K - 1 degrees of freedom.
        let mean_sd = ((values * values - 1.0) / 12.0 / blocks).sqrt();
        let dof = values - 1.0;
        let entropy_slack = (dof + k * (2.0 * dof).sqrt()) / (2.0 * blocks * LN_2);
        vec![
            Check::new("mean", d.mean, d.ideal_mean(), k * mean_sd, CheckKind::Within),
            Check::new(
                "entropy",
                d.entropy,
                d.block_length as f64,
                entropy_slack,
                CheckKind::AtLeast,
            ),
        ]
    })
}

fn run_test(bits: &BitStream, sigma: Option<f64>) -> RunTest {
    let params = RunParameters {
        bit_count: bits.len(),
        min_run_count: MIN_RUN_COUNT,
    };
    let result = run_length_counts(bits).map(|distribution| {
        let (z, o) = distribution.implied_ones_probability();
        RunStatistics {
            distribution,
            implied_ones_from_zero_runs: z,
            implied_ones_from_one_runs: o,
        }
    });
    TestBlock::evaluate(params, result, |r| {
        let Some(k) = sigma else { return Vec::new() };
        let ideal = -(2f64.log10());
        let mut checks = Vec::new();
        if let Some(s) = r.distribution.zero_slope {
            checks.push(Check::new("zero_run_slope", s.slope, ideal, k * s.std_error, CheckKind::Within));
        }
        if let Some(s) = r.distribution.one_slope {
            checks.push(Check::new("one_run_slope", s.slope, ideal, k * s.std_error, CheckKind::Within));
        }
        checks
    })
}

fn pi_test(bits: &BitStream, pi_bits: u32, sigma: Option<f64>) -> PiTest {
    let params = PiParameters {
        bit_count: bits.len(),
        bits_per_coordinate: pi_bits,
    };
    TestBlock::evaluate(params, monte_carlo_pi(bits, pi_bits), |p| {
        sigma
            .map(|k| {
                let q = PI / 4.0;
                let sd = 4.0 * (q * (1.0 - q) / p.points as f64).sqrt();
                vec![Check::new("pi", p.estimate, PI, k * sd, CheckKind::Within)]
            })
            .unwrap_or_default()
    })
}

fn acf_test(seq: &TransitionSequence, options: &BatteryOptions, relative: Option<f64>) -> AcfTest {
    let available = SamplePlan {
        period: options.acf_sample_period,
        phase: 0.0,
        count: 0,
    }
    .max_count(seq.duration());
    let points = options.acf_points.min(available);
    let params = AcfParameters {
        sample_period: options.acf_sample_period,
        points,
        max_lag: options.acf_max_lag,
        decay_floor: options.decay_floor,
    };
    let result = (|| {
        let plan = SamplePlan::new(options.acf_sample_period, 0.0, points)?;
        let trace: Vec<f64> = sample_signal(seq, &plan)?.iter().map(f64::from).collect();
        let curve = autocorrelation(&trace, options.acf_sample_period, options.acf_max_lag)?;
        let fit = fit_acf_decay_with_floor(&curve, options.decay_floor)?;
        let rate = seq.toggle_rate();
        if rate <= 0.0 {
            return Err(Error::Degenerate("signal never toggles".into()));
        }
        Ok(AcfStatistics {
            fit,
            measured_toggle_rate: rate,
            expected_autocorrelation_time: 1.0 / (2.0 * rate),
            curve,
        })
    })();
    TestBlock::evaluate(params, result, |a| {
        relative
            .map(|r| {
                let expected = a.expected_autocorrelation_time;
                vec![Check::new(
                    "autocorrelation_time",
                    a.fit.autocorrelation_time,
                    expected,
                    r * expected,
                    CheckKind::Within,
                )]
            })
            .unwrap_or_default()
    })
}

fn interval_test(seq: &TransitionSequence, options: &BatteryOptions, relative: Option<f64>) -> IntervalTest {
    let params = IntervalParameters {
        transitions: seq.len() as u64,
        bin_width: options.interval_bin_width,
        fit_start: options.interval_fit_start,
    };
    let result = interval_histogram(seq, options.interval_bin_width).and_then(|histogram| {
        let fit = fit_interval_exponential(&histogram, options.interval_fit_start)?;
        Ok(IntervalStatistics {
            fit,
            expected_mean_interval: histogram.mean_interval - histogram.min_interval,
            histogram,
        })
    });
    TestBlock::evaluate(params, result, |s| {
        relative
            .map(|r| {
                let expected = s.expected_mean_interval;
                vec![Check::new(
                    "mean_interval",
                    s.fit.mean_interval,
                    expected,
                    r * expected,
                    CheckKind::Within,
                )]
            })
            .unwrap_or_default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeros(n: usize) -> BitStream {
        BitStream::from_bits(vec![false; n])
    }

    #[test]
    fn empty_tolerances_flag_nothing() {
        let r = run_battery(&zeros(8000), None, &BatteryOptions::default(), &Tolerances::none());
        assert!(r.statuses().iter().all(|s| s.pass.is_none()));
        assert!(r.all_pass());
        assert!(r.bias.statistics.is_some());
        assert!(r.acf.is_none() && r.intervals.is_none());
    }

    #[test]
    fn degenerate_stream_fails() {
        let r = run_battery(&zeros(8000), None, &BatteryOptions::default(), &Tolerances::default());
        assert_eq!(r.bias.statistics.unwrap().fraction, 0.0);
        assert_eq!(r.blocks.statistics.as_ref().unwrap().entropy, 0.0);
        assert_eq!(r.pi.statistics.unwrap().estimate, 4.0);
        let failed = r.failed();
        assert!(failed.contains(&"bias") && failed.contains(&"blocks") && failed.contains(&"pi"));
    }

    #[test]
    fn errors_become_entries() {
        let r = run_battery(&BitStream::from_bits([true]), None, &BatteryOptions::default(), &Tolerances::default());
        assert!(r.bias.ran());
        assert!(!r.blocks.ran() && !r.runs.ran() && !r.pi.ran());
        assert!(r.blocks.error.as_deref().unwrap().contains("block"));
    }

    #[test]
    fn short_signal_is_reported_not_fatal() {
        let seq = TransitionSequence::new(false, vec![1e-9], 1e-8).unwrap();
        let r = run_battery(&zeros(64), Some(&seq), &BatteryOptions::default(), &Tolerances::default());
        assert!(!r.acf.as_ref().unwrap().ran());
        assert!(!r.intervals.as_ref().unwrap().ran());
    }

    #[test]
    fn check_kinds() {
        assert!(Check::new("x", 1.0, 1.5, 0.5, CheckKind::Within).pass);
        assert!(!Check::new("x", 0.9, 1.5, 0.5, CheckKind::Within).pass);
        assert!(Check::new("x", 9.0, 8.0, 0.1, CheckKind::AtLeast).pass);
        assert!(!Check::new("x", 7.8, 8.0, 0.1, CheckKind::AtLeast).pass);
    }
}
