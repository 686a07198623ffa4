//! Randomness tests on bit streams and on the underlying signal.

mod acf;
mod battery;
mod blocks;
mod intervals;
mod pi;
mod regression;
mod runs;

pub use acf::{autocorrelation, fit_acf_decay, fit_acf_decay_with_floor, AcfCurve, AcfFit, DEFAULT_DECAY_FLOOR};
pub use battery::{
    run_battery, AcfParameters, AcfStatistics, AcfTest, BatteryOptions, BiasParameters, BiasTest, BlockParameters,
    BlockTest, Check, CheckKind, IntervalParameters, IntervalStatistics, IntervalTest, PiParameters, PiTest,
    Provenance, RunParameters, RunStatistics, RunTest, TestBlock, TestReport, TestStatus, Tolerances,
    REPORT_SCHEMA_VERSION,
};
pub use blocks::{bit_bias, block_distribution, BitBias, BlockDistribution, MAX_BLOCK_LENGTH};
pub use intervals::{fit_interval_exponential, interval_histogram, IntervalFit, IntervalHistogram, DEFAULT_FIT_START};
pub use pi::{monte_carlo_pi, PiEstimate};
pub use runs::{run_length_counts, RunLengthDistribution, RunSlope, MIN_RUN_COUNT};
