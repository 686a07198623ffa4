//! Run configuration: command-line flags over config file over defaults.
//!
//! The config file is line based, `key = value` with `#` comments. Keys use
//! the long flag names with `-` or `_` separators.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use qrng_core::analysis::{BatteryOptions, Tolerances};
use qrng_core::{SamplePlan, SourceConfig, Variant};

use crate::error::CliError;
use crate::units::{parse_seconds, parse_state};

#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct SourceArgs {
    /// Total detection rate over both detectors [1/s]
    #[arg(long)]
    pub rate: Option<f64>,
    /// Probability that a detection lands in D1
    #[arg(long)]
    pub split: Option<f64>,
    /// Per-detector dead time [s]
    #[arg(long, value_parser = parse_seconds)]
    pub dead_time: Option<f64>,
    /// Minimum time between output transitions [s]
    #[arg(long, value_parser = parse_seconds)]
    pub min_dwell: Option<f64>,
    /// Latency from detection to output change [s]
    #[arg(long, value_parser = parse_seconds)]
    pub delay: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output logic: toggle or divider-xor
    #[arg(long)]
    pub variant: Option<Variant>,
    /// Power-on state of the output (0 or 1)
    #[arg(long, value_parser = parse_state)]
    pub initial_state: Option<bool>,
    /// Simulated time span [s]
    #[arg(long, value_parser = parse_seconds)]
    pub duration: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct PlanArgs {
    /// Sampling period [s]
    #[arg(long, value_parser = parse_seconds)]
    pub period: Option<f64>,
    /// Time of the first sample [s]
    #[arg(long, value_parser = parse_seconds)]
    pub phase: Option<f64>,
    /// Number of bits to acquire
    #[arg(long, value_parser = parse_count)]
    pub count: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct AnalysisArgs {
    #[arg(long)]
    pub block_length: Option<u32>,
    /// Bits per Monte-Carlo coordinate
    #[arg(long)]
    pub pi_bits: Option<u32>,
    /// Interval histogram bin width [s]
    #[arg(long, value_parser = parse_seconds)]
    pub bin_width: Option<f64>,
    /// Start of the interval exponential fit [s]
    #[arg(long, value_parser = parse_seconds)]
    pub fit_start: Option<f64>,
    /// Sampling period of the autocorrelation trace [s]
    #[arg(long, value_parser = parse_seconds)]
    pub acf_period: Option<f64>,
    #[arg(long, value_parser = parse_count)]
    pub acf_points: Option<u64>,
    #[arg(long)]
    pub acf_max_lag: Option<usize>,
    #[arg(long)]
    pub decay_floor: Option<f64>,
    /// Statistical tolerance in standard deviations
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Relative tolerance of the autocorrelation time
    #[arg(long)]
    pub acf_tolerance: Option<f64>,
    /// Relative tolerance of the interval decay constant
    #[arg(long)]
    pub interval_tolerance: Option<f64>,
    /// Report statistics without pass/fail checks
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_parser = parse_bool)]
    pub no_tolerances: Option<bool>,
}

/// Everything a config file may set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileSettings {
    pub source: SourceArgs,
    pub plan: PlanArgs,
    pub analysis: AnalysisArgs,
}

fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    // Allow 1e7 style counts as long as they are whole numbers.
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
        _ => Err(format!("invalid count {s:?}")),
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        other => Err(format!("invalid boolean {other:?}")),
    }
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse::<T>().map_err(|_| format!("invalid number {s:?}"))
}

impl FileSettings {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut out = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            out.set(key.trim(), value.trim())
                .map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        Ok(out)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let (s, p, a) = (&mut self.source, &mut self.plan, &mut self.analysis);
        match key.replace('-', "_").as_str() {
            "rate" => s.rate = Some(num(value)?),
            "split" => s.split = Some(num(value)?),
            "dead_time" => s.dead_time = Some(parse_seconds(value)?),
            "min_dwell" => s.min_dwell = Some(parse_seconds(value)?),
            "delay" => s.delay = Some(parse_seconds(value)?),
            "seed" => s.seed = Some(num(value)?),
            "variant" => s.variant = Some(value.parse::<Variant>().map_err(|e| e.to_string())?),
            "initial_state" => s.initial_state = Some(parse_state(value)?),
            "duration" => s.duration = Some(parse_seconds(value)?),
            "period" => p.period = Some(parse_seconds(value)?),
            "phase" => p.phase = Some(parse_seconds(value)?),
            "count" => p.count = Some(parse_count(value)?),
            "block_length" => a.block_length = Some(num(value)?),
            "pi_bits" => a.pi_bits = Some(num(value)?),
            "bin_width" => a.bin_width = Some(parse_seconds(value)?),
            "fit_start" => a.fit_start = Some(parse_seconds(value)?),
            "acf_period" => a.acf_period = Some(parse_seconds(value)?),
            "acf_points" => a.acf_points = Some(parse_count(value)?),
            "acf_max_lag" => a.acf_max_lag = Some(num(value)?),
            "decay_floor" => a.decay_floor = Some(num(value)?),
            "sigma" => a.sigma = Some(num(value)?),
            "acf_tolerance" => a.acf_tolerance = Some(num(value)?),
            "interval_tolerance" => a.interval_tolerance = Some(num(value)?),
            "no_tolerances" => a.no_tolerances = Some(parse_bool(value)?),
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }
}

pub const DEFAULT_DURATION: f64 = 10e-3;
pub const DEFAULT_PERIOD: f64 = 1e-6;
pub const DEFAULT_COUNT: u64 = 10_000_000;

/// Resolved device settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceSettings {
    pub source: SourceConfig,
    pub variant: Variant,
    pub initial_state: bool,
    pub duration: f64,
}

pub fn resolve_device(flags: &SourceArgs, file: &SourceArgs) -> DeviceSettings {
    let d = SourceConfig::default();
    DeviceSettings {
        source: SourceConfig {
            detection_rate: flags.rate.or(file.rate).unwrap_or(d.detection_rate),
            split_probability: flags.split.or(file.split).unwrap_or(d.split_probability),
            dead_time: flags.dead_time.or(file.dead_time).unwrap_or(d.dead_time),
            min_dwell: flags.min_dwell.or(file.min_dwell).unwrap_or(d.min_dwell),
            internal_delay: flags.delay.or(file.delay).unwrap_or(d.internal_delay),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
        },
        variant: flags.variant.or(file.variant).unwrap_or_default(),
        initial_state: flags.initial_state.or(file.initial_state).unwrap_or(false),
        duration: flags.duration.or(file.duration).unwrap_or(DEFAULT_DURATION),
    }
}

pub fn resolve_plan(flags: &PlanArgs, file: &PlanArgs) -> SamplePlan {
    SamplePlan {
        period: flags.period.or(file.period).unwrap_or(DEFAULT_PERIOD),
        phase: flags.phase.or(file.phase).unwrap_or(0.0),
        count: flags.count.or(file.count).unwrap_or(DEFAULT_COUNT),
    }
}

pub fn resolve_analysis(flags: &AnalysisArgs, file: &AnalysisArgs) -> (BatteryOptions, Tolerances) {
    let d = BatteryOptions::default();
    let options = BatteryOptions {
        block_length: flags.block_length.or(file.block_length).unwrap_or(d.block_length),
        pi_bits: flags.pi_bits.or(file.pi_bits).unwrap_or(d.pi_bits),
        interval_bin_width: flags.bin_width.or(file.bin_width).unwrap_or(d.interval_bin_width),
        interval_fit_start: flags.fit_start.or(file.fit_start).unwrap_or(d.interval_fit_start),
        acf_sample_period: flags.acf_period.or(file.acf_period).unwrap_or(d.acf_sample_period),
        acf_points: flags.acf_points.or(file.acf_points).unwrap_or(d.acf_points),
        acf_max_lag: flags.acf_max_lag.or(file.acf_max_lag).unwrap_or(d.acf_max_lag),
        decay_floor: flags.decay_floor.or(file.decay_floor).unwrap_or(d.decay_floor),
    };
    let tolerances = if flags.no_tolerances.or(file.no_tolerances).unwrap_or(false) {
        Tolerances::none()
    } else {
        let t = Tolerances::default();
        Tolerances {
            sigma: flags.sigma.or(file.sigma).or(t.sigma),
            acf_relative: flags.acf_tolerance.or(file.acf_tolerance).or(t.acf_relative),
            interval_relative: flags.interval_tolerance.or(file.interval_tolerance).or(t.interval_relative),
        }
    };
    (options, tolerances)
}

pub fn default_report_path(bits: &Path) -> PathBuf {
    let mut s = bits.as_os_str().to_owned();
    s.push(".report.json");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file() {
        let f = FileSettings::parse(
            "# device\nrate = 52e6\nsplit=0.6   # skewed\nmin-dwell = 3ns\nvariant = divider-xor\n\ncount = 1e6\nno_tolerances = yes\n",
        )
        .unwrap();
        assert_eq!(f.source.rate, Some(52e6));
        assert_eq!(f.source.split, Some(0.6));
        assert_eq!(f.source.min_dwell, Some(3e-9));
        assert_eq!(f.source.variant, Some(Variant::DividerXor));
        assert_eq!(f.plan.count, Some(1_000_000));
        assert_eq!(f.analysis.no_tolerances, Some(true));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(FileSettings::parse("rate 5").is_err());
        assert!(FileSettings::parse("speed = 5").is_err());
        assert!(FileSettings::parse("rate = fast").is_err());
        assert!(FileSettings::parse("count = 1.5").is_err());
    }

    #[test]
    fn defaults() {
        let d = resolve_device(&SourceArgs::default(), &SourceArgs::default());
        assert_eq!(d.source, SourceConfig::default());
        assert_eq!(d.duration, DEFAULT_DURATION);
        let p = resolve_plan(&PlanArgs::default(), &PlanArgs::default());
        assert_eq!((p.period, p.phase, p.count), (1e-6, 0.0, 10_000_000));
        let (o, t) = resolve_analysis(&AnalysisArgs::default(), &AnalysisArgs::default());
        assert_eq!(o, BatteryOptions::default());
        assert_eq!(t, Tolerances::default());
    }

    #[test]
    fn no_tolerances_clears_checks() {
        let flags = AnalysisArgs {
            no_tolerances: Some(true),
            ..Default::default()
        };
        let (_, t) = resolve_analysis(&flags, &AnalysisArgs::default());
        assert_eq!(t, Tolerances::none());
    }
}
