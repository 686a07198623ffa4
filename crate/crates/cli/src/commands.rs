use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrng_core::analysis::run_battery;
use qrng_core::model::{dwell_limited_toggle_rate, theoretical_rates_for, transition_count_std_dev};
use qrng_core::sampler::{read_bitstream, sample_signal, write_atomic, write_bitstream};
use qrng_core::{analysis::bit_bias, Device};

use crate::config::{
    default_report_path, resolve_analysis, resolve_device, resolve_plan, AnalysisArgs, FileSettings, PlanArgs,
    SourceArgs,
};
use crate::error::CliError;
use crate::plots::write_plot_data;
use crate::render::summary;
use crate::trace::{read_trace, write_trace};

/// Simulate a photon-splitting random bit generator and test its output.
#[derive(Debug, Parser)]
#[command(name = "qrng", version)]
pub struct Cli {
    /// Config file of `key = value` lines; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the device and write its transition trace
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Sample a trace (or an inline simulation) into a packed bit file
    #[command(allow_negative_numbers = true)]
    Sample(SampleArgs),
    /// Run the test battery on a bit file and optional trace
    #[command(allow_negative_numbers = true)]
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Transition trace CSV to write
    #[arg(long, default_value = "trace.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub plan: PlanArgs,
    /// Sample this trace instead of simulating
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Packed bit file to write (metadata goes to <out>.meta)
    #[arg(long, default_value = "bits.bin")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Packed bit file; without a .meta sidecar every byte counts as 8 bits
    #[arg(long)]
    pub bits: PathBuf,
    /// Transition trace for the autocorrelation and interval tests
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// JSON report path [default: <bits>.report.json]
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Directory for acf.csv, intervals.csv, bytes.csv and runs.csv
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    /// Exit with status 3 when any test fails its tolerance
    #[arg(long)]
    pub strict: bool,
    /// Format of the summary printed to stdout
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[command(flatten)]
    pub analysis: AnalysisArgs,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => FileSettings::load(path)?,
        None => FileSettings::default(),
    };
    match cli.command {
        Command::Simulate(args) => simulate(&args, &file),
        Command::Sample(args) => sample(&args, &file),
        Command::Analyze(args) => analyze(&args, &file),
    }
}

fn simulate(args: &SimulateArgs, file: &FileSettings) -> Result<(), CliError> {
    let settings = resolve_device(&args.source, &file.source);
    let device = Device::new(settings.source, settings.variant, settings.initial_state)?;
    let cfg = settings.source;
    let theory = theoretical_rates_for(settings.variant, cfg.detection_rate, cfg.split_probability)?;
    if theory.toggle_rate == 0.0 {
        eprintln!(
            "warning: split probability {} gives a zero theoretical toggle rate; the trace will be empty",
            cfg.split_probability
        );
    }
    let seq = device.signal(settings.duration)?;
    write_trace(&seq, &args.out)?;

    let duration = settings.duration;
    let measured = if duration > 0.0 { seq.len() as f64 / duration } else { 0.0 };
    let sd = if duration > 0.0 {
        transition_count_std_dev(settings.variant, cfg.detection_rate, cfg.split_probability, duration) / duration
    } else {
        0.0
    };
    println!(
        "variant {} rate {:e}/s split {} seed {}",
        settings.variant, cfg.detection_rate, cfg.split_probability, cfg.seed
    );
    println!("transitions        {} in {:e} s", seq.len(), duration);
    println!("measured rate      {measured:e}/s ± {sd:.3e}");
    let deviation = |expected: f64| {
        if sd > 0.0 {
            format!(" ({:+.2} sigma)", (measured - expected) / sd)
        } else {
            String::new()
        }
    };
    println!("theoretical rate   {:e}/s{}", theory.toggle_rate, deviation(theory.toggle_rate));
    if cfg.min_dwell > 0.0 {
        let limited =
            dwell_limited_toggle_rate(settings.variant, cfg.detection_rate, cfg.split_probability, cfg.min_dwell)?;
        println!("with min dwell     {limited:e}/s{}", deviation(limited));
    }
    println!("tau_ac (1/2R)      {:e} s", theory.autocorrelation_time);
    println!("time in state 1    {:.5}", seq.time_in_one());
    if cfg.dead_time > 0.0 {
        println!("note: dead time lowers the rate below these values");
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn sample(args: &SampleArgs, file: &FileSettings) -> Result<(), CliError> {
    let plan = resolve_plan(&args.plan, &file.plan);
    plan.validate()?;
    let bits = match &args.trace {
        Some(path) => {
            let seq = read_trace(path)?;
            let mut bits = sample_signal(&seq, &plan)?;
            bits.meta.origin = format!("sampled trace {}", path.display());
            bits
        }
        None => {
            let settings = resolve_device(&args.source, &file.source);
            Device::new(settings.source, settings.variant, settings.initial_state)?.sample(&plan)?
        }
    };
    write_bitstream(&bits, &args.out)?;
    match bit_bias(&bits) {
        Ok(b) => println!(
            "{} bits, ones fraction {:.6} ± {:.6}",
            bits.len(),
            b.fraction,
            b.std_error
        ),
        Err(_) => println!("0 bits"),
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn analyze(args: &AnalyzeArgs, file: &FileSettings) -> Result<(), CliError> {
    let (options, tolerances) = resolve_analysis(&args.analysis, &file.analysis);
    let bits = read_bitstream(&args.bits).map_err(|e| match e {
        qrng_core::Error::Io(e) => CliError::io(&args.bits, e),
        qrng_core::Error::Format(m) => CliError::Format(format!("{}: {m}", args.bits.display())),
        other => other.into(),
    })?;
    let seq = args.trace.as_deref().map(read_trace).transpose()?;
    let report = run_battery(&bits, seq.as_ref(), &options, &tolerances);

    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    let report_path = args.report.clone().unwrap_or_else(|| default_report_path(&args.bits));
    write_atomic(&report_path, json.as_bytes()).map_err(|e| CliError::io(&report_path, e))?;
    if let Some(dir) = &args.csv_out {
        write_plot_data(&report, dir)?;
    }
    match args.format {
        Format::Text => {
            print!("{}", summary(&report));
            println!("report written to {}", report_path.display());
        }
        Format::Json => println!("{json}"),
    }
    let failed = report.failed();
    if args.strict && !failed.is_empty() {
        return Err(CliError::Strict(failed.iter().map(|s| s.to_string()).collect()));
    }
    Ok(())
}
