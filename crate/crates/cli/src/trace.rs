//! Transition-trace CSV: two header lines `# initial_state=<0|1>` and
//! `# duration=<s>`, then one transition time in seconds per line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qrng_core::sampler::write_atomic;
use qrng_core::TransitionSequence;

use crate::error::CliError;

pub fn format_trace(seq: &TransitionSequence) -> String {
    let mut out = String::with_capacity(24 * (seq.len() + 2));
    writeln!(out, "# initial_state={}", u8::from(seq.initial_state())).unwrap();
    writeln!(out, "# duration={}", seq.duration()).unwrap();
    for t in seq.transition_times() {
        // Display prints the shortest decimal that round-trips.
        writeln!(out, "{t}").unwrap();
    }
    out
}

pub fn write_trace(seq: &TransitionSequence, path: &Path) -> Result<(), CliError> {
    write_atomic(path, format_trace(seq).as_bytes()).map_err(|e| CliError::io(path, e))
}

pub fn parse_trace(text: &str) -> Result<TransitionSequence, String> {
    let mut initial = None;
    let mut duration = None;
    let mut times = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            if let Some((key, value)) = header.split_once('=') {
                let value = value.trim();
                match key.trim() {
                    "initial_state" => {
                        initial = Some(match value {
                            "0" => false,
                            "1" => true,
                            _ => return Err(format!("line {}: initial_state must be 0 or 1", i + 1)),
                        })
                    }
                    "duration" => {
                        duration = Some(
                            value
                                .parse::<f64>()
                                .map_err(|_| format!("line {}: invalid duration {value:?}", i + 1))?,
                        )
                    }
                    _ => {}
                }
            }
            continue;
        }
        let t = line
            .parse::<f64>()
            .map_err(|_| format!("line {}: invalid transition time {line:?}", i + 1))?;
        times.push(t);
    }
    let initial = initial.ok_or("missing '# initial_state=' header")?;
    let duration = duration.ok_or("missing '# duration=' header")?;
    TransitionSequence::new(initial, times, duration).map_err(|e| e.to_string())
}

pub fn read_trace(path: &Path) -> Result<TransitionSequence, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_trace(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}
