//! Plot-ready CSV tables.
//!
//! | file            | columns                              |
//! |-----------------|--------------------------------------|
//! | `acf.csv`       | `lag_s,acf`                          |
//! | `intervals.csv` | `bin_start_s,bin_center_s,count`     |
//! | `bytes.csv`     | `value,count` (n-bit block values)   |
//! | `runs.csv`      | `length,zero_runs,one_runs`          |

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qrng_core::analysis::{AcfCurve, BlockDistribution, IntervalHistogram, RunLengthDistribution, TestReport};
use qrng_core::sampler::write_atomic;

use crate::error::CliError;

/// A parsed CSV table: header names and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or("empty CSV")?;
        let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| format!("row {}: not numeric", i + 1))?;
            if row.len() != columns.len() {
                return Err(format!("row {}: expected {} cells, got {}", i + 1, columns.len(), row.len()));
            }
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }
}

pub fn read_table(path: &Path) -> Result<Table, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Table::parse(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

pub fn acf_table(curve: &AcfCurve) -> Table {
    let mut t = Table::new(&["lag_s", "acf"]);
    t.rows = curve.lags.iter().zip(&curve.values).map(|(&l, &v)| vec![l, v]).collect();
    t
}

pub fn interval_table(hist: &IntervalHistogram) -> Table {
    let mut t = Table::new(&["bin_start_s", "bin_center_s", "count"]);
    t.rows = hist
        .counts
        .iter()
        .enumerate()
        .map(|(k, &c)| vec![k as f64 * hist.bin_width, hist.bin_center(k), c as f64])
        .collect();
    t
}

pub fn block_table(dist: &BlockDistribution) -> Table {
    let mut t = Table::new(&["value", "count"]);
    t.rows = dist.counts.iter().enumerate().map(|(v, &c)| vec![v as f64, c as f64]).collect();
    t
}

pub fn run_table(runs: &RunLengthDistribution) -> Table {
    let mut t = Table::new(&["length", "zero_runs", "one_runs"]);
    let longest = runs.zeros.len().max(runs.ones.len());
    t.rows = (0..longest)
        .map(|i| {
            let z = runs.zeros.get(i).copied().unwrap_or(0);
            let o = runs.ones.get(i).copied().unwrap_or(0);
            vec![(i + 1) as f64, z as f64, o as f64]
        })
        .collect();
    t
}

/// Writes every table the report has data for; returns the files written.
pub fn write_plot_data(report: &TestReport, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tables = Vec::new();
    if let Some(s) = report.acf.as_ref().and_then(|t| t.statistics.as_ref()) {
        tables.push(("acf.csv", acf_table(&s.curve)));
    }
    if let Some(s) = report.intervals.as_ref().and_then(|t| t.statistics.as_ref()) {
        tables.push(("intervals.csv", interval_table(&s.histogram)));
    }
    if let Some(s) = &report.blocks.statistics {
        tables.push(("bytes.csv", block_table(s)));
    }
    if let Some(s) = &report.runs.statistics {
        tables.push(("runs.csv", run_table(&s.distribution)));
    }
    let mut written = Vec::new();
    for (name, table) in tables {
        let path = dir.join(name);
        write_atomic(&path, table.to_csv().as_bytes()).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
