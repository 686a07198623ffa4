use std::f64::consts::LN_10;

use serde::{Deserialize, Serialize};

use super::regression;
use crate::error::{Error, Result};
use crate::sampler::BitStream;

/// Lengths with fewer runs than this are left out of the slope fit.
pub const MIN_RUN_COUNT: u64 = 10;

/// Slope of log₁₀(count) against run length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSlope {
    pub slope: f64,
    pub std_error: f64,
    /// Shortest and longest run length used.
    pub lengths: (u64, u64),
    pub points: usize,
}

/// Counts of maximal runs; `zeros[n - 1]` is the number of zero-runs of
/// length `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLengthDistribution {
    pub zeros: Vec<u64>,
    pub ones: Vec<u64>,
    pub zero_slope: Option<RunSlope>,
    pub one_slope: Option<RunSlope>,
}

impl RunLengthDistribution {
    /// Probability of a one implied by each slope.
    ///
    /// Runs of a symbol with probability q have length distribution ∝ qⁿ, so
    /// the zero-run slope is log₁₀(1 - p) and the one-run slope is log₁₀ p.
    /// Returns (estimate from zero-runs, estimate from one-runs).
    pub fn implied_ones_probability(&self) -> (Option<f64>, Option<f64>) {
        (
            self.zero_slope.map(|s| 1.0 - 10f64.powf(s.slope)),
            self.one_slope.map(|s| 10f64.powf(s.slope)),
        )
    }
}

pub fn run_length_counts(bits: &BitStream) -> Result<RunLengthDistribution> {
    if bits.len() < 2 {
        return Err(Error::Degenerate(format!(
            "need at least 2 bits for run statistics, got {}",
            bits.len()
        )));
    }
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    let mut iter = bits.iter();
    let mut current = iter.next().expect("non-empty");
    let mut length = 1usize;
    let mut close = |symbol: bool, length: usize| {
        let table = if symbol { &mut ones } else { &mut zeros };
        if table.len() < length {
            table.resize(length, 0);
        }
        table[length - 1] += 1;
    };
    for bit in iter {
        if bit == current {
            length += 1;
        } else {
            close(current, length);
            current = bit;
            length = 1;
        }
    }
    close(current, length);
    Ok(RunLengthDistribution {
        zero_slope: fit_slope(&zeros),
        one_slope: fit_slope(&ones),
        zeros,
        ones,
    })
}

/// Fit of ln(count) against length, weighted by count (the inverse Poisson
/// variance of the logarithm), converted to base 10.
fn fit_slope(counts: &[u64]) -> Option<RunSlope> {
    let (mut x, mut y, mut w) = (Vec::new(), Vec::new(), Vec::new());
    for (i, &c) in counts.iter().enumerate() {
        if c >= MIN_RUN_COUNT {
            x.push((i + 1) as f64);
            y.push((c as f64).ln());
            w.push(c as f64);
        }
    }
    if x.len() < 2 {
        return None;
    }
    let line = regression::weighted(&x, &y, &w)?;
    Some(RunSlope {
        slope: line.slope / LN_10,
        std_error: line.slope_se / LN_10,
        lengths: (x[0] as u64, x[x.len() - 1] as u64),
        points: x.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> BitStream {
        BitStream::from_bits(s.bytes().map(|b| b == b'1'))
    }

    #[test]
    fn hand_decomposition() {
        let d = run_length_counts(&parse("00110")).unwrap();
        assert_eq!(d.zeros, vec![1, 1]);
        assert_eq!(d.ones, vec![0, 1]);
    }

    #[test]
    fn single_symbol_stream() {
        let d = run_length_counts(&parse("1111")).unwrap();
        assert!(d.zeros.is_empty());
        assert_eq!(d.ones, vec![0, 0, 0, 1]);
        assert!(d.zero_slope.is_none());
        assert!(d.one_slope.is_none());
        assert!(matches!(run_length_counts(&parse("1")), Err(Error::Degenerate(_))));
    }

    #[test]
    fn exact_geometric_counts_give_exact_slope() {
        // Counts halve with each extra bit; length 10 (count 8) is dropped.
        let zeros: Vec<u64> = (0..10).map(|n| 4096 >> n).collect();
        let s = fit_slope(&zeros).unwrap();
        assert!((s.slope + 2f64.log10()).abs() < 1e-12);
        assert_eq!(s.lengths, (1, 9));
    }

    #[test]
    fn implied_probability() {
        let mk = |slope| Some(RunSlope { slope, std_error: 0.0, lengths: (1, 2), points: 2 });
        let d = RunLengthDistribution {
            zeros: vec![],
            ones: vec![],
            zero_slope: mk(0.4f64.log10()),
            one_slope: mk(0.6f64.log10()),
        };
        let (a, b) = d.implied_ones_probability();
        assert!((a.unwrap() - 0.6).abs() < 1e-12);
        assert!((b.unwrap() - 0.6).abs() < 1e-12);
    }
}
