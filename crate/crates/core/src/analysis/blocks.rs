use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::BitStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BitBias {
    pub bit_count: u64,
    pub ones: u64,
    /// Fraction of ones.
    pub fraction: f64,
    /// Binomial standard error √(f(1-f)/N).
    pub std_error: f64,
}

pub fn bit_bias(bits: &BitStream) -> Result<BitBias> {
    if bits.is_empty() {
        return Err(Error::Degenerate("empty bit stream".into()));
    }
    let n = bits.len();
    let ones = bits.count_ones();
    let f = ones as f64 / n as f64;
    Ok(BitBias {
        bit_count: n,
        ones,
        fraction: f,
        std_error: (f * (1.0 - f) / n as f64).sqrt(),
    })
}

/// Distribution of non-overlapping `n`-bit blocks. Within a block the first
/// bit is the most significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDistribution {
    pub block_length: u32,
    pub blocks: u64,
    /// Count of each block value `0..2^n`.
    pub counts: Vec<u64>,
    pub mean: f64,
    /// Shannon entropy in bits, with 0·log 0 = 0.
    pub entropy: f64,
}

impl BlockDistribution {
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        let total = self.blocks as f64;
        self.counts.iter().map(move |&c| c as f64 / total)
    }

    /// Mean block value of a uniform source, (2ⁿ - 1)/2.
    pub fn ideal_mean(&self) -> f64 {
        ((1u64 << self.block_length) - 1) as f64 / 2.0
    }
}

pub const MAX_BLOCK_LENGTH: u32 = 24;

pub fn block_distribution(bits: &BitStream, n: u32) -> Result<BlockDistribution> {
    if !(1..=MAX_BLOCK_LENGTH).contains(&n) {
        return Err(Error::Parameter(format!(
            "block length must lie in 1..={MAX_BLOCK_LENGTH}, got {n}"
        )));
    }
    if bits.len() < n as u64 {
        return Err(Error::Degenerate(format!(
            "{} bits cannot form a single {n}-bit block",
            bits.len()
        )));
    }
    let mut counts = vec![0u64; 1 << n];
    let blocks = bits.len() / n as u64;
    if n == 8 {
        // Byte-aligned: reverse the LSB-first packing to get MSB-first values.
        for &b in &bits.as_bytes()[..blocks as usize] {
            counts[b.reverse_bits() as usize] += 1;
        }
    } else {
        let mut value = 0usize;
        let mut filled = 0;
        for bit in bits.iter().take((blocks * n as u64) as usize) {
            value = value << 1 | bit as usize;
            filled += 1;
            if filled == n {
                counts[value] += 1;
                value = 0;
                filled = 0;
            }
        }
    }
    let total = blocks as f64;
    let mean = counts
        .iter()
        .enumerate()
        .map(|(v, &c)| v as f64 * c as f64)
        .sum::<f64>()
        / total;
    let entropy = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>()
        .clamp(0.0, n as f64);
    Ok(BlockDistribution {
        block_length: n,
        blocks,
        counts,
        mean,
        entropy,
    })
}
