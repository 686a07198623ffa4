use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::BitStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub points: u64,
    pub inside: u64,
    pub bits_per_coordinate: u32,
}

/// Quarter-circle estimate of π.
///
/// Consecutive non-overlapping `b`-bit words (first bit most significant)
/// give x then y; the point (x/2^b, y/2^b) is inside when u² + v² < 1.
/// Leftover bits that do not complete a point are ignored.
pub fn monte_carlo_pi(bits: &BitStream, b: u32) -> Result<PiEstimate> {
    if !(4..=32).contains(&b) {
        return Err(Error::Parameter(format!(
            "bits per coordinate must lie in 4..=32, got {b}"
        )));
    }
    let points = bits.len() / (2 * b as u64);
    if points == 0 {
        return Err(Error::Degenerate(format!(
            "{} bits do not form a single {}-bit point",
            bits.len(),
            2 * b
        )));
    }
    let limit = 1u128 << (2 * b);
    let mut it = bits.iter();
    let mut word = || it.by_ref().take(b as usize).fold(0u128, |acc, bit| acc << 1 | bit as u128);
    let mut inside = 0u64;
    for _ in 0..points {
        let x = word();
        let y = word();
        if x * x + y * y < limit {
            inside += 1;
        }
    }
    let q = inside as f64 / points as f64;
    Ok(PiEstimate {
        estimate: 4.0 * q,
        std_error: 4.0 * (q * (1.0 - q) / points as f64).sqrt(),
        points,
        inside,
        bits_per_coordinate: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_is_four() {
        let bits = BitStream::from_bits(vec![false; 640]);
        let est = monte_carlo_pi(&bits, 16).unwrap();
        assert_eq!(est.points, 20);
        assert_eq!(est.estimate, 4.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn all_one_is_outside() {
        let bits = BitStream::from_bits(vec![true; 64]);
        assert_eq!(monte_carlo_pi(&bits, 8).unwrap().estimate, 0.0);
    }

    #[test]
    fn exhaustive_grid() {
        // Every (x, y) pair on a 16×16 grid exactly once.
        let b = 4u32;
        let mut bits = Vec::new();
        let mut inside = 0;
        for x in 0..16u32 {
            for y in 0..16u32 {
                for v in [x, y] {
                    for k in (0..b).rev() {
                        bits.push(v >> k & 1 == 1);
                    }
                }
                if x * x + y * y < 256 {
                    inside += 1;
                }
            }
        }
        let est = monte_carlo_pi(&BitStream::from_bits(bits), b).unwrap();
        assert_eq!(est.points, 256);
        assert_eq!(est.inside, inside);
    }

    #[test]
    fn leftover_bits_are_ignored() {
        let base: Vec<bool> = (0..320).map(|k| (k * 37 + 11) % 7 < 3).collect();
        let a = monte_carlo_pi(&BitStream::from_bits(base.iter().copied()), 16).unwrap();
        let mut longer = base.clone();
        longer.extend((0..31).map(|k| k % 2 == 0));
        let b = monte_carlo_pi(&BitStream::from_bits(longer), 16).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parameter_checks() {
        let bits = BitStream::from_bits(vec![false; 60]);
        assert!(matches!(monte_carlo_pi(&bits, 3), Err(Error::Parameter(_))));
        assert!(matches!(monte_carlo_pi(&bits, 33), Err(Error::Parameter(_))));
        assert!(matches!(monte_carlo_pi(&bits, 32), Err(Error::Degenerate(_))));
        assert_eq!(monte_carlo_pi(&bits, 16).unwrap().points, 1);
    }
}
