use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Description of where a bit stream came from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BitMeta {
    pub origin: String,
    pub period_s: Option<f64>,
    pub seed: Option<u64>,
}

/// Packed bits, least significant bit first within each byte: bit `k` is
/// bit `k % 8` of byte `k / 8`. Unused bits of the last byte are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BitStream {
    bytes: Vec<u8>,
    bit_count: u64,
    pub meta: BitMeta,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: u64) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8) as usize),
            ..Self::default()
        }
    }

    /// Wraps packed bytes; fails if the length does not match `bit_count`
    /// or padding bits are set.
    pub fn from_bytes(bytes: Vec<u8>, bit_count: u64) -> Result<Self> {
        if bytes.len() as u64 != bit_count.div_ceil(8) {
            return Err(Error::Format(format!(
                "{} bytes cannot hold exactly {} bits",
                bytes.len(),
                bit_count
            )));
        }
        let used = (bit_count % 8) as u32;
        if used != 0 {
            let last = *bytes.last().expect("non-empty when bits remain");
            if last >> used != 0 {
                return Err(Error::Format("padding bits of the last byte are not zero".into()));
            }
        }
        Ok(Self {
            bytes,
            bit_count,
            meta: BitMeta::default(),
        })
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut out = Self::new();
        out.extend(bits);
        out
    }

    pub fn with_origin(mut self, origin: impl Into<String>) -> Self {
        self.meta.origin = origin.into();
        self
    }

    pub fn push(&mut self, bit: bool) {
        let offset = (self.bit_count % 8) as u32;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 1 << offset;
        }
        self.bit_count += 1;
    }

    pub fn get(&self, index: u64) -> Option<bool> {
        (index < self.bit_count).then(|| self.bytes[(index / 8) as usize] >> (index % 8) & 1 == 1)
    }

    pub fn len(&self) -> u64 {
        self.bit_count
    }

    pub fn is_empty(&self) -> bool {
        self.bit_count == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn count_ones(&self) -> u64 {
        self.bytes.iter().map(|b| b.count_ones() as u64).sum()
    }

    pub fn iter(&self) -> Bits<'_> {
        Bits {
            stream: self,
            index: 0,
        }
    }
}

impl Extend<bool> for BitStream {
    fn extend<I: IntoIterator<Item = bool>>(&mut self, iter: I) {
        for bit in iter {
            self.push(bit);
        }
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bits(iter)
    }
}

#[derive(Debug, Clone)]
pub struct Bits<'a> {
    stream: &'a BitStream,
    index: u64,
}

impl Iterator for Bits<'_> {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        let bit = self.stream.get(self.index)?;
        self.index += 1;
        Some(bit)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.stream.bit_count - self.index) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Bits<'_> {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn twelve_bits_use_two_bytes() {
        let bits = BitStream::from_bits([true; 12]);
        assert_eq!(bits.as_bytes(), &[0xFF, 0x0F]);
        assert_eq!(bits.len(), 12);
    }

    #[test]
    fn lsb_first() {
        let bits = BitStream::from_bits([true, false, false, false, false, false, false, false, false, true]);
        assert_eq!(bits.as_bytes(), &[0x01, 0x02]);
    }

    #[test]
    fn from_bytes_checks_layout() {
        assert!(BitStream::from_bytes(vec![0xFF, 0x0F], 12).is_ok());
        assert!(BitStream::from_bytes(vec![0xFF, 0x1F], 12).is_err());
        assert!(BitStream::from_bytes(vec![0xFF], 12).is_err());
        assert!(BitStream::from_bytes(vec![], 0).is_ok());
    }

    proptest! {
        #[test]
        fn packed_bits_read_back(bits in proptest::collection::vec(any::<bool>(), 0..300)) {
            let stream = BitStream::from_bits(bits.iter().copied());
            prop_assert_eq!(stream.len(), bits.len() as u64);
            prop_assert_eq!(stream.as_bytes().len(), bits.len().div_ceil(8));
            for (k, &b) in bits.iter().enumerate() {
                prop_assert_eq!(stream.get(k as u64), Some(b));
            }
            prop_assert_eq!(stream.iter().collect::<Vec<_>>(), bits.clone());
            prop_assert_eq!(stream.count_ones(), bits.iter().filter(|&&b| b).count() as u64);
            let again = BitStream::from_bytes(stream.as_bytes().to_vec(), stream.len()).unwrap();
            prop_assert_eq!(again.as_bytes(), stream.as_bytes());
        }
    }
}
