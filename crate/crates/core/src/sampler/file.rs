use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use super::bitstream::{BitMeta, BitStream};
use crate::error::{Error, Result};

/// Sidecar holding `key=value` metadata next to a packed bit file.
pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = OsString::from(path.as_os_str());
    s.push(".meta");
    PathBuf::from(s)
}

/// Writes `contents` to a temporary sibling file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let mut tmp = OsString::from(path.as_os_str());
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Writes the packed bytes to `path` and the metadata to `<path>.meta`.
pub fn write_bitstream(bits: &BitStream, path: &Path) -> Result<()> {
    let mut meta = String::new();
    writeln!(meta, "bit_count={}", bits.len()).unwrap();
    // Line-oriented format: keep the origin on one line.
    let origin: String = bits
        .meta
        .origin
        .chars()
        .map(|c| if c == '\n' || c == '\r' { ' ' } else { c })
        .collect();
    writeln!(meta, "origin={origin}").unwrap();
    if let Some(period) = bits.meta.period_s {
        writeln!(meta, "period_s={period:e}").unwrap();
    }
    if let Some(seed) = bits.meta.seed {
        writeln!(meta, "seed={seed}").unwrap();
    }
    write_atomic(path, bits.as_bytes())?;
    write_atomic(&meta_path(path), meta.as_bytes())?;
    Ok(())
}

/// Reads a bit file. Without a sidecar every byte counts as 8 bits and the
/// origin is `"unknown"`, so third-party samples can be analyzed directly.
pub fn read_bitstream(path: &Path) -> Result<BitStream> {
    let bytes = fs::read(path)?;
    let meta_file = meta_path(path);
    let text = match fs::read_to_string(&meta_file) {
        Ok(text) => text,
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            let n = bytes.len() as u64 * 8;
            let mut bits = BitStream::from_bytes(bytes, n)?;
            bits.meta.origin = "unknown".into();
            return Ok(bits);
        }
        Err(e) if e.kind() == io::ErrorKind::InvalidData => {
            return Err(Error::Format(format!("{} is not valid text", meta_file.display())));
        }
        Err(e) => return Err(e.into()),
    };
    let (bit_count, meta) = parse_meta(&text)?;
    let mut bits = BitStream::from_bytes(bytes, bit_count)?;
    bits.meta = meta;
    Ok(bits)
}

fn parse_meta(text: &str) -> Result<(u64, BitMeta)> {
    let mut bit_count = None;
    let mut meta = BitMeta::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("sidecar line {}: expected key=value", lineno + 1)))?;
        let bad = |what: &str| Error::Format(format!("sidecar line {}: invalid {what} {value:?}", lineno + 1));
        match key.trim() {
            "bit_count" => bit_count = Some(value.trim().parse::<u64>().map_err(|_| bad("bit_count"))?),
            "origin" => meta.origin = value.to_string(),
            "period_s" => meta.period_s = Some(value.trim().parse::<f64>().map_err(|_| bad("period_s"))?),
            "seed" => meta.seed = Some(value.trim().parse::<u64>().map_err(|_| bad("seed"))?),
            _ => {}
        }
    }
    let bit_count = bit_count.ok_or_else(|| Error::Format("sidecar has no bit_count".into()))?;
    Ok((bit_count, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("qrng-core-file-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn round_trip_with_metadata() {
        let path = scratch("rt.bin");
        let mut bits = BitStream::from_bits((0..1000).map(|k| (k * 7919 + k / 3) % 5 < 2));
        bits.meta = BitMeta {
            origin: "test\nstream".into(),
            period_s: Some(1e-6),
            seed: Some(42),
        };
        write_bitstream(&bits, &path).unwrap();
        let back = read_bitstream(&path).unwrap();
        assert_eq!(back.as_bytes(), bits.as_bytes());
        assert_eq!(back.len(), 1000);
        assert_eq!(back.meta.origin, "test stream");
        assert_eq!(back.meta.period_s, Some(1e-6));
        assert_eq!(back.meta.seed, Some(42));
    }

    #[test]
    fn twelve_bits_file_size() {
        let path = scratch("twelve.bin");
        write_bitstream(&BitStream::from_bits([true; 12]), &path).unwrap();
        let raw = fs::read(&path).unwrap();
        assert_eq!(raw, vec![0xFF, 0x0F]);
    }

    #[test]
    fn missing_sidecar_falls_back() {
        let path = scratch("external.bin");
        fs::write(&path, [1u8, 2, 3]).unwrap();
        let _ = fs::remove_file(meta_path(&path));
        let bits = read_bitstream(&path).unwrap();
        assert_eq!(bits.len(), 24);
        assert_eq!(bits.meta.origin, "unknown");
    }

    #[test]
    fn corrupt_sidecar_is_rejected() {
        let path = scratch("corrupt.bin");
        fs::write(&path, [1u8, 2]).unwrap();
        for meta in ["origin=x\n", "bit_count=abc\n", "garbage\n", "bit_count=40\n", "bit_count=9\n"] {
            fs::write(meta_path(&path), meta).unwrap();
            let res = read_bitstream(&path);
            assert!(matches!(res, Err(Error::Format(_))), "{meta:?}");
        }
        fs::write(meta_path(&path), "# comment\nbit_count=12\n").unwrap();
        assert_eq!(read_bitstream(&path).unwrap().len(), 12);
    }

    #[test]
    fn missing_data_file_is_io_error() {
        assert!(matches!(read_bitstream(&scratch("nope.bin")), Err(Error::Io(_))));
    }
}
