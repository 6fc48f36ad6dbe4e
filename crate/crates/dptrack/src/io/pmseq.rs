//! The pmseq container: a probability-map sequence in one binary file.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! offset 0   magic "PMSQ1" (5 bytes)
//! offset 5   u32 T (frame count), u32 H (rows), u32 W (columns)
//! offset 17  T*H*W f32 values, frame-major then row-major
//! ```
//!
//! The byte length must equal `17 + 4*T*H*W` exactly and every float must be
//! finite and in [0, 1]. Parsing rejects malformed input outright, naming
//! the offending location; it never truncates and continues.

use crate::error::{Error, Result};
use crate::map::{ProbMap, ProbSequence};

pub const MAGIC: &[u8; 5] = b"PMSQ1";
const HEADER_LEN: usize = 5 + 12;

/// Parses a pmseq byte buffer into a validated sequence.
pub fn read_pmseq(bytes: &[u8]) -> Result<ProbSequence> {
    if bytes.len() < MAGIC.len() {
        return Err(Error::TruncatedFile(format!(
            "{} bytes is too short for the 5-byte magic",
            bytes.len()
        )));
    }
    if &bytes[..MAGIC.len()] != MAGIC {
        return Err(Error::BadMagic(format!(
            "expected {:?}, found {:?}",
            String::from_utf8_lossy(MAGIC),
            String::from_utf8_lossy(&bytes[..MAGIC.len()])
        )));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::TruncatedFile(format!(
            "{} bytes is too short for the 17-byte header",
            bytes.len()
        )));
    }
    let read_u32 = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    let frames = read_u32(5);
    let height = read_u32(9);
    let width = read_u32(13);

    if frames == 0 {
        return Err(Error::EmptySequence);
    }
    if width == 0 || height == 0 {
        return Err(Error::DimensionMismatch(format!(
            "header declares {width}x{height} maps"
        )));
    }

    let cells = width as u64 * height as u64;
    let expected = HEADER_LEN as u64 + 4 * frames as u64 * cells;
    let actual = bytes.len() as u64;
    if actual < expected {
        return Err(Error::TruncatedFile(format!(
            "expected {expected} bytes for {frames} frames of {width}x{height}, got {actual}"
        )));
    }
    if actual > expected {
        return Err(Error::TrailingData(format!(
            "{} bytes past the declared {expected}",
            actual - expected
        )));
    }

    let mut maps = Vec::with_capacity(frames as usize);
    let mut at = HEADER_LEN;
    for t in 0..frames {
        let mut values = Vec::with_capacity(cells as usize);
        for i in 0..cells {
            let v = f32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::ValueOutOfRange(format!(
                    "value {v} at byte offset {at} (frame {t}, row {}, col {}) outside [0, 1]",
                    i / width as u64,
                    i % width as u64
                )));
            }
            values.push(v as f64);
            at += 4;
        }
        maps.push(ProbMap::new(width, height, values).expect("validated above"));
    }
    ProbSequence::new(maps)
}

/// Serializes a sequence into pmseq bytes. Values are stored as f32; a
/// sequence read from a pmseq file writes back bit-identically.
pub fn write_pmseq(seq: &ProbSequence) -> Vec<u8> {
    let cells = seq.width() as usize * seq.height() as usize;
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * seq.len() * cells);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(seq.len() as u32).to_le_bytes());
    out.extend_from_slice(&seq.height().to_le_bytes());
    out.extend_from_slice(&seq.width().to_le_bytes());
    for frame in seq.frames() {
        for &v in frame.values() {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    out
}

pub fn read_pmseq_file(path: &std::path::Path) -> Result<ProbSequence> {
    read_pmseq(&std::fs::read(path)?)
}

pub fn write_pmseq_file(seq: &ProbSequence, path: &std::path::Path) -> Result<()> {
    Ok(std::fs::write(path, write_pmseq(seq))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_seq() -> ProbSequence {
        let frames = vec![
            ProbMap::new(3, 2, vec![0.0, 0.25, 0.5, 0.75, 1.0, 0.125]).unwrap(),
            ProbMap::new(3, 2, vec![1.0, 0.5, 0.0, 0.0625, 0.875, 0.3125]).unwrap(),
        ];
        ProbSequence::new(frames).unwrap()
    }

    fn header(frames: u32, height: u32, width: u32) -> Vec<u8> {
        let mut bytes = MAGIC.to_vec();
        bytes.extend_from_slice(&frames.to_le_bytes());
        bytes.extend_from_slice(&height.to_le_bytes());
        bytes.extend_from_slice(&width.to_le_bytes());
        bytes
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let seq = sample_seq();
        let bytes = write_pmseq(&seq);
        let back = read_pmseq(&bytes).unwrap();
        assert_eq!(back, seq);
        assert_eq!(write_pmseq(&back), bytes);
    }

    #[test]
    fn wrong_magic_rejected() {
        let mut bytes = write_pmseq(&sample_seq());
        bytes[4] = b'0'; // "PMSQ0"
        assert_eq!(read_pmseq(&bytes).unwrap_err().code(), "BadMagic");
    }

    #[test]
    fn short_magic_rejected() {
        assert_eq!(read_pmseq(b"PMS").unwrap_err().code(), "TruncatedFile");
    }

    #[test]
    fn truncated_header_rejected() {
        let bytes = &header(1, 1, 1)[..10];
        assert_eq!(read_pmseq(bytes).unwrap_err().code(), "TruncatedFile");
    }

    #[test]
    fn truncated_payload_rejected() {
        let mut bytes = write_pmseq(&sample_seq());
        bytes.truncate(bytes.len() - 3);
        let err = read_pmseq(&bytes).unwrap_err();
        assert_eq!(err.code(), "TruncatedFile");
    }

    #[test]
    fn trailing_bytes_rejected() {
        let mut bytes = write_pmseq(&sample_seq());
        bytes.push(0);
        assert_eq!(read_pmseq(&bytes).unwrap_err().code(), "TrailingData");
    }

    #[test]
    fn zero_frames_rejected() {
        let bytes = header(0, 2, 2);
        assert_eq!(read_pmseq(&bytes).unwrap_err().code(), "EmptySequence");
    }

    #[test]
    fn zero_dims_rejected() {
        let bytes = header(1, 0, 2);
        assert_eq!(read_pmseq(&bytes).unwrap_err().code(), "DimensionMismatch");
    }

    #[test]
    fn out_of_range_value_names_its_offset() {
        // 1x1x2 file with 1.0000001 as the second value: offset 17 + 4 = 21.
        let mut bytes = header(1, 1, 2);
        bytes.extend_from_slice(&0.5f32.to_le_bytes());
        bytes.extend_from_slice(&1.000_000_1f32.to_le_bytes());
        let err = read_pmseq(&bytes).unwrap_err();
        assert_eq!(err.code(), "ValueOutOfRange");
        let msg = err.to_string();
        assert!(msg.contains("offset 21"), "{msg}");
        assert!(msg.contains("frame 0"), "{msg}");
        assert!(msg.contains("col 1"), "{msg}");
    }

    #[test]
    fn non_finite_values_rejected() {
        for bad in [f32::NAN, f32::INFINITY, f32::NEG_INFINITY, -0.001f32] {
            let mut bytes = header(1, 1, 1);
            bytes.extend_from_slice(&bad.to_le_bytes());
            assert_eq!(
                read_pmseq(&bytes).unwrap_err().code(),
                "ValueOutOfRange",
                "value {bad}"
            );
        }
    }
}
