//! Binary PGM (P5) ingestion: a directory of grayscale frames becomes a
//! probability sequence, with sample value `v` mapping to `v / maxval`.
//!
//! Only the binary variant is accepted; ASCII PGM (P2) and the other netpbm
//! types are rejected by name. Samples are one byte up to maxval 255 and two
//! bytes big-endian above that, per the PGM specification.

use std::path::Path;

use crate::error::{Error, Result};
use crate::map::{ProbMap, ProbSequence};

/// Reads every regular file in `dir` as a binary PGM, sorted by filename.
pub fn read_pgm_dir(dir: &Path) -> Result<ProbSequence> {
    let mut paths: Vec<std::path::PathBuf> = std::fs::read_dir(dir)?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::EmptyDirectory(format!(
            "no files in {}",
            dir.display()
        )));
    }

    let mut frames = Vec::with_capacity(paths.len());
    let mut dims: Option<(u32, u32)> = None;
    for path in &paths {
        let name = path.display().to_string();
        let map = parse_pgm(&std::fs::read(path)?, &name)?;
        if let Some((w, h)) = dims {
            if map.width() != w || map.height() != h {
                return Err(Error::MixedDimensions(format!(
                    "{name} is {}x{}, earlier frames are {w}x{h}",
                    map.width(),
                    map.height()
                )));
            }
        } else {
            dims = Some((map.width(), map.height()));
        }
        frames.push(map);
    }
    ProbSequence::new(frames)
}

/// Parses one binary PGM file. `name` labels error messages.
pub fn parse_pgm(bytes: &[u8], name: &str) -> Result<ProbMap> {
    let mut cursor = Cursor { bytes, at: 0, name };

    let magic = cursor.take(2)?;
    if magic != b"P5" {
        return Err(Error::UnsupportedFormat(format!(
            "{name}: magic {:?} is not binary PGM (P5)",
            String::from_utf8_lossy(magic)
        )));
    }
    let width = cursor.header_number("width")?;
    let height = cursor.header_number("height")?;
    let maxval = cursor.header_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{name}: declares {width}x{height}"
        )));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::UnsupportedFormat(format!(
            "{name}: maxval {maxval} outside 1..=65535"
        )));
    }
    // Exactly one whitespace byte separates the header from the samples.
    let sep = cursor.take(1)?;
    if !sep[0].is_ascii_whitespace() {
        return Err(Error::UnsupportedFormat(format!(
            "{name}: expected whitespace before sample data, found byte {:#04x}",
            sep[0]
        )));
    }

    let cells = width as usize * height as usize;
    let wide = maxval > 255;
    let sample_len = if wide { 2 } else { 1 };
    let samples = cursor.take(cells * sample_len)?;
    if cursor.at != bytes.len() {
        return Err(Error::TrailingData(format!(
            "{name}: {} bytes past the sample data",
            bytes.len() - cursor.at
        )));
    }

    let mut values = Vec::with_capacity(cells);
    for i in 0..cells {
        let raw = if wide {
            u16::from_be_bytes([samples[2 * i], samples[2 * i + 1]]) as u32
        } else {
            samples[i] as u32
        };
        if raw > maxval {
            return Err(Error::ValueOutOfRange(format!(
                "{name}: sample {raw} at pixel {i} exceeds maxval {maxval}"
            )));
        }
        values.push(raw as f64 / maxval as f64);
    }
    ProbMap::new(width, height, values)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    at: usize,
    name: &'a str,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.at + n > self.bytes.len() {
            return Err(Error::TruncatedFile(format!(
                "{}: needed {n} bytes at offset {}, file has {}",
                self.name,
                self.at,
                self.bytes.len()
            )));
        }
        let slice = &self.bytes[self.at..self.at + n];
        self.at += n;
        Ok(slice)
    }

    /// Skips whitespace and `#` comment lines, then reads a decimal field.
    fn header_number(&mut self, what: &str) -> Result<u32> {
        loop {
            match self.bytes.get(self.at) {
                Some(b'#') => {
                    while let Some(&b) = self.bytes.get(self.at) {
                        self.at += 1;
                        if b == b'\n' {
                            break;
                        }
                    }
                }
                Some(b) if b.is_ascii_whitespace() => self.at += 1,
                _ => break,
            }
        }
        let start = self.at;
        while matches!(self.bytes.get(self.at), Some(b) if b.is_ascii_digit()) {
            self.at += 1;
        }
        if self.at == start {
            return Err(Error::TruncatedFile(format!(
                "{}: missing {what} in header at offset {start}",
                self.name
            )));
        }
        std::str::from_utf8(&self.bytes[start..self.at])
            .expect("digits are utf-8")
            .parse()
            .map_err(|_| {
                Error::UnsupportedFormat(format!("{}: {what} does not fit in u32", self.name))
            })
    }
}
