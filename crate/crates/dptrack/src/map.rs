//! Probability maps, sequences, and the data model shared by the tracker.
//!
//! A [`ProbMap`] is one frame's dense grid of object-probability scores in
//! `[0, 1]`, stored row-major. Coordinates follow image raster order:
//! `x` is the column, `y` is the row, origin at the top-left. All types are
//! immutable after construction and validate their invariants on every
//! construction path.

use crate::error::{Error, Result};

/// A pixel location. `x` is the column, `y` is the row, both 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PixelCoord {
    pub x: u32,
    pub y: u32,
}

impl PixelCoord {
    pub fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    /// Chebyshev (chessboard) distance to another coordinate.
    pub fn chebyshev(&self, other: &PixelCoord) -> u32 {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }
}

// Candidate ordering used by every tie-break in the crate: smallest (y, x)
// wins. Deliberately row-major so that a plain raster scan with a strict
// `>` comparison realizes it.
impl Ord for PixelCoord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for PixelCoord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for PixelCoord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// One frame's dense grid of probability scores in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbMap {
    width: u32,
    height: u32,
    values: Vec<f64>,
}

impl ProbMap {
    /// Builds a validated map. `values` is row-major, length `width * height`.
    pub fn new(width: u32, height: u32, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DimensionMismatch(format!(
                "map dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize;
        if values.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "expected {expected} values for a {width}x{height} map, got {}",
                values.len()
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::ValueOutOfRange(format!(
                    "value {v} at index {i} (row {}, col {}) outside [0, 1]",
                    i / width as usize,
                    i % width as usize
                )));
            }
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Row-major backing slice.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn contains(&self, p: PixelCoord) -> bool {
        p.x < self.width && p.y < self.height
    }

    pub fn index_of(&self, p: PixelCoord) -> usize {
        p.y as usize * self.width as usize + p.x as usize
    }

    /// Value at an in-bounds coordinate. Panics on out-of-bounds access.
    pub fn value_at(&self, p: PixelCoord) -> f64 {
        self.values[self.index_of(p)]
    }

    /// Location of the maximum value; ties resolve to the smallest (y, x).
    pub fn argmax(&self) -> PixelCoord {
        let mut best = 0usize;
        let mut best_val = self.values[0];
        for (i, &v) in self.values.iter().enumerate().skip(1) {
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        PixelCoord::new(
            (best % self.width as usize) as u32,
            (best / self.width as usize) as u32,
        )
    }
}

/// A temporally ordered stack of equally sized probability maps.
/// Index 0 is the first video frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbSequence {
    frames: Vec<ProbMap>,
}

impl ProbSequence {
    pub fn new(frames: Vec<ProbMap>) -> Result<Self> {
        let first = frames.first().ok_or(Error::EmptySequence)?;
        let (w, h) = (first.width(), first.height());
        for (t, frame) in frames.iter().enumerate() {
            if frame.width() != w || frame.height() != h {
                return Err(Error::MixedDimensions(format!(
                    "frame {t} is {}x{}, expected {w}x{h}",
                    frame.width(),
                    frame.height()
                )));
            }
        }
        Ok(Self { frames })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one frame
    }

    pub fn width(&self) -> u32 {
        self.frames[0].width()
    }

    pub fn height(&self) -> u32 {
        self.frames[0].height()
    }

    pub fn frame(&self, t: usize) -> &ProbMap {
        &self.frames[t]
    }

    pub fn frames(&self) -> &[ProbMap] {
        &self.frames
    }
}

/// Maximum per-frame displacement, in pixels, along each axis.
///
/// The transition neighborhood of a point is the square Chebyshev ball of
/// this radius, clipped to the map bounds. No wraparound, no padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlopeConstraint {
    radius: u32,
}

impl SlopeConstraint {
    pub fn new(radius: u32) -> Self {
        Self { radius }
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Inclusive bounds `(x0, x1, y0, y1)` of the neighborhood of `p`
    /// clipped to a `width x height` grid.
    pub fn clipped(&self, p: PixelCoord, width: u32, height: u32) -> (u32, u32, u32, u32) {
        let x0 = p.x.saturating_sub(self.radius);
        let x1 = p.x.saturating_add(self.radius).min(width - 1);
        let y0 = p.y.saturating_sub(self.radius);
        let y1 = p.y.saturating_add(self.radius).min(height - 1);
        (x0, x1, y0, y1)
    }

    pub fn allows(&self, a: PixelCoord, b: PixelCoord) -> bool {
        a.chebyshev(&b) <= self.radius
    }
}

/// One tracked location per frame plus the cumulative path score.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackPath {
    pub points: Vec<PixelCoord>,
    pub score: f64,
}

/// Per-frame annotated center locations. Real-valued because benchmark
/// centers derive from bounding-box midpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub centers: Vec<(f64, f64)>,
}

impl GroundTruth {
    pub fn new(centers: Vec<(f64, f64)>) -> Self {
        Self { centers }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

/// Running per-frame cumulative scores along `path`, accumulated in
/// ascending frame order; the last entry equals [`path_score`] bit-for-bit.
pub fn running_scores(seq: &ProbSequence, path: &[PixelCoord]) -> Result<Vec<f64>> {
    if path.len() != seq.len() {
        return Err(Error::LengthMismatch {
            expected: seq.len(),
            actual: path.len(),
        });
    }
    let mut out = Vec::with_capacity(path.len());
    let mut score = 0.0;
    for (t, &p) in path.iter().enumerate() {
        let frame = seq.frame(t);
        if !frame.contains(p) {
            return Err(Error::OutOfBounds(format!(
                "path point {p} at frame {t} outside {}x{} map",
                frame.width(),
                frame.height()
            )));
        }
        score += frame.value_at(p);
        out.push(score);
    }
    Ok(out)
}

/// Sum of per-frame map values along `path`, accumulated in ascending frame
/// order so results are bit-deterministic.
pub fn path_score(seq: &ProbSequence, path: &[PixelCoord]) -> Result<f64> {
    if path.len() != seq.len() {
        return Err(Error::LengthMismatch {
            expected: seq.len(),
            actual: path.len(),
        });
    }
    let mut score = 0.0;
    for (t, &p) in path.iter().enumerate() {
        let frame = seq.frame(t);
        if !frame.contains(p) {
            return Err(Error::OutOfBounds(format!(
                "path point {p} at frame {t} outside {}x{} map",
                frame.width(),
                frame.height()
            )));
        }
        score += frame.value_at(p);
    }
    Ok(score)
}
