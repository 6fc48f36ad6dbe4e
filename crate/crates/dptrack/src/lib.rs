//! Globally optimal single-object tracking over probability-map sequences.
//!
//! Given one dense probability map per video frame (from any upstream
//! detector), the tracker finds the pixel path through all frames that
//! maximizes the summed probability, subject to a per-frame slope
//! constraint on movement. Because the optimum is global over the whole
//! sequence, the track bridges occlusions that defeat greedy frame-by-frame
//! methods; a greedy baseline is included for exactly that comparison.
//!
//! The pieces:
//!
//! - [`map`] — probability maps, sequences, tracks, ground truth.
//! - [`dp`] — the forward cumulative pass, backtracking, the greedy
//!   baseline, and an exhaustive oracle for verification.
//! - [`synth`] — parameterized synthetic sequences (moving Gaussian blobs,
//!   occlusion windows, distractors) with exact ground truth.
//! - [`eval`] — center-location error, precision curves, one-pass
//!   evaluation, DP-vs-greedy comparisons.
//! - [`io`] — the pmseq container, binary PGM ingestion, scenario files,
//!   and CSV reports.
//!
//! Everything is deterministic: fixed tie-breaks, a fixed accumulation
//! order for scores, and seeded noise substreams, so identical inputs
//! produce bit-identical outputs.

pub mod dp;
pub mod error;
pub mod eval;
pub mod io;
pub mod map;
pub mod synth;

pub use dp::{brute_force_track, dp_backtrack, dp_forward, greedy_track, track, Anchor, DpTable};
pub use error::{Error, Result};
pub use eval::{center_errors, precision_curve, run_ope, EvalReport, PrecisionCurve};
pub use map::{
    path_score, GroundTruth, PixelCoord, ProbMap, ProbSequence, SlopeConstraint, TrackPath,
};
pub use synth::{render_scenario, BlobSpec, OcclusionWindow, Scenario};
