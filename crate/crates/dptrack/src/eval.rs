//! Benchmark-style evaluation: center-location error, precision curves,
//! one-pass evaluation, and DP-vs-greedy comparison over scenario suites.

use crate::dp::{greedy_track, track, Anchor};
use crate::error::{Error, Result};
use crate::map::{GroundTruth, ProbSequence, SlopeConstraint, TrackPath};
use crate::synth::{render_scenario, Scenario};

/// Default threshold grid: 1..=50 px in 1 px steps, covering the customary
/// 20 px report point.
pub const DEFAULT_MAX_THRESHOLD: f64 = 50.0;
pub const DEFAULT_THRESHOLD_STEP: f64 = 1.0;

/// Fraction of frames whose center error falls within each threshold.
/// Thresholds ascend strictly; fractions never decrease.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionCurve {
    thresholds: Vec<f64>,
    fractions: Vec<f64>,
}

impl PrecisionCurve {
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.thresholds
            .iter()
            .copied()
            .zip(self.fractions.iter().copied())
    }
}

/// Per-sequence evaluation summary.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Per-frame Euclidean center errors, in pixels.
    pub errors: Vec<f64>,
    /// Arithmetic mean of the per-frame errors.
    pub average_error: f64,
    pub curve: PrecisionCurve,
    /// Fraction of frames with error <= 20 px.
    pub precision_at_20: f64,
}

/// Per-frame Euclidean distance between tracked points and annotated centers.
pub fn center_errors(path: &TrackPath, gt: &GroundTruth) -> Result<Vec<f64>> {
    if path.points.len() != gt.len() {
        return Err(Error::LengthMismatch {
            expected: gt.len(),
            actual: path.points.len(),
        });
    }
    Ok(path
        .points
        .iter()
        .zip(&gt.centers)
        .map(|(p, &(cx, cy))| {
            let dx = p.x as f64 - cx;
            let dy = p.y as f64 - cy;
            (dx * dx + dy * dy).sqrt()
        })
        .collect())
}

/// Builds the precision curve on thresholds `step, 2*step, ..., max_threshold`.
/// The comparison is inclusive: a frame with error exactly equal to a
/// threshold counts as within it.
pub fn precision_curve(errors: &[f64], max_threshold: f64, step: f64) -> Result<PrecisionCurve> {
    if errors.is_empty() {
        return Err(Error::EmptyInput("no center errors to summarize".into()));
    }
    if step.is_nan() || step <= 0.0 {
        return Err(Error::BadThresholds(format!("step {step} must be > 0")));
    }
    if max_threshold < step {
        return Err(Error::BadThresholds(format!(
            "max threshold {max_threshold} below step {step}"
        )));
    }
    let count = ((max_threshold / step) * (1.0 + 1e-12)).floor() as usize;
    let thresholds: Vec<f64> = (1..=count).map(|k| k as f64 * step).collect();
    let n = errors.len() as f64;
    let fractions = thresholds
        .iter()
        .map(|&tau| errors.iter().filter(|&&e| e <= tau).count() as f64 / n)
        .collect();
    Ok(PrecisionCurve {
        thresholds,
        fractions,
    })
}

/// Fraction of frames with error <= 20 px, computed directly from the
/// errors so it agrees with the curve whenever 20 sits on the grid.
pub fn precision_at_20(errors: &[f64]) -> f64 {
    errors.iter().filter(|&&e| e <= 20.0).count() as f64 / errors.len() as f64
}

/// Full report for a path against ground truth on the given threshold grid.
pub fn evaluate(
    path: &TrackPath,
    gt: &GroundTruth,
    max_threshold: f64,
    step: f64,
) -> Result<EvalReport> {
    let errors = center_errors(path, gt)?;
    let curve = precision_curve(&errors, max_threshold, step)?;
    let average_error = errors.iter().sum::<f64>() / errors.len() as f64;
    let precision_at_20 = precision_at_20(&errors);
    Ok(EvalReport {
        errors,
        average_error,
        curve,
        precision_at_20,
    })
}

/// Rounds a real-valued center to its pixel, failing if it leaves the map.
pub fn rounded_anchor(center: (f64, f64), width: u32, height: u32) -> Result<Anchor> {
    let x = center.0.round();
    let y = center.1.round();
    if x < 0.0 || y < 0.0 || x >= width as f64 || y >= height as f64 {
        return Err(Error::OutOfBounds(format!(
            "ground-truth center ({}, {}) rounds outside {width}x{height} map",
            center.0, center.1
        )));
    }
    Ok(Anchor::at(x as u32, y as u32))
}

/// One-pass evaluation: run the DP tracker once over the sequence and score
/// it. When `initialized`, the tracker is anchored at the rounded frame-0
/// ground-truth center; otherwise it starts free.
pub fn run_ope(
    seq: &ProbSequence,
    gt: &GroundTruth,
    constraint: SlopeConstraint,
    initialized: bool,
) -> Result<EvalReport> {
    if gt.len() != seq.len() {
        return Err(Error::LengthMismatch {
            expected: seq.len(),
            actual: gt.len(),
        });
    }
    let anchor = if initialized {
        Some(rounded_anchor(gt.centers[0], seq.width(), seq.height())?)
    } else {
        None
    };
    let path = track(seq, constraint, anchor)?;
    evaluate(&path, gt, DEFAULT_MAX_THRESHOLD, DEFAULT_THRESHOLD_STEP)
}

/// Reports for both trackers on one scenario, run under identical anchors.
#[derive(Debug, Clone)]
pub struct TrackerComparison {
    pub dp: EvalReport,
    pub greedy: EvalReport,
}

/// Renders each scenario and runs the DP and greedy trackers on it with the
/// same rounded ground-truth anchor. Output order follows scenario order.
pub fn compare_trackers(
    scenarios: &[Scenario],
    constraint: SlopeConstraint,
) -> Result<Vec<TrackerComparison>> {
    scenarios
        .iter()
        .map(|scenario| {
            let (seq, gt) = render_scenario(scenario)?;
            let anchor = rounded_anchor(gt.centers[0], seq.width(), seq.height())?;
            let dp_path = track(&seq, constraint, Some(anchor))?;
            let greedy_path = greedy_track(&seq, constraint, Some(anchor))?;
            Ok(TrackerComparison {
                dp: evaluate(&dp_path, &gt, DEFAULT_MAX_THRESHOLD, DEFAULT_THRESHOLD_STEP)?,
                greedy: evaluate(
                    &greedy_path,
                    &gt,
                    DEFAULT_MAX_THRESHOLD,
                    DEFAULT_THRESHOLD_STEP,
                )?,
            })
        })
        .collect()
}

/// Mean error over frames `first_frame..`, used to score recovery after an
/// occlusion window. With `first_frame == 0` this is the overall average.
pub fn mean_error_from(errors: &[f64], first_frame: usize) -> f64 {
    let tail = &errors[first_frame.min(errors.len())..];
    if tail.is_empty() {
        return 0.0;
    }
    tail.iter().sum::<f64>() / tail.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::brute_force_track;
    use crate::map::PixelCoord;
    use crate::synth::BlobSpec;

    fn path_of(coords: &[(u32, u32)]) -> TrackPath {
        TrackPath {
            points: coords.iter().map(|&(x, y)| PixelCoord::new(x, y)).collect(),
            score: 0.0,
        }
    }

    #[test]
    fn zero_error_when_path_equals_gt() {
        let path = path_of(&[(1, 2), (3, 4), (5, 6)]);
        let gt = GroundTruth::new(vec![(1.0, 2.0), (3.0, 4.0), (5.0, 6.0)]);
        assert_eq!(center_errors(&path, &gt).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn three_four_offset_is_exactly_five() {
        let path = path_of(&[(3, 4), (13, 24), (7, 9)]);
        let gt = GroundTruth::new(vec![(0.0, 0.0), (10.0, 20.0), (4.0, 5.0)]);
        let errors = center_errors(&path, &gt).unwrap();
        assert_eq!(errors, vec![5.0, 5.0, 5.0]);
    }

    // Textbook distance formula, evaluated separately from the
    // implementation path.
    fn distance_oracle(p: (u32, u32), c: (f64, f64)) -> f64 {
        f64::hypot(p.0 as f64 - c.0, p.1 as f64 - c.1)
    }

    #[test]
    fn mixed_offsets_match_distance_oracle() {
        let coords = [(5u32, 5u32), (6, 5), (5, 7), (8, 9), (2, 1)];
        let centers = [(5.0, 5.0), (5.0, 5.0), (5.0, 5.0), (5.0, 5.0), (5.0, 5.0)];
        let path = path_of(&coords);
        let gt = GroundTruth::new(centers.to_vec());
        let errors = center_errors(&path, &gt).unwrap();
        for ((err, p), c) in errors.iter().zip(coords).zip(centers) {
            assert!((err - distance_oracle(p, c)).abs() < 1e-12);
        }
        // Frozen from the oracle: offsets (0,0), (1,0), (0,2), (3,4), (-3,-4).
        assert_eq!(errors, vec![0.0, 1.0, 2.0, 5.0, 5.0]);
    }

    #[test]
    fn center_errors_length_mismatch() {
        let path = path_of(&[(0, 0)]);
        let gt = GroundTruth::new(vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(
            center_errors(&path, &gt).unwrap_err().code(),
            "LengthMismatch"
        );
    }

    #[test]
    fn translation_invariance() {
        let a = path_of(&[(2, 3), (4, 5)]);
        let gt_a = GroundTruth::new(vec![(1.0, 1.0), (2.0, 2.0)]);
        let b = path_of(&[(12, 13), (14, 15)]);
        let gt_b = GroundTruth::new(vec![(11.0, 11.0), (12.0, 12.0)]);
        assert_eq!(
            center_errors(&a, &gt_a).unwrap(),
            center_errors(&b, &gt_b).unwrap()
        );
    }

    #[test]
    fn all_zero_errors_give_unit_fractions() {
        let curve = precision_curve(&[0.0, 0.0, 0.0], 30.0, 10.0).unwrap();
        assert_eq!(curve.thresholds(), &[10.0, 20.0, 30.0]);
        assert_eq!(curve.fractions(), &[1.0, 1.0, 1.0]);
    }

    // Direct counting oracle for the curve.
    fn counting_oracle(errors: &[f64], tau: f64) -> f64 {
        let mut within = 0usize;
        for &e in errors {
            if e <= tau {
                within += 1;
            }
        }
        within as f64 / errors.len() as f64
    }

    #[test]
    fn curve_matches_counting_oracle() {
        let errors = [5.0, 5.0, 25.0, 25.0];
        let curve = precision_curve(&errors, 50.0, 10.0).unwrap();
        assert_eq!(curve.thresholds(), &[10.0, 20.0, 30.0, 40.0, 50.0]);
        for (tau, frac) in curve.points() {
            assert_eq!(frac, counting_oracle(&errors, tau), "tau={tau}");
        }
        // Frozen from the oracle: 25 > 20 but 25 <= 30.
        assert_eq!(curve.fractions(), &[0.5, 0.5, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn boundary_threshold_is_inclusive() {
        let curve = precision_curve(&[20.0], 50.0, 1.0).unwrap();
        let at_20 = curve
            .points()
            .find(|&(tau, _)| tau == 20.0)
            .map(|(_, f)| f)
            .unwrap();
        assert_eq!(at_20, 1.0);
        let at_19 = curve
            .points()
            .find(|&(tau, _)| tau == 19.0)
            .map(|(_, f)| f)
            .unwrap();
        assert_eq!(at_19, 0.0);
    }

    #[test]
    fn curve_input_validation() {
        assert_eq!(
            precision_curve(&[], 50.0, 1.0).unwrap_err().code(),
            "EmptyInput"
        );
        assert_eq!(
            precision_curve(&[1.0], 50.0, 0.0).unwrap_err().code(),
            "BadThresholds"
        );
        assert_eq!(
            precision_curve(&[1.0], 0.5, 1.0).unwrap_err().code(),
            "BadThresholds"
        );
    }

    #[test]
    fn curve_is_monotone_and_ends_at_one() {
        let errors = [3.2, 8.9, 1.0, 44.0, 17.3, 17.3, 0.0];
        let curve = precision_curve(&errors, 50.0, 1.0).unwrap();
        for pair in curve.fractions().windows(2) {
            assert!(pair[0] <= pair[1]);
        }
        assert_eq!(*curve.fractions().last().unwrap(), 1.0);
    }

    fn two_blob_scenario(equal_peaks: bool) -> Scenario {
        let frames = 10;
        let a: Vec<(f64, f64)> = (0..frames).map(|t| (4.0 + t as f64, 5.0)).collect();
        let b: Vec<(f64, f64)> = (0..frames).map(|t| (4.0 + t as f64, 15.0)).collect();
        Scenario {
            width: 20,
            height: 20,
            frames,
            target: BlobSpec {
                trajectory: a,
                peak: 1.0,
                sigma: 1.5,
            },
            distractors: vec![BlobSpec {
                trajectory: b,
                peak: if equal_peaks { 1.0 } else { 0.6 },
                sigma: 1.5,
            }],
            occlusions: vec![],
            noise_amplitude: 0.0,
            seed: 11,
        }
    }

    #[test]
    fn ope_initialized_tracks_anchored_blob() {
        let scenario = two_blob_scenario(true);
        let (seq, gt) = render_scenario(&scenario).unwrap();
        let report = run_ope(&seq, &gt, SlopeConstraint::new(2), true).unwrap();
        assert!(report.average_error <= 1.0, "avg {}", report.average_error);

        // The path must stay inside the anchored blob's reachability cone,
        // never wandering to the equal-peak distractor 10 px away.
        let path = track(
            &seq,
            SlopeConstraint::new(2),
            Some(rounded_anchor(gt.centers[0], 20, 20).unwrap()),
        )
        .unwrap();
        for (t, p) in path.points.iter().enumerate() {
            let (cx, cy) = gt.centers[t];
            let d = f64::hypot(p.x as f64 - cx, p.y as f64 - cy);
            assert!(d <= 2.0, "frame {t}: point {p} drifted to {d} px");
        }
    }

    #[test]
    fn ope_initialized_starts_at_rounded_center() {
        let scenario = two_blob_scenario(false);
        let (seq, gt) = render_scenario(&scenario).unwrap();
        let anchor = rounded_anchor(gt.centers[0], 20, 20).unwrap();
        let path = track(&seq, SlopeConstraint::new(2), Some(anchor)).unwrap();
        assert_eq!(path.points[0], anchor.position);
    }

    #[test]
    fn ope_uninitialized_follows_tie_break_winner() {
        // Two equal blobs on a tiny map; without an anchor the frame-0
        // tie-break decides. Verified against the exhaustive oracle.
        let frames = 3;
        let s = Scenario {
            width: 6,
            height: 6,
            frames,
            target: BlobSpec {
                trajectory: vec![(1.0, 1.0); frames],
                peak: 1.0,
                sigma: 0.8,
            },
            distractors: vec![BlobSpec {
                trajectory: vec![(4.0, 4.0); frames],
                peak: 1.0,
                sigma: 0.8,
            }],
            occlusions: vec![],
            noise_amplitude: 0.0,
            seed: 2,
        };
        let (seq, _) = render_scenario(&s).unwrap();
        let dp = track(&seq, SlopeConstraint::new(1), None).unwrap();
        let oracle = brute_force_track(&seq, SlopeConstraint::new(1), None).unwrap();
        assert_eq!(dp.points, oracle.points);
        // Smallest (y, x) wins the frame-0 tie: the blob at (1, 1).
        assert_eq!(dp.points[0], PixelCoord::new(1, 1));
    }

    #[test]
    fn ope_rejects_mismatched_gt() {
        let (seq, _) = render_scenario(&two_blob_scenario(false)).unwrap();
        let short = GroundTruth::new(vec![(0.0, 0.0)]);
        assert_eq!(
            run_ope(&seq, &short, SlopeConstraint::new(1), true)
                .unwrap_err()
                .code(),
            "LengthMismatch"
        );
    }

    #[test]
    fn comparison_on_easy_scenario_is_perfect_for_both() {
        let scenario = two_blob_scenario(false);
        let rows = compare_trackers(&[scenario], SlopeConstraint::new(2)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].dp.precision_at_20, 1.0);
        assert_eq!(rows[0].greedy.precision_at_20, 1.0);
    }

    #[test]
    fn comparison_of_empty_suite_is_empty() {
        assert!(compare_trackers(&[], SlopeConstraint::new(2))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn dp_never_loses_to_greedy_across_an_occlusion_sweep() {
        // Noise-free target-plus-dim-distractor scenarios with growing
        // occlusion windows; the greedy baseline drifts onto the distractor
        // while the global optimum bridges the gap.
        let frames = 40;
        let base = Scenario {
            width: 48,
            height: 48,
            frames,
            target: BlobSpec {
                trajectory: (0..frames).map(|t| (5.0 + t as f64, 14.0)).collect(),
                peak: 1.0,
                sigma: 2.0,
            },
            distractors: vec![BlobSpec {
                trajectory: (0..frames).map(|t| (5.0 + t as f64, 34.0)).collect(),
                peak: 0.7,
                sigma: 2.0,
            }],
            occlusions: vec![],
            noise_amplitude: 0.0,
            seed: 17,
        };
        let scenarios: Vec<Scenario> = crate::synth::occlusion_benchmark(&[0, 2, 6], &[4], &base)
            .unwrap()
            .into_iter()
            .map(|(_, s)| s)
            .collect();
        let rows = compare_trackers(&scenarios, SlopeConstraint::new(4)).unwrap();
        assert_eq!(rows.len(), 3);
        for (i, row) in rows.iter().enumerate() {
            assert!(
                row.dp.average_error <= row.greedy.average_error,
                "row {i}: dp {} vs greedy {}",
                row.dp.average_error,
                row.greedy.average_error
            );
        }
        // The longest window actually separates the two.
        assert!(rows[2].dp.average_error < rows[2].greedy.average_error);
    }

    #[test]
    fn mean_error_from_respects_start() {
        let errors = [10.0, 10.0, 2.0, 4.0];
        assert_eq!(mean_error_from(&errors, 0), 6.5);
        assert_eq!(mean_error_from(&errors, 2), 3.0);
        assert_eq!(mean_error_from(&errors, 4), 0.0);
    }
}
