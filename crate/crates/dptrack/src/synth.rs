//! Synthetic probability-map sequences with exact ground truth.
//!
//! Scenarios are Gaussian blobs on a grid: one target (which can be hidden
//! over occlusion windows), optional distractor blobs, and uniform per-pixel
//! noise. Rendering is deterministic for a fixed seed: frame `t` draws its
//! noise from an independent ChaCha8 substream selected by the frame index,
//! so frames could be rendered in any order with identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::map::{GroundTruth, ProbMap, ProbSequence};

/// Identifier of the noise generator, recorded in benchmark output so
/// sequences are reproducible across builds.
pub const NOISE_RNG_ALGORITHM: &str = "chacha8";

/// A Gaussian blob with a real-valued per-frame center trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    /// One (x, y) center per frame, in pixels. May leave the map.
    pub trajectory: Vec<(f64, f64)>,
    /// Amplitude at the center, in (0, 1].
    pub peak: f64,
    /// Gaussian width in pixels, > 0.
    pub sigma: f64,
}

/// Inclusive frame span during which the target contributes nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OcclusionWindow {
    pub start_frame: usize,
    pub end_frame: usize,
}

impl OcclusionWindow {
    pub fn contains(&self, t: usize) -> bool {
        self.start_frame <= t && t <= self.end_frame
    }
}

/// Full description of a synthetic sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub width: u32,
    pub height: u32,
    pub frames: usize,
    pub target: BlobSpec,
    pub distractors: Vec<BlobSpec>,
    /// Windows apply to the target only.
    pub occlusions: Vec<OcclusionWindow>,
    /// Uniform noise ceiling in [0, 1); each pixel adds noise in [0, ceiling).
    pub noise_amplitude: f64,
    pub seed: u64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidScenario(format!(
                "dimensions must be at least 1x1, got {}x{}",
                self.width, self.height
            )));
        }
        if self.frames == 0 {
            return Err(Error::InvalidScenario("frame count must be >= 1".into()));
        }
        let check_blob = |name: &str, blob: &BlobSpec| -> Result<()> {
            if blob.trajectory.len() != self.frames {
                return Err(Error::InvalidScenario(format!(
                    "{name} trajectory has {} entries, expected {}",
                    blob.trajectory.len(),
                    self.frames
                )));
            }
            if blob.peak.is_nan() || blob.peak <= 0.0 || blob.peak > 1.0 {
                return Err(Error::InvalidScenario(format!(
                    "{name} peak {} outside (0, 1]",
                    blob.peak
                )));
            }
            if blob.sigma.is_nan() || blob.sigma <= 0.0 {
                return Err(Error::InvalidScenario(format!(
                    "{name} sigma {} must be > 0",
                    blob.sigma
                )));
            }
            Ok(())
        };
        check_blob("target", &self.target)?;
        for (i, d) in self.distractors.iter().enumerate() {
            check_blob(&format!("distractor {i}"), d)?;
        }
        for w in &self.occlusions {
            if w.start_frame > w.end_frame || w.end_frame >= self.frames {
                return Err(Error::InvalidScenario(format!(
                    "occlusion window {}-{} outside 0..{}",
                    w.start_frame,
                    w.end_frame,
                    self.frames - 1
                )));
            }
        }
        if !(0.0..1.0).contains(&self.noise_amplitude) {
            return Err(Error::InvalidScenario(format!(
                "noise amplitude {} outside [0, 1)",
                self.noise_amplitude
            )));
        }
        Ok(())
    }
}

fn blob_value(blob: &BlobSpec, t: usize, x: u32, y: u32) -> f64 {
    let (cx, cy) = blob.trajectory[t];
    let dx = x as f64 - cx;
    let dy = y as f64 - cy;
    blob.peak * (-(dx * dx + dy * dy) / (2.0 * blob.sigma * blob.sigma)).exp()
}

/// Renders the scenario into a probability sequence plus ground truth (the
/// target trajectory rounded to the nearest pixel).
pub fn render_scenario(scenario: &Scenario) -> Result<(ProbSequence, GroundTruth)> {
    scenario.validate()?;
    let (w, h) = (scenario.width, scenario.height);
    let cells = w as usize * h as usize;

    let mut frames = Vec::with_capacity(scenario.frames);
    for t in 0..scenario.frames {
        let occluded = scenario.occlusions.iter().any(|win| win.contains(t));
        let mut rng = if scenario.noise_amplitude > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
            rng.set_stream(t as u64);
            Some(rng)
        } else {
            None
        };

        let mut values = Vec::with_capacity(cells);
        for y in 0..h {
            for x in 0..w {
                let mut v = 0.0;
                if !occluded {
                    v += blob_value(&scenario.target, t, x, y);
                }
                for d in &scenario.distractors {
                    v += blob_value(d, t, x, y);
                }
                if let Some(rng) = rng.as_mut() {
                    v += scenario.noise_amplitude * rng.gen::<f64>();
                }
                values.push(v.clamp(0.0, 1.0));
            }
        }
        frames.push(ProbMap::new(w, h, values).expect("clamped values are valid"));
    }

    let centers = scenario
        .target
        .trajectory
        .iter()
        .map(|&(x, y)| (x.round(), y.round()))
        .collect();
    Ok((ProbSequence::new(frames)?, GroundTruth::new(centers)))
}

/// Mid-sequence occlusion window of the given length (`None` for length 0).
pub fn centered_occlusion(frames: usize, len: usize) -> Option<OcclusionWindow> {
    if len == 0 {
        return None;
    }
    let start = (frames - len.min(frames)) / 2;
    Some(OcclusionWindow {
        start_frame: start,
        end_frame: start + len.min(frames) - 1,
    })
}

/// One cell of an occlusion-robustness sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepCell {
    pub occlusion_len: usize,
    pub radius: u32,
}

/// Builds one scenario per (occlusion length, radius) grid point. Every
/// scenario shares the base seed and trajectory; only the target's occlusion
/// window changes with the length. The radius does not alter the scenario —
/// it parameterizes the trackers run on it — so it rides along in the cell.
pub fn occlusion_benchmark(
    lengths: &[usize],
    radii: &[u32],
    base: &Scenario,
) -> Result<Vec<(SweepCell, Scenario)>> {
    base.validate()?;
    let mut out = Vec::with_capacity(lengths.len() * radii.len());
    for &len in lengths {
        if len > base.frames {
            return Err(Error::InvalidScenario(format!(
                "occlusion length {len} exceeds {} frames",
                base.frames
            )));
        }
        for &radius in radii {
            let mut scenario = base.clone();
            scenario.occlusions = centered_occlusion(base.frames, len).into_iter().collect();
            out.push((
                SweepCell {
                    occlusion_len: len,
                    radius,
                },
                scenario,
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::{track, Anchor};
    use crate::map::{PixelCoord, SlopeConstraint};

    fn stationary(width: u32, height: u32, frames: usize, cx: f64, cy: f64) -> Scenario {
        Scenario {
            width,
            height,
            frames,
            target: BlobSpec {
                trajectory: vec![(cx, cy); frames],
                peak: 1.0,
                sigma: 2.0,
            },
            distractors: vec![],
            occlusions: vec![],
            noise_amplitude: 0.0,
            seed: 7,
        }
    }

    #[test]
    fn stationary_blob_peaks_at_center() {
        let (seq, gt) = render_scenario(&stationary(11, 11, 4, 5.0, 5.0)).unwrap();
        for t in 0..seq.len() {
            assert_eq!(seq.frame(t).argmax(), PixelCoord::new(5, 5));
        }
        assert_eq!(gt.centers, vec![(5.0, 5.0); 4]);
    }

    #[test]
    fn gaussian_formula_value() {
        // Direct evaluation of the rendering formula two pixels from the
        // center along an axis: exp(-4 / (2 * 2^2)) = exp(-0.5).
        let (seq, _) = render_scenario(&stationary(11, 11, 1, 5.0, 5.0)).unwrap();
        let expected = (-0.5f64).exp();
        assert!((expected - 0.6065306597126334).abs() < 1e-15);
        let v = seq.frame(0).value_at(PixelCoord::new(7, 5));
        assert!((v - expected).abs() < 1e-12);
        let v = seq.frame(0).value_at(PixelCoord::new(5, 3));
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn full_occlusion_leaves_only_noise() {
        let mut s = stationary(8, 8, 3, 4.0, 4.0);
        s.noise_amplitude = 0.1;
        s.occlusions = vec![OcclusionWindow {
            start_frame: 0,
            end_frame: 2,
        }];
        let (seq, _) = render_scenario(&s).unwrap();
        for t in 0..seq.len() {
            for &v in seq.frame(t).values() {
                assert!(v < 0.1, "frame {t} value {v}");
            }
        }
    }

    #[test]
    fn rendering_is_deterministic() {
        let mut s = stationary(9, 7, 5, 3.0, 3.0);
        s.noise_amplitude = 0.2;
        s.seed = 12345;
        let (a, _) = render_scenario(&s).unwrap();
        let (b, _) = render_scenario(&s).unwrap();
        for t in 0..a.len() {
            let bits_a: Vec<u64> = a.frame(t).values().iter().map(|v| v.to_bits()).collect();
            let bits_b: Vec<u64> = b.frame(t).values().iter().map(|v| v.to_bits()).collect();
            assert_eq!(bits_a, bits_b);
        }
    }

    #[test]
    fn values_stay_in_unit_interval() {
        let mut s = stationary(10, 10, 4, 5.0, 5.0);
        s.noise_amplitude = 0.9;
        s.distractors = vec![
            BlobSpec {
                trajectory: vec![(5.0, 5.0); 4],
                peak: 1.0,
                sigma: 3.0,
            },
            BlobSpec {
                trajectory: vec![(4.0, 6.0); 4],
                peak: 0.8,
                sigma: 1.0,
            },
        ];
        let (seq, _) = render_scenario(&s).unwrap();
        for t in 0..seq.len() {
            for &v in seq.frame(t).values() {
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn tracker_recovers_slow_unoccluded_blob() {
        // Motion of 1 px/frame with r=1: recovery exact up to quantization.
        let frames = 8;
        let trajectory: Vec<(f64, f64)> = (0..frames).map(|t| (3.0 + t as f64, 6.0)).collect();
        let s = Scenario {
            width: 16,
            height: 12,
            frames,
            target: BlobSpec {
                trajectory,
                peak: 1.0,
                sigma: 1.5,
            },
            distractors: vec![],
            occlusions: vec![],
            noise_amplitude: 0.0,
            seed: 3,
        };
        let (seq, gt) = render_scenario(&s).unwrap();
        let anchor = Anchor::at(gt.centers[0].0 as u32, gt.centers[0].1 as u32);
        let path = track(&seq, SlopeConstraint::new(1), Some(anchor)).unwrap();
        for (p, &(cx, cy)) in path.points.iter().zip(&gt.centers) {
            let err = ((p.x as f64 - cx).powi(2) + (p.y as f64 - cy).powi(2)).sqrt();
            assert!(err <= 1.0, "point {p} vs gt ({cx}, {cy})");
        }
    }

    #[test]
    fn invalid_scenarios_rejected() {
        let mut s = stationary(8, 8, 3, 4.0, 4.0);
        s.target.peak = 0.0;
        assert_eq!(render_scenario(&s).unwrap_err().code(), "InvalidScenario");

        let mut s = stationary(8, 8, 3, 4.0, 4.0);
        s.target.sigma = -1.0;
        assert_eq!(render_scenario(&s).unwrap_err().code(), "InvalidScenario");

        let mut s = stationary(8, 8, 3, 4.0, 4.0);
        s.occlusions = vec![OcclusionWindow {
            start_frame: 1,
            end_frame: 3,
        }];
        assert_eq!(render_scenario(&s).unwrap_err().code(), "InvalidScenario");

        let mut s = stationary(8, 8, 3, 4.0, 4.0);
        s.target.trajectory.pop();
        assert_eq!(render_scenario(&s).unwrap_err().code(), "InvalidScenario");

        let mut s = stationary(8, 8, 3, 4.0, 4.0);
        s.noise_amplitude = 1.0;
        assert_eq!(render_scenario(&s).unwrap_err().code(), "InvalidScenario");
    }

    #[test]
    fn empty_benchmark_grid_is_empty() {
        let base = stationary(8, 8, 10, 4.0, 4.0);
        assert!(occlusion_benchmark(&[], &[1, 2], &base).unwrap().is_empty());
        assert!(occlusion_benchmark(&[2], &[], &base).unwrap().is_empty());
    }

    #[test]
    fn single_cell_benchmark_matches_base_plus_window() {
        let base = stationary(8, 8, 10, 4.0, 4.0);
        let cells = occlusion_benchmark(&[4], &[2], &base).unwrap();
        assert_eq!(cells.len(), 1);
        let (cell, scenario) = &cells[0];
        assert_eq!(
            *cell,
            SweepCell {
                occlusion_len: 4,
                radius: 2
            }
        );
        let mut expected = base.clone();
        expected.occlusions = vec![OcclusionWindow {
            start_frame: 3,
            end_frame: 6,
        }];
        assert_eq!(*scenario, expected);
    }

    #[test]
    fn benchmark_cells_match_independent_renders() {
        let mut base = stationary(10, 10, 12, 5.0, 5.0);
        base.noise_amplitude = 0.05;
        let cells = occlusion_benchmark(&[0, 2, 6], &[1, 3], &base).unwrap();
        assert_eq!(cells.len(), 6);

        // Oracle: re-render each cell from a scenario assembled by hand.
        for (cell, scenario) in &cells {
            let mut manual = base.clone();
            manual.occlusions = centered_occlusion(base.frames, cell.occlusion_len)
                .into_iter()
                .collect();
            let (expected_seq, expected_gt) = render_scenario(&manual).unwrap();
            let (seq, gt) = render_scenario(scenario).unwrap();
            assert_eq!(seq, expected_seq);
            assert_eq!(gt, expected_gt);
        }
    }

    #[test]
    fn zero_length_cell_has_no_window() {
        let base = stationary(8, 8, 10, 4.0, 4.0);
        let cells = occlusion_benchmark(&[0], &[5], &base).unwrap();
        assert!(cells[0].1.occlusions.is_empty());
    }
}
