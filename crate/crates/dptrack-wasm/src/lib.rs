//! Browser demo bindings: build a synthetic occlusion scenario from UI
//! parameters, run the DP and greedy trackers on it, and hand the frames,
//! paths, errors, and precision curves to the page as flat typed arrays.

use wasm_bindgen::prelude::*;

use dptrack::dp::{greedy_track, track, Anchor};
use dptrack::eval::{center_errors, precision_curve, rounded_anchor};
use dptrack::map::{GroundTruth, ProbSequence, SlopeConstraint, TrackPath};
use dptrack::synth::{centered_occlusion, render_scenario, BlobSpec, Scenario};

const WIDTH: u32 = 64;
const HEIGHT: u32 = 64;
const FRAMES: usize = 60;
const TARGET_Y: f64 = 22.0;
const DISTRACTOR_Y: f64 = 42.0;

/// Horizontal zigzag at 2 px/frame between x=6 and x=54.
fn sweep_x(t: usize) -> f64 {
    let t = t as f64;
    if t <= 24.0 {
        6.0 + 2.0 * t
    } else if t <= 48.0 {
        54.0 - 2.0 * (t - 24.0)
    } else {
        6.0 + 2.0 * (t - 48.0)
    }
}

fn demo_scenario(occlusion_len: u32, distractor_peak: f64, noise: f64, seed: u32) -> Scenario {
    let target: Vec<(f64, f64)> = (0..FRAMES).map(|t| (sweep_x(t), TARGET_Y)).collect();
    let distractors = if distractor_peak > 0.0 {
        vec![BlobSpec {
            trajectory: (0..FRAMES).map(|t| (sweep_x(t), DISTRACTOR_Y)).collect(),
            peak: distractor_peak,
            sigma: 2.0,
        }]
    } else {
        Vec::new()
    };
    Scenario {
        width: WIDTH,
        height: HEIGHT,
        frames: FRAMES,
        target: BlobSpec {
            trajectory: target,
            peak: 1.0,
            sigma: 2.0,
        },
        distractors,
        occlusions: centered_occlusion(FRAMES, occlusion_len as usize)
            .into_iter()
            .collect(),
        noise_amplitude: noise,
        seed: seed as u64,
    }
}

/// Four-stop colormap from near-black through blue and orange to white.
fn heat_rgba(v: f64) -> [u8; 4] {
    const STOPS: [(f64, [f64; 3]); 4] = [
        (0.0, [10.0, 12.0, 40.0]),
        (0.35, [45.0, 80.0, 180.0]),
        (0.7, [240.0, 140.0, 40.0]),
        (1.0, [255.0, 250.0, 230.0]),
    ];
    let v = v.clamp(0.0, 1.0);
    for pair in STOPS.windows(2) {
        let (a, ca) = pair[0];
        let (b, cb) = pair[1];
        if v <= b {
            let alpha = (v - a) / (b - a);
            return [
                (ca[0] + alpha * (cb[0] - ca[0])) as u8,
                (ca[1] + alpha * (cb[1] - ca[1])) as u8,
                (ca[2] + alpha * (cb[2] - ca[2])) as u8,
                255,
            ];
        }
    }
    [255, 250, 230, 255]
}

#[wasm_bindgen]
pub struct TrackingDemo {
    seq: ProbSequence,
    gt: GroundTruth,
    dp: TrackPath,
    greedy: TrackPath,
    dp_errors: Vec<f64>,
    greedy_errors: Vec<f64>,
    occlusion: Option<(usize, usize)>,
}

#[wasm_bindgen]
impl TrackingDemo {
    /// Renders the scenario and runs both trackers.
    ///
    /// `occlusion_len` frames are hidden mid-sequence; `radius` is the slope
    /// constraint; `distractor_peak` of 0 removes the second blob;
    /// `initialized` anchors both trackers at the frame-0 ground truth.
    #[wasm_bindgen(constructor)]
    pub fn new(
        occlusion_len: u32,
        radius: u32,
        distractor_peak: f64,
        noise: f64,
        seed: u32,
        initialized: bool,
    ) -> Result<TrackingDemo, JsValue> {
        let scenario = demo_scenario(occlusion_len, distractor_peak, noise, seed);
        let build = || -> dptrack::Result<TrackingDemo> {
            let (seq, gt) = render_scenario(&scenario)?;
            let constraint = SlopeConstraint::new(radius);
            let anchor: Option<Anchor> = if initialized {
                Some(rounded_anchor(gt.centers[0], WIDTH, HEIGHT)?)
            } else {
                None
            };
            let dp = track(&seq, constraint, anchor)?;
            let greedy = greedy_track(&seq, constraint, anchor)?;
            let dp_errors = center_errors(&dp, &gt)?;
            let greedy_errors = center_errors(&greedy, &gt)?;
            Ok(TrackingDemo {
                seq,
                gt,
                dp,
                greedy,
                dp_errors,
                greedy_errors,
                occlusion: scenario
                    .occlusions
                    .first()
                    .map(|w| (w.start_frame, w.end_frame)),
            })
        };
        build().map_err(|e| JsValue::from_str(&e.to_string()))
    }

    pub fn width(&self) -> u32 {
        self.seq.width()
    }

    pub fn height(&self) -> u32 {
        self.seq.height()
    }

    pub fn frames(&self) -> u32 {
        self.seq.len() as u32
    }

    /// Start of the occlusion window, or -1 when there is none.
    pub fn occlusion_start(&self) -> i32 {
        self.occlusion.map(|(s, _)| s as i32).unwrap_or(-1)
    }

    pub fn occlusion_end(&self) -> i32 {
        self.occlusion.map(|(_, e)| e as i32).unwrap_or(-1)
    }

    /// RGBA heatmap of frame `t`, row-major, width*height*4 bytes.
    pub fn frame_rgba(&self, t: u32) -> Vec<u8> {
        let frame = self.seq.frame(t as usize);
        let mut out = Vec::with_capacity(frame.values().len() * 4);
        for &v in frame.values() {
            out.extend_from_slice(&heat_rgba(v));
        }
        out
    }

    /// Ground-truth centers, interleaved x0,y0,x1,y1,...
    pub fn gt_xy(&self) -> Vec<f64> {
        self.gt.centers.iter().flat_map(|&(x, y)| [x, y]).collect()
    }

    pub fn dp_xy(&self) -> Vec<u32> {
        self.dp.points.iter().flat_map(|p| [p.x, p.y]).collect()
    }

    pub fn greedy_xy(&self) -> Vec<u32> {
        self.greedy.points.iter().flat_map(|p| [p.x, p.y]).collect()
    }

    pub fn dp_errors(&self) -> Vec<f64> {
        self.dp_errors.clone()
    }

    pub fn greedy_errors(&self) -> Vec<f64> {
        self.greedy_errors.clone()
    }

    /// Precision fractions at thresholds 1..=50 px.
    pub fn dp_precision(&self) -> Vec<f64> {
        precision_curve(&self.dp_errors, 50.0, 1.0)
            .expect("nonempty errors")
            .fractions()
            .to_vec()
    }

    pub fn greedy_precision(&self) -> Vec<f64> {
        precision_curve(&self.greedy_errors, 50.0, 1.0)
            .expect("nonempty errors")
            .fractions()
            .to_vec()
    }

    pub fn dp_score(&self) -> f64 {
        self.dp.score
    }

    pub fn greedy_score(&self) -> f64 {
        self.greedy.score
    }

    pub fn dp_average_error(&self) -> f64 {
        self.dp_errors.iter().sum::<f64>() / self.dp_errors.len() as f64
    }

    pub fn greedy_average_error(&self) -> f64 {
        self.greedy_errors.iter().sum::<f64>() / self.greedy_errors.len() as f64
    }
}
