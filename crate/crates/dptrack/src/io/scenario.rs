//! Scenario description files: flat `key = value` text.
//!
//! ```text
//! width = 64
//! height = 64
//! frames = 60
//! target.path = 0:6,20; 24:54,20; 48:6,20; 59:28,20
//! target.peak = 1.0
//! target.sigma = 2.0
//! occlusion = 26-33
//! distractor.path = 0:6,40; 24:54,40; 48:6,40; 59:28,40
//! distractor.peak = 0.7
//! distractor.sigma = 2.0
//! noise = 0.0
//! seed = 42
//! ```
//!
//! `target.path` holds piecewise-linear waypoints `t:x,y` separated by `;`,
//! with strictly increasing frame indices; positions hold before the first
//! and after the last waypoint. `occlusion` is an inclusive `start-end`
//! frame span and may repeat. Each `distractor.path` line starts a new
//! distractor; following `distractor.peak` / `distractor.sigma` lines apply
//! to it. Blank lines and `#` comments are ignored; unknown keys are errors.

use crate::error::{Error, Result};
use crate::synth::{BlobSpec, OcclusionWindow, Scenario};

#[derive(Debug, Clone)]
struct RawBlob {
    waypoints: Vec<(usize, f64, f64)>,
    peak: f64,
    sigma: f64,
}

impl RawBlob {
    fn new(waypoints: Vec<(usize, f64, f64)>) -> Self {
        Self {
            waypoints,
            peak: 1.0,
            sigma: 2.0,
        }
    }

    fn resolve(&self, frames: usize, line: usize) -> Result<BlobSpec> {
        for w in &self.waypoints {
            if w.0 >= frames {
                return Err(Error::InvalidScenario(format!(
                    "line {line}: waypoint frame {} outside 0..{frames}",
                    w.0
                )));
            }
        }
        let mut trajectory = Vec::with_capacity(frames);
        for t in 0..frames {
            trajectory.push(interpolate(&self.waypoints, t));
        }
        Ok(BlobSpec {
            trajectory,
            peak: self.peak,
            sigma: self.sigma,
        })
    }
}

fn interpolate(waypoints: &[(usize, f64, f64)], t: usize) -> (f64, f64) {
    let first = waypoints.first().expect("parser requires a waypoint");
    if t <= first.0 {
        return (first.1, first.2);
    }
    for pair in waypoints.windows(2) {
        let (t0, x0, y0) = pair[0];
        let (t1, x1, y1) = pair[1];
        if t <= t1 {
            let alpha = (t - t0) as f64 / (t1 - t0) as f64;
            return (x0 + alpha * (x1 - x0), y0 + alpha * (y1 - y0));
        }
    }
    let last = waypoints.last().unwrap();
    (last.1, last.2)
}

/// Parses scenario text into a validated [`Scenario`].
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut width: Option<u32> = None;
    let mut height: Option<u32> = None;
    let mut frames: Option<usize> = None;
    let mut target: Option<(RawBlob, usize)> = None;
    let mut distractors: Vec<(RawBlob, usize)> = Vec::new();
    let mut occlusions: Vec<OcclusionWindow> = Vec::new();
    let mut noise = 0.0f64;
    let mut seed = 0u64;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidScenario(format!("line {line_no}: expected 'key = value'"))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad =
            |what: &str| Error::InvalidScenario(format!("line {line_no}: {what} in '{value}'"));

        match key {
            "width" => width = Some(value.parse().map_err(|_| bad("bad width"))?),
            "height" => height = Some(value.parse().map_err(|_| bad("bad height"))?),
            "frames" => frames = Some(value.parse().map_err(|_| bad("bad frame count"))?),
            "noise" => noise = value.parse().map_err(|_| bad("bad noise amplitude"))?,
            "seed" => seed = value.parse().map_err(|_| bad("bad seed"))?,
            "target.path" => {
                target = Some((RawBlob::new(parse_waypoints(value, line_no)?), line_no))
            }
            "target.peak" => {
                let blob = target.as_mut().ok_or_else(|| {
                    Error::InvalidScenario(format!(
                        "line {line_no}: target.peak before target.path"
                    ))
                })?;
                blob.0.peak = value.parse().map_err(|_| bad("bad peak"))?;
            }
            "target.sigma" => {
                let blob = target.as_mut().ok_or_else(|| {
                    Error::InvalidScenario(format!(
                        "line {line_no}: target.sigma before target.path"
                    ))
                })?;
                blob.0.sigma = value.parse().map_err(|_| bad("bad sigma"))?;
            }
            "distractor.path" => {
                distractors.push((RawBlob::new(parse_waypoints(value, line_no)?), line_no));
            }
            "distractor.peak" => {
                let blob = distractors.last_mut().ok_or_else(|| {
                    Error::InvalidScenario(format!(
                        "line {line_no}: distractor.peak before distractor.path"
                    ))
                })?;
                blob.0.peak = value.parse().map_err(|_| bad("bad peak"))?;
            }
            "distractor.sigma" => {
                let blob = distractors.last_mut().ok_or_else(|| {
                    Error::InvalidScenario(format!(
                        "line {line_no}: distractor.sigma before distractor.path"
                    ))
                })?;
                blob.0.sigma = value.parse().map_err(|_| bad("bad sigma"))?;
            }
            "occlusion" => {
                let (a, b) = value
                    .split_once('-')
                    .ok_or_else(|| bad("expected 'start-end'"))?;
                let start_frame = a.trim().parse().map_err(|_| bad("bad start frame"))?;
                let end_frame = b.trim().parse().map_err(|_| bad("bad end frame"))?;
                occlusions.push(OcclusionWindow {
                    start_frame,
                    end_frame,
                });
            }
            other => {
                return Err(Error::InvalidScenario(format!(
                    "line {line_no}: unknown key '{other}'"
                )));
            }
        }
    }

    let require = |name: &str, missing: bool| {
        if missing {
            Err(Error::InvalidScenario(format!(
                "missing required key '{name}'"
            )))
        } else {
            Ok(())
        }
    };
    require("width", width.is_none())?;
    require("height", height.is_none())?;
    require("frames", frames.is_none())?;
    require("target.path", target.is_none())?;
    let frames = frames.unwrap();

    let (target_raw, target_line) = target.unwrap();
    let scenario = Scenario {
        width: width.unwrap(),
        height: height.unwrap(),
        frames,
        target: target_raw.resolve(frames, target_line)?,
        distractors: distractors
            .into_iter()
            .map(|(raw, line)| raw.resolve(frames, line))
            .collect::<Result<_>>()?,
        occlusions,
        noise_amplitude: noise,
        seed,
    };
    scenario.validate()?;
    Ok(scenario)
}

fn parse_waypoints(value: &str, line_no: usize) -> Result<Vec<(usize, f64, f64)>> {
    let bad = |what: &str| Error::InvalidScenario(format!("line {line_no}: {what}"));
    let mut waypoints = Vec::new();
    for part in value.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (t, xy) = part
            .split_once(':')
            .ok_or_else(|| bad("waypoint must be 't:x,y'"))?;
        let (x, y) = xy
            .split_once(',')
            .ok_or_else(|| bad("waypoint must be 't:x,y'"))?;
        let t: usize = t.trim().parse().map_err(|_| bad("bad waypoint frame"))?;
        let x: f64 = x.trim().parse().map_err(|_| bad("bad waypoint x"))?;
        let y: f64 = y.trim().parse().map_err(|_| bad("bad waypoint y"))?;
        if !x.is_finite() || !y.is_finite() {
            return Err(bad("waypoint coordinates must be finite"));
        }
        if let Some(&(prev, _, _)) = waypoints.last() {
            if t <= prev {
                return Err(bad("waypoint frames must strictly increase"));
            }
        }
        waypoints.push((t, x, y));
    }
    if waypoints.is_empty() {
        return Err(bad("path needs at least one waypoint"));
    }
    Ok(waypoints)
}

pub fn read_scenario_file(path: &std::path::Path) -> Result<Scenario> {
    parse_scenario(&std::fs::read_to_string(path)?)
}
