//! CSV schemas: tracks, ground truth, evaluation reports, and benchmark
//! sweeps. Floats print in Rust's shortest round-trip decimal form, so
//! identical inputs always produce byte-identical files.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::eval::EvalReport;
use crate::map::{GroundTruth, PixelCoord};
use crate::synth::{SweepCell, NOISE_RNG_ALGORITHM};

pub const TRACK_HEADER: &str = "frame,x,y,score_cum";
pub const GT_CENTERS_HEADER: &str = "frame,cx,cy";
pub const GT_BOXES_HEADER: &str = "frame,x,y,w,h";

/// One row per frame: `frame,x,y,score_cum`.
pub fn track_csv(points: &[PixelCoord], score_cum: &[f64]) -> String {
    assert_eq!(points.len(), score_cum.len());
    let mut out = String::from(TRACK_HEADER);
    out.push('\n');
    for (t, (p, s)) in points.iter().zip(score_cum).enumerate() {
        writeln!(out, "{t},{},{},{s}", p.x, p.y).unwrap();
    }
    out
}

/// Parses a track CSV back into points and running scores.
pub fn parse_track_csv(text: &str) -> Result<(Vec<PixelCoord>, Vec<f64>)> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == TRACK_HEADER => {}
        other => {
            return Err(Error::BadCsv(format!(
                "line 1: expected header '{TRACK_HEADER}', got {other:?}"
            )));
        }
    }
    let mut points = Vec::new();
    let mut scores = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let fields = split_fields(line, 4, line_no)?;
        let frame: usize = parse_field(fields[0], "frame", line_no)?;
        if frame != points.len() {
            return Err(Error::BadCsv(format!(
                "line {line_no}: frame {frame} out of order, expected {}",
                points.len()
            )));
        }
        let x: u32 = parse_field(fields[1], "x", line_no)?;
        let y: u32 = parse_field(fields[2], "y", line_no)?;
        let score: f64 = parse_field(fields[3], "score_cum", line_no)?;
        points.push(PixelCoord::new(x, y));
        scores.push(score);
    }
    if points.is_empty() {
        return Err(Error::EmptyInput("track csv has no rows".into()));
    }
    Ok((points, scores))
}

/// Writes ground truth as `frame,cx,cy`.
pub fn gt_csv(gt: &GroundTruth) -> String {
    let mut out = String::from(GT_CENTERS_HEADER);
    out.push('\n');
    for (t, (cx, cy)) in gt.centers.iter().enumerate() {
        writeln!(out, "{t},{cx},{cy}").unwrap();
    }
    out
}

/// Parses ground truth in either accepted schema, detected by the header.
/// Box rows convert through the standard center rule `(x + w/2, y + h/2)`.
pub fn parse_gt_csv(text: &str) -> Result<GroundTruth> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .map(str::trim_end)
        .ok_or_else(|| Error::BadCsv("line 1: missing header".into()))?;
    let boxes = match header {
        GT_CENTERS_HEADER => false,
        GT_BOXES_HEADER => true,
        other => {
            return Err(Error::BadCsv(format!(
                "line 1: expected '{GT_CENTERS_HEADER}' or '{GT_BOXES_HEADER}', got '{other}'"
            )));
        }
    };

    let mut centers = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let fields = split_fields(line, if boxes { 5 } else { 3 }, line_no)?;
        let frame: usize = parse_field(fields[0], "frame", line_no)?;
        if frame != centers.len() {
            return Err(Error::BadCsv(format!(
                "line {line_no}: frame {frame} out of order, expected {}",
                centers.len()
            )));
        }
        if boxes {
            let x: f64 = parse_field(fields[1], "x", line_no)?;
            let y: f64 = parse_field(fields[2], "y", line_no)?;
            let w: f64 = parse_field(fields[3], "w", line_no)?;
            let h: f64 = parse_field(fields[4], "h", line_no)?;
            if w.is_nan() || h.is_nan() || w <= 0.0 || h <= 0.0 {
                return Err(Error::BadCsv(format!(
                    "line {line_no}: box {w}x{h} must have positive extent"
                )));
            }
            centers.push((x + w / 2.0, y + h / 2.0));
        } else {
            let cx: f64 = parse_field(fields[1], "cx", line_no)?;
            let cy: f64 = parse_field(fields[2], "cy", line_no)?;
            centers.push((cx, cy));
        }
    }
    if centers.is_empty() {
        return Err(Error::BadCsv("ground truth has no rows".into()));
    }
    Ok(GroundTruth::new(centers))
}

/// Evaluation report: one `record,field1,field2` triple per line.
/// `error` rows carry (frame, error), `precision` rows (threshold,
/// fraction), and the single `summary` row (average_error, precision_at_20).
pub fn eval_report_csv(report: &EvalReport) -> String {
    let mut out = String::from("record,field1,field2\n");
    for (t, e) in report.errors.iter().enumerate() {
        writeln!(out, "error,{t},{e}").unwrap();
    }
    for (tau, frac) in report.curve.points() {
        writeln!(out, "precision,{tau},{frac}").unwrap();
    }
    writeln!(
        out,
        "summary,{},{}",
        report.average_error, report.precision_at_20
    )
    .unwrap();
    out
}

/// One row of an occlusion-benchmark sweep.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub cell: SweepCell,
    pub dp_avg_error: f64,
    pub greedy_avg_error: f64,
    pub dp_precision_at_20: f64,
    pub greedy_precision_at_20: f64,
    /// Mean error over frames after the occlusion window (all frames when
    /// the window is empty).
    pub dp_post_occlusion_error: f64,
    pub greedy_post_occlusion_error: f64,
}

pub fn bench_csv(rows: &[BenchRow], seed: u64) -> String {
    let mut out = format!("# noise_rng = {NOISE_RNG_ALGORITHM}, seed = {seed}\n");
    out.push_str(
        "occlusion_len,radius,dp_avg_error,greedy_avg_error,\
         dp_precision_at_20,greedy_precision_at_20,\
         dp_post_occlusion_error,greedy_post_occlusion_error\n",
    );
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.cell.occlusion_len,
            r.cell.radius,
            r.dp_avg_error,
            r.greedy_avg_error,
            r.dp_precision_at_20,
            r.greedy_precision_at_20,
            r.dp_post_occlusion_error,
            r.greedy_post_occlusion_error
        )
        .unwrap();
    }
    out
}

fn split_fields(line: &str, expected: usize, line_no: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.trim_end_matches('\r').split(',').collect();
    if fields.len() != expected {
        return Err(Error::BadCsv(format!(
            "line {line_no}: expected {expected} fields, got {}",
            fields.len()
        )));
    }
    Ok(fields)
}

fn parse_field<T: std::str::FromStr>(field: &str, name: &str, line_no: usize) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::BadCsv(format!("line {line_no}: bad {name} '{field}'")))
}
