//! Slope-constrained dynamic programming over a probability-map sequence.
//!
//! The forward pass builds a cumulative map per frame: each cell holds the
//! best achievable path score ending there, where a path may move at most
//! `radius` pixels per frame along each axis (a Chebyshev ball clipped to
//! the map bounds). Backtracking from the argmax of the final cumulative
//! map recovers the globally optimal track.
//!
//! Ties are broken identically everywhere: among equal-valued candidates
//! the smallest (y, x) wins, both for the final-frame argmax and for each
//! stored backpointer. The brute-force oracle in this module realizes the
//! same rule by minimizing the reversed point sequence lexicographically,
//! so optimal paths compare equal coordinate-for-coordinate.
//!
//! Also here: a greedy per-frame-argmax baseline (the locally optimal
//! tracker that occlusion defeats) and an exhaustive enumeration oracle
//! for verification on small instances.

use crate::error::{Error, Result};
use crate::map::{path_score, PixelCoord, ProbSequence, SlopeConstraint, TrackPath};

/// Sentinel for "no predecessor stored".
const NO_PREDECESSOR: u32 = u32::MAX;

/// Fixes the frame-0 path point to a known target location.
///
/// Realized as a hard constraint: every other frame-0 cell starts at the
/// minus-infinity sentinel, so all optimal paths begin at the anchor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Anchor {
    pub position: PixelCoord,
}

impl Anchor {
    pub fn at(x: u32, y: u32) -> Self {
        Self {
            position: PixelCoord::new(x, y),
        }
    }
}

/// Cumulative score grids plus dense backpointer grids for frames 1..T-1.
///
/// Inadmissible cells (unreachable under an anchor) hold `f64::NEG_INFINITY`;
/// the sentinel never arises from data because map values are nonnegative,
/// and the recurrence checks for it before adding.
#[derive(Debug, Clone)]
pub struct DpTable {
    width: u32,
    height: u32,
    cumulative: Vec<Vec<f64>>,
    predecessors: Vec<Vec<u32>>,
}

impl DpTable {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn frames(&self) -> usize {
        self.cumulative.len()
    }

    /// Cumulative score grid for frame `t`, row-major.
    pub fn cumulative(&self, t: usize) -> &[f64] {
        &self.cumulative[t]
    }

    /// Best path score ending at `p` in frame `t` (`-inf` if inadmissible).
    pub fn score_at(&self, t: usize, p: PixelCoord) -> f64 {
        self.cumulative[t][p.y as usize * self.width as usize + p.x as usize]
    }

    /// Stored predecessor of `p` at frame `t >= 1`, if the cell is reachable.
    pub fn predecessor(&self, t: usize, p: PixelCoord) -> Option<PixelCoord> {
        assert!(t >= 1, "frame 0 has no predecessors");
        let idx = p.y as usize * self.width as usize + p.x as usize;
        let packed = self.predecessors[t - 1][idx];
        if packed == NO_PREDECESSOR {
            None
        } else {
            Some(PixelCoord::new(packed % self.width, packed / self.width))
        }
    }

    /// Argmax of the final cumulative map, smallest (y, x) on ties.
    /// `None` when every final cell is the sentinel.
    fn final_argmax(&self) -> Option<(PixelCoord, f64)> {
        let last = self.cumulative.last().expect("at least one frame");
        let mut best: Option<(usize, f64)> = None;
        for (i, &v) in last.iter().enumerate() {
            if v == f64::NEG_INFINITY {
                continue;
            }
            match best {
                Some((_, b)) if v <= b => {}
                _ => best = Some((i, v)),
            }
        }
        best.map(|(i, v)| {
            (
                PixelCoord::new(
                    (i % self.width as usize) as u32,
                    (i / self.width as usize) as u32,
                ),
                v,
            )
        })
    }

    #[cfg(test)]
    pub(crate) fn for_tests(
        width: u32,
        height: u32,
        cumulative: Vec<Vec<f64>>,
        predecessors: Vec<Vec<u32>>,
    ) -> Self {
        Self {
            width,
            height,
            cumulative,
            predecessors,
        }
    }
}

fn check_anchor(seq: &ProbSequence, anchor: Option<Anchor>) -> Result<Option<Anchor>> {
    if let Some(a) = anchor {
        if !seq.frame(0).contains(a.position) {
            return Err(Error::OutOfBounds(format!(
                "anchor {} outside {}x{} map",
                a.position,
                seq.width(),
                seq.height()
            )));
        }
    }
    Ok(anchor)
}

/// Forward pass: builds the cumulative DP map frame by frame.
///
/// With an anchor, frame 0 is admissible only at the anchor cell; without,
/// every frame-0 cell starts at its own map value. Cells whose entire
/// predecessor neighborhood is inadmissible stay at the sentinel.
pub fn dp_forward(
    seq: &ProbSequence,
    constraint: SlopeConstraint,
    anchor: Option<Anchor>,
) -> Result<DpTable> {
    let anchor = check_anchor(seq, anchor)?;
    let width = seq.width();
    let height = seq.height();
    let cells = width as usize * height as usize;
    let frames = seq.len();

    let mut cumulative = Vec::with_capacity(frames);
    let mut predecessors = Vec::with_capacity(frames.saturating_sub(1));

    let first = match anchor {
        Some(a) => {
            let mut grid = vec![f64::NEG_INFINITY; cells];
            let idx = seq.frame(0).index_of(a.position);
            grid[idx] = seq.frame(0).values()[idx];
            grid
        }
        None => seq.frame(0).values().to_vec(),
    };
    cumulative.push(first);

    for t in 1..frames {
        let prev = &cumulative[t - 1];
        let values = seq.frame(t).values();
        let mut cur = vec![f64::NEG_INFINITY; cells];
        let mut pred = vec![NO_PREDECESSOR; cells];

        for y in 0..height {
            for x in 0..width {
                let (x0, x1, y0, y1) = constraint.clipped(PixelCoord::new(x, y), width, height);
                // Raster scan + strict `>` keeps the smallest (y, x) argmax.
                let mut best = f64::NEG_INFINITY;
                let mut best_idx = NO_PREDECESSOR;
                for ny in y0..=y1 {
                    let row = ny as usize * width as usize;
                    for nx in x0..=x1 {
                        let s = prev[row + nx as usize];
                        if s > best {
                            best = s;
                            best_idx = (row + nx as usize) as u32;
                        }
                    }
                }
                if best != f64::NEG_INFINITY {
                    let idx = y as usize * width as usize + x as usize;
                    cur[idx] = values[idx] + best;
                    pred[idx] = best_idx;
                }
            }
        }
        cumulative.push(cur);
        predecessors.push(pred);
    }

    Ok(DpTable {
        width,
        height,
        cumulative,
        predecessors,
    })
}

/// Recovers the optimal track from a forward table: final-frame argmax,
/// then follow backpointers to frame 0.
pub fn dp_backtrack(table: &DpTable, seq: &ProbSequence) -> Result<TrackPath> {
    if table.width != seq.width() || table.height != seq.height() || table.frames() != seq.len() {
        return Err(Error::DimensionMismatch(format!(
            "table is {}x{}x{} but sequence is {}x{}x{}",
            table.width,
            table.height,
            table.frames(),
            seq.width(),
            seq.height(),
            seq.len()
        )));
    }
    let (end, score) = table.final_argmax().ok_or(Error::NoFeasiblePath)?;

    let frames = table.frames();
    let mut points = vec![end; frames];
    for t in (1..frames).rev() {
        let prev = table
            .predecessor(t, points[t])
            .expect("reachable cells always store a predecessor");
        points[t - 1] = prev;
    }
    Ok(TrackPath { points, score })
}

/// Globally optimal track: forward pass followed by backtracking.
pub fn track(
    seq: &ProbSequence,
    constraint: SlopeConstraint,
    anchor: Option<Anchor>,
) -> Result<TrackPath> {
    let table = dp_forward(seq, constraint, anchor)?;
    dp_backtrack(&table, seq)
}

/// Greedy baseline: frame 0 at the anchor (or global argmax), then the raw
/// argmax of the current frame inside the constraint neighborhood of the
/// previous point. Same tie-break as the DP.
pub fn greedy_track(
    seq: &ProbSequence,
    constraint: SlopeConstraint,
    anchor: Option<Anchor>,
) -> Result<TrackPath> {
    let anchor = check_anchor(seq, anchor)?;
    let width = seq.width();
    let height = seq.height();

    let start = match anchor {
        Some(a) => a.position,
        None => seq.frame(0).argmax(),
    };
    let mut points = Vec::with_capacity(seq.len());
    let mut score = seq.frame(0).value_at(start);
    points.push(start);

    for t in 1..seq.len() {
        let values = seq.frame(t).values();
        let prev = points[t - 1];
        let (x0, x1, y0, y1) = constraint.clipped(prev, width, height);
        let mut best = f64::NEG_INFINITY;
        let mut best_point = prev;
        for ny in y0..=y1 {
            let row = ny as usize * width as usize;
            for nx in x0..=x1 {
                let v = values[row + nx as usize];
                if v > best {
                    best = v;
                    best_point = PixelCoord::new(nx, ny);
                }
            }
        }
        score += best;
        points.push(best_point);
    }
    Ok(TrackPath { points, score })
}

/// Exhaustive verification oracle: enumerates every constraint-feasible path
/// and returns a maximum-score one under the shared tie-break (compare the
/// final point first, then walk backwards — the order the DP backtrack
/// realizes). Refuses instances beyond `T <= 6`, `W*H <= 36`.
pub fn brute_force_track(
    seq: &ProbSequence,
    constraint: SlopeConstraint,
    anchor: Option<Anchor>,
) -> Result<TrackPath> {
    let anchor = check_anchor(seq, anchor)?;
    let cells = seq.width() as usize * seq.height() as usize;
    if seq.len() > 6 || cells > 36 {
        return Err(Error::RefuseTooLarge(format!(
            "T={} cells={} exceeds T<=6, W*H<=36",
            seq.len(),
            cells
        )));
    }

    struct Search<'a> {
        seq: &'a ProbSequence,
        constraint: SlopeConstraint,
        current: Vec<PixelCoord>,
        best: Option<(f64, Vec<PixelCoord>)>,
    }

    // True when `a` precedes `b` in reverse-time lexicographic (y, x) order.
    fn reverse_lex_less(a: &[PixelCoord], b: &[PixelCoord]) -> bool {
        for (pa, pb) in a.iter().rev().zip(b.iter().rev()) {
            if pa != pb {
                return pa < pb;
            }
        }
        false
    }

    impl Search<'_> {
        fn extend(&mut self, t: usize, sum: f64) {
            if t == self.seq.len() {
                match &self.best {
                    Some((s, p))
                        if sum < *s || (sum == *s && !reverse_lex_less(&self.current, p)) => {}
                    _ => self.best = Some((sum, self.current.clone())),
                }
                return;
            }
            let width = self.seq.width();
            let frame = self.seq.frame(t);
            let (x0, x1, y0, y1) =
                self.constraint
                    .clipped(self.current[t - 1], width, self.seq.height());
            for ny in y0..=y1 {
                for nx in x0..=x1 {
                    let p = PixelCoord::new(nx, ny);
                    self.current.push(p);
                    self.extend(t + 1, sum + frame.value_at(p));
                    self.current.pop();
                }
            }
        }
    }

    let starts: Vec<PixelCoord> = match anchor {
        Some(a) => vec![a.position],
        None => (0..seq.height())
            .flat_map(|y| (0..seq.width()).map(move |x| PixelCoord::new(x, y)))
            .collect(),
    };

    let mut search = Search {
        seq,
        constraint,
        current: Vec::with_capacity(seq.len()),
        best: None,
    };
    for start in starts {
        search.current.push(start);
        search.extend(1, seq.frame(0).value_at(start));
        search.current.pop();
    }
    let (score, points) = search.best.expect("at least one feasible path exists");
    Ok(TrackPath { points, score })
}

/// One DP-vs-oracle discrepancy found by [`oracle_check`].
#[derive(Debug, Clone)]
pub struct OracleMismatch {
    pub case_index: usize,
    pub detail: String,
}

/// Randomized equivalence run: seeded random instances with T in 2..=5,
/// dims in 2..=5, r in 0..=2, values uniform in [0, 1), an anchor on every
/// odd case. Checks bit-exact score equality, coordinate-exact path
/// equality, slope feasibility, and score recomputability.
pub fn oracle_check(seed: u64, cases: usize) -> Vec<OracleMismatch> {
    use rand::{Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();

    for case in 0..cases {
        let width = rng.gen_range(2..=5u32);
        let height = rng.gen_range(2..=5u32);
        let frames = rng.gen_range(2..=5usize);
        let radius = rng.gen_range(0..=2u32);
        let maps = (0..frames)
            .map(|_| {
                let values = (0..width * height).map(|_| rng.gen::<f64>()).collect();
                crate::map::ProbMap::new(width, height, values).expect("uniform values are valid")
            })
            .collect();
        let seq = ProbSequence::new(maps).expect("uniform frames");
        let anchor = if case % 2 == 1 {
            Some(Anchor::at(
                rng.gen_range(0..width),
                rng.gen_range(0..height),
            ))
        } else {
            None
        };
        let constraint = SlopeConstraint::new(radius);

        let dp = track(&seq, constraint, anchor).expect("dp track on valid instance");
        let oracle =
            brute_force_track(&seq, constraint, anchor).expect("instance within oracle bounds");

        let mut complain = |detail: String| {
            mismatches.push(OracleMismatch {
                case_index: case,
                detail,
            })
        };

        if dp.score.to_bits() != oracle.score.to_bits() {
            complain(format!(
                "score mismatch: dp={:?} oracle={:?}",
                dp.score, oracle.score
            ));
        }
        if dp.points != oracle.points {
            complain(format!(
                "path mismatch: dp={:?} oracle={:?}",
                dp.points, oracle.points
            ));
        }
        for t in 1..dp.points.len() {
            if !constraint.allows(dp.points[t - 1], dp.points[t]) {
                complain(format!("slope violation at frame {t}"));
            }
        }
        let recomputed = path_score(&seq, &dp.points).expect("dp path is in bounds");
        if (recomputed - dp.score).abs() > 1e-9 {
            complain(format!(
                "score not recomputable: stored {} recomputed {recomputed}",
                dp.score
            ));
        }
    }
    mismatches
}
