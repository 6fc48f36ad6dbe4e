//! Command-line frontend: track, eval, synth, bench-occlusion, oracle-check.
//!
//! Every command exits 0 on success and nonzero with a single
//! `error: <Code>: <detail>` line on stderr otherwise. All outputs are
//! deterministic given their inputs and seeds.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dptrack::dp::{greedy_track, oracle_check, track, Anchor};
use dptrack::error::Result;
use dptrack::eval::{evaluate, mean_error_from, rounded_anchor};
use dptrack::io::{pgm, pmseq, report, scenario};
use dptrack::map::{running_scores, GroundTruth, PixelCoord, SlopeConstraint, TrackPath};
use dptrack::synth::{occlusion_benchmark, render_scenario};

#[derive(Parser)]
#[command(
    name = "dptrack",
    about = "Globally optimal object tracking over probability-map sequences",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Track through a pmseq file or a directory of binary PGM frames.
    Track(TrackArgs),
    /// Score a track against ground truth.
    Eval(EvalArgs),
    /// Render a synthetic scenario to a pmseq file plus ground-truth CSV.
    Synth(SynthArgs),
    /// DP-vs-greedy sweep over occlusion lengths and constraint radii.
    BenchOcclusion(BenchArgs),
    /// Randomized DP-vs-brute-force equivalence run.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct TrackArgs {
    /// Input: a .pmseq file or a directory of P5 PGM frames.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Slope constraint radius in pixels.
    #[arg(long)]
    radius: u32,
    /// Anchor the first frame at X,Y (e.g. --init 12,34).
    #[arg(long, value_name = "X,Y", value_parser = parse_init)]
    init: Option<PixelCoord>,
    /// Use the greedy per-frame-argmax baseline instead of the DP.
    #[arg(long)]
    greedy: bool,
    #[arg(long, value_name = "CSV")]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Track CSV produced by `track`.
    #[arg(long, value_name = "CSV")]
    track: PathBuf,
    /// Ground truth CSV: `frame,cx,cy` centers or `frame,x,y,w,h` boxes.
    #[arg(long, value_name = "CSV")]
    gt: PathBuf,
    #[arg(long, default_value_t = 50.0)]
    max_threshold: f64,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[arg(long, value_name = "CSV")]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// Scenario description file.
    #[arg(long, value_name = "TXT")]
    scenario: PathBuf,
    #[arg(long, value_name = "PMSEQ")]
    out_seq: PathBuf,
    #[arg(long, value_name = "CSV")]
    out_gt: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Base scenario; its occlusion windows are replaced per sweep cell.
    #[arg(long, value_name = "TXT")]
    scenario: PathBuf,
    /// Occlusion lengths in frames, centered mid-sequence.
    #[arg(long, value_delimiter = ',', default_value = "0,2,4,8")]
    lengths: Vec<usize>,
    /// Slope constraint radii to pair with each length.
    #[arg(long, value_delimiter = ',', default_value = "2,5,10")]
    radii: Vec<u32>,
    #[arg(long, value_name = "CSV")]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    cases: usize,
}

fn parse_init(s: &str) -> std::result::Result<PixelCoord, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected X,Y, got '{s}'"))?;
    let x = x.trim().parse().map_err(|_| format!("bad x '{x}'"))?;
    let y = y.trim().parse().map_err(|_| format!("bad y '{y}'"))?;
    Ok(PixelCoord::new(x, y))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}: {}", e.code(), e);
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Track(args) => cmd_track(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Synth(args) => cmd_synth(args),
        Command::BenchOcclusion(args) => cmd_bench(args),
        Command::OracleCheck(args) => cmd_oracle(args),
    }
}

fn load_sequence(path: &Path) -> Result<dptrack::ProbSequence> {
    if path.is_dir() {
        pgm::read_pgm_dir(path)
    } else {
        pmseq::read_pmseq_file(path)
    }
}

fn cmd_track(args: TrackArgs) -> Result<ExitCode> {
    let seq = load_sequence(&args.input)?;
    let constraint = SlopeConstraint::new(args.radius);
    let anchor = args.init.map(|position| Anchor { position });
    let path: TrackPath = if args.greedy {
        greedy_track(&seq, constraint, anchor)?
    } else {
        track(&seq, constraint, anchor)?
    };
    let scores = running_scores(&seq, &path.points)?;
    std::fs::write(&args.out, report::track_csv(&path.points, &scores))?;
    println!(
        "tracked {} frames ({}), final score {}",
        seq.len(),
        if args.greedy { "greedy" } else { "dp" },
        path.score
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode> {
    let (points, _) = report::parse_track_csv(&std::fs::read_to_string(&args.track)?)?;
    let gt: GroundTruth = report::parse_gt_csv(&std::fs::read_to_string(&args.gt)?)?;
    let path = TrackPath { points, score: 0.0 };
    let result = evaluate(&path, &gt, args.max_threshold, args.step)?;
    std::fs::write(&args.out, report::eval_report_csv(&result))?;
    println!(
        "average error {} px, precision@20 {}",
        result.average_error, result.precision_at_20
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_synth(args: SynthArgs) -> Result<ExitCode> {
    let scenario = scenario::read_scenario_file(&args.scenario)?;
    let (seq, gt) = render_scenario(&scenario)?;
    pmseq::write_pmseq_file(&seq, &args.out_seq)?;
    std::fs::write(&args.out_gt, report::gt_csv(&gt))?;
    println!(
        "rendered {} frames of {}x{} (seed {}, noise rng {})",
        seq.len(),
        seq.width(),
        seq.height(),
        scenario.seed,
        dptrack::synth::NOISE_RNG_ALGORITHM
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let base = scenario::read_scenario_file(&args.scenario)?;
    let cells = occlusion_benchmark(&args.lengths, &args.radii, &base)?;

    let mut rows = Vec::with_capacity(cells.len());
    for (cell, sweep_scenario) in &cells {
        let (seq, gt) = render_scenario(sweep_scenario)?;
        let constraint = SlopeConstraint::new(cell.radius);
        let anchor = rounded_anchor(gt.centers[0], seq.width(), seq.height())?;

        let dp_path = track(&seq, constraint, Some(anchor))?;
        let greedy_path = greedy_track(&seq, constraint, Some(anchor))?;
        let dp = evaluate(&dp_path, &gt, 50.0, 1.0)?;
        let greedy = evaluate(&greedy_path, &gt, 50.0, 1.0)?;

        // Recovery is scored from the first frame after the window.
        let first_after = sweep_scenario
            .occlusions
            .first()
            .map(|w| w.end_frame + 1)
            .unwrap_or(0);
        rows.push(report::BenchRow {
            cell: *cell,
            dp_avg_error: dp.average_error,
            greedy_avg_error: greedy.average_error,
            dp_precision_at_20: dp.precision_at_20,
            greedy_precision_at_20: greedy.precision_at_20,
            dp_post_occlusion_error: mean_error_from(&dp.errors, first_after),
            greedy_post_occlusion_error: mean_error_from(&greedy.errors, first_after),
        });
    }
    std::fs::write(&args.out, report::bench_csv(&rows, base.seed))?;
    println!("swept {} cells", rows.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode> {
    let mismatches = oracle_check(args.seed, args.cases);
    for m in &mismatches {
        eprintln!("case {}: {}", m.case_index, m.detail);
    }
    println!(
        "oracle-check: {} cases, {} mismatches (seed {})",
        args.cases,
        mismatches.len(),
        args.seed
    );
    if mismatches.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}
