use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use logmink::flow::{verify_self_similar, FlowSpec, SelfSimilarFlow};
use logmink::functional::DEFAULT_MESH_FACTOR;
use logmink::geometry::{polygon_from_json, polygon_to_json};
use logmink::measure::{check_sscc, load_measure};
use logmink::report::{
    eval_json, flow_report_json, flow_svg, frames_csv, solve_result_json, solve_svg, write_text,
};
use logmink::selftest::{Scale, Suite, CRITERIA};
use logmink::solver::{SolveResult, SolveStatus};
use logmink::{
    solve_log_minkowski, Error, FunctionalDescriptor, FunctionalKind, Resolution, SolveOptions,
};

const EXIT_ERROR: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_REFUSED: u8 = 3;

const DEFAULTS: &str = "\
Defaults:
  mesh-h      0.03  (maximum edge length = mesh-h x circumradius; frozen at the first iterate)
  tol-grad    1e-3  (sup norm of the log-coordinate gradient)
  max-iters   500
  step        0.5   (initial log-coordinate step, Barzilai-Borwein afterwards)
  min-support 1e-6  (relative to the geometric mean of the support vector)
  threads     LOGMINK_THREADS, otherwise all cores

Exit codes: 0 ok, 1 input or I/O error, 2 not converged (result still written), 3 measure refused";

#[derive(Parser)]
#[command(name = "logmink", version, about = "Planar even log-Minkowski problems for volume, torsion and the first Dirichlet eigenvalue", after_help = DEFAULTS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve V_{F,K} = nu and write the result as JSON.
    Solve(SolveArgs),
    /// Check the strict subspace concentration condition.
    CheckMeasure {
        /// Measure JSON file.
        measure: PathBuf,
    },
    /// Evaluate F, the surface density and V_{F,K} on a polygon.
    Eval {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        functional: FunctionalKind,
        #[arg(long, default_value_t = DEFAULT_MESH_FACTOR)]
        mesh_h: f64,
    },
    /// Build and verify a self-similar shrinking solution.
    Flow(FlowArgs),
    /// Run the oracle-backed check suite.
    Selftest {
        /// Reduced sample counts.
        #[arg(long)]
        quick: bool,
        /// Run only these criteria (comma separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Args)]
struct SolverArgs {
    /// Mesh size factor relative to the circumradius.
    #[arg(long, default_value_t = DEFAULT_MESH_FACTOR)]
    mesh_h: f64,
    #[arg(long, default_value_t = 1e-3)]
    tol_grad: f64,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
}

impl SolverArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            tol_grad: self.tol_grad,
            max_iters: self.max_iters,
            resolution: Resolution::Relative(self.mesh_h),
            ..SolveOptions::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    functional: FunctionalKind,
    #[arg(long)]
    measure: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct FlowArgs {
    /// torsion or volume
    #[arg(long)]
    functional: FunctionalKind,
    /// Weight measure JSON file.
    #[arg(long)]
    measure: PathBuf,
    #[arg(long)]
    death_time: f64,
    /// Number of frames at t = kT/n, k = 0..n.
    #[arg(long)]
    frames: usize,
    #[arg(long)]
    out_dir: PathBuf,
    /// Also write flow.svg.
    #[arg(long)]
    svg: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

enum Outcome {
    Done,
    NotConverged,
    Refused,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!(
                "logmink: {}",
                text.lines().next().unwrap_or("invalid command line")
            );
            return ExitCode::from(EXIT_ERROR);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("logmink: {e}");
        return ExitCode::from(EXIT_ERROR);
    }
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NotConverged) => ExitCode::from(EXIT_NOT_CONVERGED),
        Ok(Outcome::Refused) => ExitCode::from(EXIT_REFUSED),
        Err(e) => {
            eprintln!("logmink: {}", e.to_string().replace('\n', " "));
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn configure_threads() -> logmink::Result<()> {
    let Ok(value) = std::env::var("LOGMINK_THREADS") else {
        return Ok(());
    };
    let n: usize = value.parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        Error::InvalidInput(format!(
            "LOGMINK_THREADS must be a positive integer, got {value:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Resource(e.to_string()))
}

fn run(command: Command) -> logmink::Result<Outcome> {
    match command {
        Command::Solve(args) => solve(args),
        Command::CheckMeasure { measure } => {
            let report = check_sscc(&load_measure(measure)?);
            println!("{}", report.describe());
            Ok(if report.passes() {
                Outcome::Done
            } else {
                Outcome::Refused
            })
        }
        Command::Eval {
            polygon,
            functional,
            mesh_h,
        } => {
            let p = polygon_from_json(&read(&polygon)?)?;
            let f = FunctionalDescriptor::with_resolution(functional, Resolution::Relative(mesh_h));
            let analysis = f.analyze(&p)?;
            println!("{}", eval_json(&f, &p, &analysis)?);
            Ok(Outcome::Done)
        }
        Command::Flow(args) => flow(args),
        Command::Selftest { quick, only, seed } => {
            let mut suite = Suite::new(if quick { Scale::Quick } else { Scale::Full }, seed);
            let ids: Vec<usize> = if only.is_empty() {
                CRITERIA.iter().map(|c| c.0).collect()
            } else {
                only
            };
            let mut all = true;
            for id in ids {
                let o = suite.run_one(id);
                println!("{}", o.line());
                all &= o.passed;
            }
            Ok(if all {
                Outcome::Done
            } else {
                Outcome::NotConverged
            })
        }
    }
}

fn read(path: &Path) -> logmink::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

/// Splits a solver outcome into a result to write and an exit outcome.
fn settle(r: logmink::Result<SolveResult>) -> logmink::Result<(Option<SolveResult>, Outcome)> {
    match r {
        Ok(r) if r.status == SolveStatus::Converged => Ok((Some(r), Outcome::Done)),
        Ok(r) => Ok((Some(r), Outcome::NotConverged)),
        Err(Error::NotConverged { reason, result }) => {
            eprintln!("logmink: not converged: {reason}");
            Ok((Some(*result), Outcome::NotConverged))
        }
        Err(Error::SsccRefused(msg)) => {
            eprintln!("logmink: {}", msg.replace('\n', " "));
            Ok((None, Outcome::Refused))
        }
        Err(e) => Err(e),
    }
}

fn solve(args: SolveArgs) -> logmink::Result<Outcome> {
    let nu = load_measure(&args.measure)?;
    let opts = args.solver.options();
    opts.validate()?;
    let (result, outcome) = settle(solve_log_minkowski(
        &nu,
        &FunctionalDescriptor::new(args.functional),
        &opts,
    ))?;
    if let Some(r) = result {
        write_text(&args.out, &solve_result_json(&r)?)?;
        if let Some(svg) = &args.svg {
            write_text(svg, &solve_svg(&r))?;
        }
    }
    Ok(outcome)
}

fn flow(args: FlowArgs) -> logmink::Result<Outcome> {
    if args.frames == 0 {
        return Err(Error::InvalidInput("--frames must be at least 1".into()));
    }
    let spec = FlowSpec::new(
        FunctionalDescriptor::new(args.functional),
        args.death_time,
        load_measure(&args.measure)?,
        FlowSpec::uniform_times(args.death_time, args.frames),
    )?;
    let opts = args.solver.options();
    opts.validate()?;
    let (result, mut outcome) = settle(solve_log_minkowski(&spec.weight, &spec.functional, &opts))?;
    let Some(solution) = result else {
        return Ok(outcome);
    };
    std::fs::create_dir_all(&args.out_dir)?;
    let dir = args.out_dir;
    write_text(dir.join("solution.json"), &solve_result_json(&solution)?)?;
    let flow = SelfSimilarFlow::from_solution(&spec, solution)?;
    write_text(dir.join("frames.csv"), &frames_csv(&flow.frames))?;
    for (k, frame) in flow.frames.iter().enumerate() {
        write_text(
            dir.join(format!("frame_{k:04}.json")),
            &polygon_to_json(&frame.body)?,
        )?;
    }
    let report = verify_self_similar(&flow, &spec)?;
    write_text(dir.join("report.json"), &flow_report_json(&report)?)?;
    if args.svg {
        write_text(dir.join("flow.svg"), &flow_svg(&flow.frames))?;
    }
    if !report.passed {
        eprintln!("logmink: flow verification failed, see report.json");
        if matches!(outcome, Outcome::Done) {
            outcome = Outcome::NotConverged;
        }
    }
    Ok(outcome)
}
