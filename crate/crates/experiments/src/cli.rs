//! The `intvol` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use intvol::bodies::{load_body, VPolytope};
use intvol::metrics::{delta_j, hausdorff, intrinsic_volume, Mode, SamplingPlan};

use crate::config::{A0Choice, ExperimentConfig, PlaneChoice};
use crate::error::{ExpError, ExpResult};
use crate::output::{num, write_csv, write_svg};
use crate::runners::{run_fibers, run_lemma, run_thm1, run_thm2, run_thm3, run_validation, FibersConfig, RunOutput};

#[derive(Debug, Parser)]
#[command(name = "intvol", version, about = "Intrinsic volume metrics on convex polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Sampling {
    #[arg(long, default_value_t = 2000)]
    pub subspaces: usize,
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "auto", value_parser = parse_mode)]
    pub mode: Mode,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct Sequence {
    #[arg(short = 'd')]
    pub d: usize,
    #[arg(short = 'j')]
    pub j: usize,
    #[arg(long, default_value_t = 6)]
    pub steps: usize,
    /// First needle length; defaults to 2 for thm1 and 1 otherwise.
    #[arg(long)]
    pub l0: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 2000)]
    pub subspaces: usize,
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
    #[arg(long, default_value = "auto", value_parser = parse_mode)]
    pub mode: Mode,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate delta_j between two bodies, or between a body and the empty set.
    Metric {
        #[arg(long = "body-a")]
        body_a: PathBuf,
        #[arg(long = "body-b", conflicts_with = "empty", required_unless_present = "empty")]
        body_b: Option<PathBuf>,
        #[arg(long)]
        empty: bool,
        #[arg(short = 'd')]
        d: usize,
        #[arg(short = 'j')]
        j: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Estimate the intrinsic volume V_j of a body.
    Intrinsic {
        #[arg(long)]
        body: PathBuf,
        #[arg(short = 'j')]
        j: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Hausdorff distance between two bodies.
    Hausdorff {
        #[arg(long = "body-a")]
        body_a: PathBuf,
        #[arg(long = "body-b")]
        body_b: PathBuf,
    },
    /// Prism-needle sequence: drift floor and delta_j against the claimed bound.
    Thm1(Sequence),
    /// Spindle sequence with dyadic step budget and block bounds.
    Thm2(Sequence),
    /// Spindle sequence scaled by a0 = delta_j(K0, empty).
    Thm3 {
        #[command(flatten)]
        seq: Sequence,
        #[arg(long, default_value = "auto")]
        a0: A0Choice,
    },
    /// Goodness-certificate statistics over Haar-random subspaces.
    Lemma {
        #[arg(short = 'd')]
        d: usize,
        #[arg(short = 'j')]
        j: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Estimator cross-checks against closed forms and exact planar oracles.
    Validate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Fiber-growth profile of body A over body B along the needle axis.
    Fibers {
        #[arg(long = "body-a")]
        body_a: PathBuf,
        #[arg(long = "body-b")]
        body_b: PathBuf,
        #[arg(long, default_value = "e1e2")]
        plane: PlaneChoice,
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
        /// Body whose transverse shadow defines the tube.
        #[arg(long)]
        tube: Option<PathBuf>,
        /// Needle axis as comma-separated coordinates.
        #[arg(long, value_delimiter = ',')]
        axis: Option<Vec<f64>>,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: intvol::Error| e.to_string())
}

fn load(path: &Path) -> ExpResult<VPolytope<f64>> {
    Ok(load_body(path)?)
}

fn check_dim(body: &VPolytope<f64>, d: usize, path: &Path) -> ExpResult<()> {
    if body.ambient_dim() != d {
        return Err(ExpError::config(format!("{}: body has dimension {}, expected {d}", path.display(), body.ambient_dim())));
    }
    Ok(())
}

fn pool(workers: usize) -> ExpResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ExpError::config(format!("cannot start worker pool: {e}")))
}

fn plan_of(s: &Sampling) -> ExpResult<SamplingPlan> {
    if s.subspaces == 0 || s.points == 0 {
        return Err(ExpError::config("--subspaces and --points must be positive"));
    }
    Ok(SamplingPlan::new(s.subspaces, s.points, s.seed, s.mode))
}

fn print_estimate(out: &mut dyn Write, est: &intvol::MetricEstimate) {
    let _ = writeln!(out, "value,std_error,n_subspaces,n_points_per_subspace,exact");
    let _ = writeln!(
        out,
        "{},{},{},{},{}",
        num(est.value),
        num(est.std_error),
        est.n_subspaces,
        est.n_points_per_subspace,
        est.exact
    );
}

fn experiment(seq: &Sequence, default_l0: f64) -> ExperimentConfig {
    ExperimentConfig {
        d: seq.d,
        j: seq.j,
        seed: seq.seed,
        n_subspaces: seq.subspaces,
        n_points: seq.points,
        steps: seq.steps,
        l0: seq.l0.unwrap_or(default_l0),
        workers: seq.workers,
        out_csv: seq.out.clone(),
        out_svg: seq.svg.clone(),
        mode: seq.mode,
    }
}

/// Writes the table (and plot) and turns failed assertions into exit status 2.
fn finish(
    run: RunOutput,
    csv: &Path,
    svg: Option<(&Path, &str, &[&str], bool)>,
    err: &mut dyn Write,
) -> ExpResult<i32> {
    write_csv(&run.table, csv)?;
    if let Some((path, x, ys, log)) = svg {
        write_svg(&run.table, x, ys, path, log)?;
    }
    for f in &run.failures {
        let _ = writeln!(err, "assertion failed: {f}");
    }
    Ok(if run.passed() { 0 } else { 2 })
}

pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> ExpResult<i32> {
    match cli.command {
        Command::Metric { body_a, body_b, empty: _, d, j, sampling } => {
            let a = load(&body_a)?;
            check_dim(&a, d, &body_a)?;
            let b = match &body_b {
                Some(p) => {
                    let b = load(p)?;
                    check_dim(&b, d, p)?;
                    Some(b)
                }
                None => None,
            };
            let plan = plan_of(&sampling)?;
            let est = pool(sampling.workers)?.install(|| delta_j(Some(&a), b.as_ref(), j, &plan))?;
            print_estimate(out, &est);
            Ok(0)
        }
        Command::Intrinsic { body, j, sampling } => {
            let k = load(&body)?;
            let plan = plan_of(&sampling)?;
            let est = pool(sampling.workers)?.install(|| intrinsic_volume(&k, j, &plan))?;
            print_estimate(out, &est);
            Ok(0)
        }
        Command::Hausdorff { body_a, body_b } => {
            let value = hausdorff(&load(&body_a)?, &load(&body_b)?)?;
            let _ = writeln!(out, "{}", num(value));
            Ok(0)
        }
        Command::Thm1(seq) => {
            let cfg = experiment(&seq, 2.0);
            let run = run_thm1(&cfg)?;
            let svg = cfg.out_svg.as_deref().map(|p| (p, "L_i", &["delta_hat", "claimed_bound"][..], true));
            finish(run, &cfg.out_csv, svg, err)
        }
        Command::Thm2(seq) => {
            let cfg = experiment(&seq, 1.0);
            let run = run_thm2(&cfg)?;
            let svg = cfg.out_svg.as_deref().map(|p| (p, "L_m", &["step_delta_hat", "claimed_step"][..], true));
            finish(run, &cfg.out_csv, svg, err)
        }
        Command::Thm3 { seq, a0 } => {
            let cfg = experiment(&seq, 1.0);
            let run = run_thm3(&cfg, a0)?;
            let svg = cfg.out_svg.as_deref().map(|p| (p, "L_m", &["delta_to_empty_hat", "claimed_floor"][..], true));
            finish(run, &cfg.out_csv, svg, err)
        }
        Command::Lemma { d, j, samples, seed, out: path, workers } => {
            let cfg = ExperimentConfig {
                d,
                j,
                seed,
                n_subspaces: samples,
                n_points: 1,
                workers,
                out_csv: path.clone(),
                ..ExperimentConfig::default()
            };
            finish(run_lemma(&cfg)?, &path, None, err)
        }
        Command::Validate { seed, out: path, workers } => finish(run_validation(seed, workers)?, &path, None, err),
        Command::Fibers { body_a, body_b, plane, grid, out: path, tube, axis } => {
            let cfg = FibersConfig { body_a, body_b, plane, grid, tube, axis };
            finish(run_fibers(&cfg)?, &path, None, err)
        }
    }
}

/// Parses arguments and runs; returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    3
                }
            };
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
