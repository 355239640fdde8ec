//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime error, 2 hard assertion failure,
//! 3 statistical flag only, 4 infeasible method, 64 bad usage.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use jitterbench::bounds::{evaluate_all, TailParams};
use jitterbench::discrepancy::{
    expected_l2sq_partition, expected_l2sq_random, l2_star, star_discrepancy, MethodPreference,
    StarOptions,
};
use jitterbench::experiments::{ExperimentConfig, ExperimentKind};
use jitterbench::generators::{
    gen_grid, gen_hammersley, gen_jittered, gen_partition_jittered, gen_uniform, GridMode,
};
use jitterbench::partition::Partition;
use jitterbench::{Error, PointSet, Result};

const EXIT_USAGE: u8 = 64;
const EXIT_INFEASIBLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "jitterbench",
    version,
    about = "Jittered sampling and star discrepancy workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set and write it to a file.
    Gen(GenArgs),
    /// Star discrepancy of a point-set file.
    Disc(DiscArgs),
    /// Squared L2 star discrepancy of a point-set file.
    L2(L2Args),
    /// Expected squared L2 discrepancy of a partition or of random points.
    ExpectL2(ExpectArgs),
    /// Evaluate every bound at (N, d) as CSV.
    Bounds(BoundsArgs),
    /// Run a configured experiment and write CSV and JSON reports.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Uniform,
    Grid,
    Jittered,
    Partition,
    Hammersley,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    kind: GenKind,
    #[arg(long)]
    dim: Option<usize>,
    /// Cells per axis (grid, jittered).
    #[arg(long)]
    m: Option<usize>,
    /// Number of points (uniform, hammersley).
    #[arg(long)]
    n: Option<usize>,
    /// Partition spec in JSON (partition).
    #[arg(long)]
    partition: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Place grid points at cell corners instead of centers.
    #[arg(long)]
    corner: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    ExactGrid,
    ExactBb,
    Heuristic,
    Auto,
}

impl From<MethodArg> for MethodPreference {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::ExactGrid => Self::ExactGrid,
            MethodArg::ExactBb => Self::ExactBb,
            MethodArg::Heuristic => Self::Heuristic,
            MethodArg::Auto => Self::Auto,
        }
    }
}

#[derive(Args)]
struct DiscArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct L2Args {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["partition", "random"])))]
struct ExpectArgs {
    #[arg(long)]
    partition: Option<PathBuf>,
    #[arg(long, requires_all = ["n", "dim"])]
    random: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: f64,
    #[arg(long)]
    dim: usize,
    /// DKW deviation.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Exponential-moment parameter.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Bernstein deviation.
    #[arg(long, default_value_t = 0.1)]
    y: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Table1,
    Partition,
    Scaling,
    Dkw,
    Moment,
    Kolmogorov,
    Hammersley,
}

impl From<ExperimentArg> for ExperimentKind {
    fn from(k: ExperimentArg) -> Self {
        match k {
            ExperimentArg::Table1 => Self::Table1,
            ExperimentArg::Partition => Self::PartitionPrinciple,
            ExperimentArg::Scaling => Self::Scaling,
            ExperimentArg::Dkw => Self::DkwTails,
            ExperimentArg::Moment => Self::MomentBound,
            ExperimentArg::Kolmogorov => Self::Kolmogorov,
            ExperimentArg::Hammersley => Self::HammersleyCompare,
        }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    kind: ExperimentArg,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn need<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required for --kind {kind}")))
}

fn read_points(path: &PathBuf) -> Result<PointSet> {
    PointSet::read_from(BufReader::new(File::open(path)?))
}

fn gen(a: GenArgs) -> Result<u8> {
    let points = match a.kind {
        GenKind::Uniform => gen_uniform(
            need(a.n, "n", "uniform")?,
            need(a.dim, "dim", "uniform")?,
            a.seed,
        )?,
        GenKind::Grid => {
            let mode = if a.corner {
                GridMode::Corner
            } else {
                GridMode::Centered
            };
            gen_grid(need(a.m, "m", "grid")?, need(a.dim, "dim", "grid")?, mode)?
        }
        GenKind::Jittered => gen_jittered(
            need(a.m, "m", "jittered")?,
            need(a.dim, "dim", "jittered")?,
            a.seed,
        )?,
        GenKind::Hammersley => gen_hammersley(
            need(a.n, "n", "hammersley")?,
            need(a.dim, "dim", "hammersley")?,
        )?,
        GenKind::Partition => {
            let part = Partition::load(need(a.partition, "partition", "partition")?)?;
            if let Some(d) = a.dim.filter(|&d| d != part.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: part.dim(),
                });
            }
            gen_partition_jittered(&part, a.seed)?
        }
    };
    let mut out = BufWriter::new(File::create(&a.out)?);
    points.write_to(&mut out)?;
    out.flush()?;
    Ok(0)
}

fn disc(a: DiscArgs) -> Result<u8> {
    let points = read_points(&a.input)?;
    let opts = StarOptions {
        method: a.method.into(),
        restarts: a.restarts,
        seed: a.seed,
        ..StarOptions::default()
    };
    let started = Instant::now();
    let res = star_discrepancy(&points, &opts).map_err(|e| match e {
        Error::BudgetExceeded { .. } => Error::InfeasibleMethod {
            method: "exact_grid".into(),
            cell: a.input.display().to_string(),
        },
        other => other,
    })?;
    let ms = started.elapsed().as_secs_f64() * 1e3;
    if a.json {
        let v = json!({
            "value": res.value,
            "witness": res.witness.upper.as_slice(),
            "method": res.method.as_str(),
            "is_exact": res.is_exact,
            "n": points.len(),
            "d": points.dim(),
            "wall_time_ms": ms,
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        let w: Vec<String> = res
            .witness
            .upper
            .as_slice()
            .iter()
            .map(|x| x.to_string())
            .collect();
        println!("value     {}", res.value);
        println!("witness   [{}]", w.join(", "));
        println!("method    {}", res.method);
        println!("exact     {}", res.is_exact);
    }
    Ok(0)
}

fn l2(a: L2Args) -> Result<u8> {
    let points = read_points(&a.input)?;
    let sq = l2_star(&points);
    if a.json {
        let v = json!({ "l2sq": sq, "l2": sq.sqrt(), "n": points.len(), "d": points.dim() });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("l2sq {sq}");
        println!("l2   {}", sq.sqrt());
    }
    Ok(0)
}

fn expect_l2(a: ExpectArgs) -> Result<u8> {
    if let Some(path) = a.partition {
        let part = Partition::load(path)?;
        let (n, d) = (part.n_cells(), part.dim());
        println!("partition {}", expected_l2sq_partition(&part));
        println!("random    {}", expected_l2sq_random(n, d));
    } else {
        let (n, d) = (
            a.n.expect("clap requires n"),
            a.dim.expect("clap requires dim"),
        );
        if n == 0 || d == 0 {
            return Err(Error::InvalidParameter("need n >= 1 and dim >= 1".into()));
        }
        println!("random    {}", expected_l2sq_random(n, d));
    }
    Ok(0)
}

fn bounds(a: BoundsArgs) -> Result<u8> {
    if a.n.is_nan() || a.n < 1.0 || a.dim == 0 {
        return Err(Error::InvalidParameter("need n >= 1 and dim >= 1".into()));
    }
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(["name", "value", "conjectural"])?;
    let tails = TailParams {
        eps: a.eps,
        t: a.t,
        y: a.y,
        delta: a.delta,
    };
    for b in evaluate_all(a.n, a.dim, tails) {
        w.write_record([
            b.name.to_string(),
            b.value.to_string(),
            b.conjectural.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(0)
}

fn experiment(a: ExperimentArgs) -> Result<u8> {
    let text = std::fs::read_to_string(&a.config)?;
    let cfg = ExperimentConfig::from_json(a.kind.into(), &text)?;
    let report = cfg.run()?;
    let (json_path, csv_path) = report.write_to_dir(&a.out)?;
    for f in &report.hard_failures {
        eprintln!("FAIL  {f}");
    }
    for f in &report.statistical_flags {
        eprintln!("FLAG  {f}");
    }
    println!("{}", csv_path.display());
    println!("{}", json_path.display());
    Ok(report.status().exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Disc(a) => disc(a),
        Command::L2(a) => l2(a),
        Command::ExpectL2(a) => expect_l2(a),
        Command::Bounds(a) => bounds(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InfeasibleMethod { .. } => EXIT_INFEASIBLE,
                Error::InvalidParameter(_) => EXIT_USAGE,
                _ => 1,
            })
        }
    }
}
