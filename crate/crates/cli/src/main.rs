//! `design`: build, verify, evaluate and round experimental designs.

mod commands;
mod config;
mod params;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "design", version, about = "Optimal designs on compact groups and homogeneous spaces")]
struct Cli {
    /// Read the subcommand and its flags from a JSON file instead.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a design and write it to a file (or stdout).
    Build(BuildArgs),
    /// Check the lambda-design property level by level.
    Verify(VerifyArgs),
    /// Evaluate Phi_p / Phi_Es criteria and efficiencies as CSV.
    Criteria(CriteriaArgs),
    /// Round a weighted design to an exact design of size n.
    Round(RoundArgs),
    /// Report the design strength that guarantees optimality for a model.
    Strength(StrengthArgs),
}

#[derive(Args, Debug)]
struct BuildArgs {
    /// s1, t<d>, s2, s3, so3 or s2xso3.
    #[arg(long)]
    manifold: String,
    /// circle, torus, mimura, bajnok, grid, project, product, haar, tetrahedral, icosahedron, file.
    #[arg(long)]
    construct: String,
    /// Point count for `circle`, sample count for `haar`.
    #[arg(long)]
    points: Option<usize>,
    /// Comma-separated grid counts (`torus`, `grid`).
    #[arg(long)]
    counts: Option<String>,
    /// Polar-angle placement for grids: endpoints, midpoint, left-open, cosine-endpoints.
    #[arg(long)]
    convention: Option<String>,
    /// Input design (`project`, `file`).
    #[arg(long)]
    input: Option<PathBuf>,
    /// First factor of a product (S^2 design).
    #[arg(long)]
    a: Option<PathBuf>,
    /// Second factor of a product (SO(3) design).
    #[arg(long)]
    b: Option<PathBuf>,
    /// Frobenius tolerance for merging projected rotations.
    #[arg(long, default_value_t = lambda_design::designs::DEFAULT_DEDUP_TOL)]
    dedup_tol: f64,
    /// Interval-design strength for `bajnok`.
    #[arg(long, default_value_t = 2)]
    strength: u32,
    #[arg(long, default_value_t = 2)]
    n1: usize,
    #[arg(long, default_value_t = 2)]
    n2: usize,
    #[arg(long, default_value_t = 3)]
    circle_points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; `.json` selects JSON, anything else the text format.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    manifold: String,
    #[arg(long)]
    input: PathBuf,
    /// Highest level whose basis functions must average to zero.
    #[arg(long)]
    max_level: usize,
}

#[derive(Args, Debug)]
struct CriteriaArgs {
    #[arg(long)]
    manifold: String,
    /// Model degree; comma-separated per torus axis, or `sphere,rotation` for s2xso3.
    #[arg(long)]
    degree: String,
    #[arg(long)]
    input: PathBuf,
    /// Reference design; defaults to the Haar measure (M = I).
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Selected levels, comma-separated; defaults to all.
    #[arg(long)]
    levels: Option<String>,
    /// Phi_p exponents: numbers, `-inf`, or ranges `a..b:step` (a <= p < b). Repeatable.
    #[arg(long, allow_hyphen_values = true)]
    p: Vec<String>,
    /// Phi_Es sizes: numbers or inclusive ranges `a..b`. Repeatable.
    #[arg(long)]
    es: Vec<String>,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RoundArgs {
    #[arg(long)]
    input: PathBuf,
    /// Manifold of a text input (JSON files carry their own).
    #[arg(long)]
    manifold: Option<String>,
    #[arg(long)]
    n: u64,
    /// JSON output with weights n_i / n and the counts.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StrengthArgs {
    #[arg(long)]
    manifold: String,
    #[arg(long)]
    degree: String,
    /// general or cg (Clebsch-Gordan).
    #[arg(long, default_value = "cg")]
    mode: String,
}

/// Failure carrying the process exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<lambda_design::Error> for Failure {
    fn from(e: lambda_design::Error) -> Self {
        use lambda_design::Error as E;
        let code = match e {
            E::Io(_) | E::Parse { .. } | E::Json(_) => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: 3, message: e.to_string() }
    }
}

fn parse(args: Vec<String>) -> Result<Cli, ExitCode> {
    Cli::try_parse_from(args).map_err(|e| {
        let _ = e.print();
        if e.use_stderr() {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        }
    })
}

fn main() -> ExitCode {
    let mut cli = match parse(std::env::args().collect()) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if let Some(path) = cli.config.take() {
        if cli.command.is_some() {
            eprintln!("error: --config cannot be combined with a subcommand");
            return ExitCode::from(1);
        }
        let cfg = match RunConfig::load(&path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        };
        eprintln!("design {}", cfg.to_flag_string());
        let mut args = vec!["design".to_string()];
        args.extend(cfg.to_args());
        cli = match parse(args) {
            Ok(c) => c,
            Err(code) => return code,
        };
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand or --config is required (see --help)");
        return ExitCode::from(1);
    };
    let result = match command {
        Command::Build(a) => commands::build(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Criteria(a) => commands::criteria(&a),
        Command::Round(a) => commands::round(&a),
        Command::Strength(a) => commands::strength(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
