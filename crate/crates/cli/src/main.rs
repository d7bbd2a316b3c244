//! `exitsig`: compute the exact expected exit signature of planar Brownian
//! motion from the unit disc, and cross-check it.
//!
//! Exit status: 0 on success or a passed verification, 1 on a mismatch or an
//! internal consistency failure, 2 on invalid usage.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use exitsig_core::evaluator::{cartesianize, evaluate};
use exitsig_core::field::CartesianField;
use exitsig_core::mc::{mc_compare, simulate_exit_signature, SimConfig};
use exitsig_core::pde::{hierarchy_residuals, lyons_ni_hierarchy, oracle_compare};
use exitsig_core::poly::Monomial;
use exitsig_core::recurrence::{leading_term, solve, RadialSolution, SConstants};
use exitsig_core::{Error, Rational, TensorSeries, Word};

#[derive(Parser, Debug)]
#[command(name = "exitsig", version, about = "Expected signature of Brownian motion stopped at the unit circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact field as one polynomial per tensor word; optionally evaluated at a point.
    Compute {
        #[command(flatten)]
        level: LevelArg,
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Top-degree coefficient of each level along the radius, in closed form.
    Leading {
        #[command(flatten)]
        level: LevelArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the field against a direct level-by-level PDE solve.
    VerifyPde {
        #[command(flatten)]
        level: LevelArg,
        /// Perturb one coefficient before comparing (exercises the failure path).
        #[arg(long)]
        inject_fault: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the field against a Monte-Carlo estimate at one point.
    VerifyMc {
        /// Highest tensor level compared.
        #[arg(long, default_value_t = 3)]
        level: usize,
        #[command(flatten)]
        point: PointArgs,
        /// Number of simulated paths.
        #[arg(long, default_value_t = 200_000)]
        paths: u64,
        /// Time step of the random walk.
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Flag components whose z-score exceeds this.
        #[arg(long, default_value_t = 4.0)]
        sigmas: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Intermediate radial tables: boundary data, b and a coefficients, and φ.
    Export {
        #[command(flatten)]
        level: LevelArg,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct LevelArg {
    /// Truncation level N.
    #[arg(long, default_value_t = 4)]
    level: usize,
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct PointArgs {
    /// Cartesian point.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
    point: Option<Vec<f64>>,
    /// Polar point z = (R cos THETA, R sin THETA).
    #[arg(long, num_args = 2, value_names = ["R", "THETA"], allow_negative_numbers = true)]
    polar: Option<Vec<f64>>,
}

impl PointArgs {
    fn get(&self) -> Option<(f64, f64)> {
        if let Some(p) = &self.point {
            return Some((p[0], p[1]));
        }
        self.polar.as_ref().map(|p| (p[0] * p[1].cos(), p[0] * p[1].sin()))
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Mismatch(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

type CmdResult = Result<ExitCode, Failure>;

/// Files get pretty JSON; standard output gets one compact document per line.
fn emit(docs: &[(PathBuf, Value)]) -> Result<(), Failure> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    for (path, doc) in docs {
        if path.as_os_str().is_empty() {
            writeln!(lock, "{}", serde_json::to_string(doc).expect("serializable"))?;
        } else {
            fs::write(path, serde_json::to_string_pretty(doc).expect("serializable") + "\n")?;
        }
    }
    Ok(())
}

fn emit_one<T: Serialize>(output: &OutputArgs, doc: &T) -> Result<(), Failure> {
    let path = output.out.clone().unwrap_or_default();
    emit(&[(path, serde_json::to_value(doc).expect("serializable"))])
}

fn exact_field(level: usize) -> Result<(RadialSolution, CartesianField), Failure> {
    let sol = solve(level)?;
    let field = cartesianize(&sol.a)?;
    field.check_invariants()?;
    Ok((sol, field))
}

fn cmd_compute(level: usize, point: &PointArgs, output: &OutputArgs) -> CmdResult {
    let point = point.get();
    if let Some((x, y)) = point {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Failure::Usage(format!("point ({x}, {y}) is not finite")));
        }
    }
    let (_, field) = exact_field(level)?;
    let main = output.out.clone().unwrap_or_default();
    let mut docs = vec![(main.clone(), serde_json::to_value(&field).expect("serializable"))];
    if let Some(z) = point {
        let eval = evaluate(&field, z)?;
        let path = if main.as_os_str().is_empty() { main.clone() } else { main.with_extension("eval.json") };
        docs.push((path, serde_json::to_value(&eval).expect("serializable")));
    }
    emit(&docs)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_leading(level: usize, output: &OutputArgs) -> CmdResult {
    let consts = SConstants::new(level)?;
    let terms: Vec<Value> = (0..=level)
        .map(|n| {
            let lt = leading_term(n, &consts)?;
            Ok(json!({ "n": n, "tensor": lt.value }))
        })
        .collect::<Result<_, Error>>()?;
    let doc = json!({ "truncation_level": level, "terms": terms });
    emit_one(output, &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_pde(level: usize, inject_fault: bool, output: &OutputArgs) -> CmdResult {
    let sol = solve(level)?;
    let mut field = cartesianize(&sol.a)?;
    if inject_fault {
        let one = Rational::from_integer(1.into());
        field.add_to_component(Word::EMPTY, Monomial::ONE, &one);
    }
    let oracle = lyons_ni_hierarchy(level)?;
    let diff = oracle_compare(&field, &oracle);
    let mut problems = Vec::new();
    if let Err(e) = oracle.check_invariants() {
        problems.push(format!("oracle: {e}"));
    }
    let residuals = hierarchy_residuals(&oracle);
    if !residuals.is_empty() {
        problems.push(format!("oracle: {} PDE residuals nonzero", residuals.len()));
    }
    emit_one(output, &diff)?;
    for p in &problems {
        eprintln!("{p}");
    }
    if diff.is_empty() && problems.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("level {level}: {} coefficients differ", diff.len());
        Ok(ExitCode::from(1))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify_mc(
    level: usize,
    point: &PointArgs,
    paths: u64,
    dt: f64,
    seed: u64,
    sigmas: f64,
    output: &OutputArgs,
) -> CmdResult {
    if sigmas.is_nan() || sigmas <= 0.0 {
        return Err(Failure::Usage(format!("--sigmas must be positive, got {sigmas}")));
    }
    let start = point.get().unwrap_or((0.5, 0.0));
    let cfg = SimConfig { start, dt, paths, level, seed };
    cfg.validate()?;
    let (_, field) = exact_field(level)?;
    let exact = evaluate(&field, start)?;
    let est = simulate_exit_signature(&cfg)?;
    let rows = mc_compare(&est, &exact, sigmas)?;
    let flagged = rows.iter().filter(|r| r.flagged).count();
    emit_one(output, &rows)?;
    if flagged == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{flagged} of {} components beyond {sigmas} standard errors", rows.len());
        Ok(ExitCode::from(1))
    }
}

fn graded_json(entries: impl Iterator<Item = (usize, i32, TensorSeries)>) -> Vec<Value> {
    entries
        .map(|(n, beta, s)| json!({ "n": n, "beta": beta, "series": s }))
        .collect()
}

fn cmd_export(level: usize, output: &OutputArgs) -> CmdResult {
    let sol = solve(level)?;
    let boundary: Vec<Value> = sol
        .boundary
        .iter()
        .map(|(k, s)| json!({ "k": k, "series": s }))
        .collect();
    let b = graded_json(sol.b.entries.iter().map(|(&(n, beta), s)| (n, beta, s.clone())));
    let a = graded_json(sol.a.entries.iter().map(|(&(n, beta), s)| (n, beta, s.clone())));
    let phi: Vec<Value> = sol
        .phi
        .coefficients
        .iter()
        .map(|(n, s)| json!({ "n": n, "series": s }))
        .collect();
    let doc = json!({ "truncation_level": level, "boundary": boundary, "b": b, "a": a, "phi": phi });
    emit_one(output, &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Compute { level, point, output } => cmd_compute(level.level, &point, &output),
        Command::Leading { level, output } => cmd_leading(level.level, &output),
        Command::VerifyPde { level, inject_fault, output } => {
            cmd_verify_pde(level.level, inject_fault, &output)
        }
        Command::VerifyMc { level, point, paths, dt, seed, sigmas, output } => {
            cmd_verify_mc(level, &point, paths, dt, seed, sigmas, &output)
        }
        Command::Export { level, output } => cmd_export(level.level, &output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("exitsig: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("exitsig: {msg}");
            ExitCode::from(1)
        }
    }
}
