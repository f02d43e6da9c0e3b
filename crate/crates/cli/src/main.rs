//! `strongring`: invariants, verification suites and operator export for
//! elements of the strong ring.
//!
//! Exit codes: 0 success, 1 failed verification or computation error,
//! 2 usage or parse error, 3 resource cap exceeded.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use strongring::dynamics::{lax_flow, LaxOptions};
use strongring::expr::parse_with_base;
use strongring::invariants::{invariant_report, ReportOptions, WuSemantics};
use strongring::operators::{export_operator, operator_bundle, OperatorTag};
use strongring::spectral::{barycentric_limit_experiment, spectrum, SPECTRUM_CAP};
use strongring::verify::{verify, Suite, VerifyOptions};
use strongring::{Error, RingElement};

#[derive(Parser)]
#[command(name = "strongring", version, about = "Strong ring of simplicial complexes")]
struct Cli {
    /// Worker threads for parallel sections (defaults to all cores).
    #[arg(long, env = "STRONGRING_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Semantics {
    Pairwise,
    Common,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant report of a ring expression, as JSON.
    Invariants {
        expr: String,
        /// Exact Betti numbers and Poincaré polynomial.
        #[arg(long)]
        betti: bool,
        /// Compute Betti numbers on full product terms instead of factorwise.
        #[arg(long, requires = "betti")]
        betti_direct: bool,
        /// Wu characteristic orders (repeatable).
        #[arg(long = "wu", default_values_t = [2usize])]
        wu: Vec<usize>,
        #[arg(long, value_enum, default_value = "pairwise")]
        wu_semantics: Semantics,
        #[arg(long)]
        curvature: bool,
        /// Interaction Betti numbers for single complexes up to this many cells.
        #[arg(long)]
        interaction: Option<usize>,
        /// Accepted for symmetry with other commands; output is always JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite (or `all`).
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Mass gap: cycle length of `C_n^d`.
        #[arg(long)]
        n: Option<usize>,
        /// Mass gap: torus dimension.
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Largest dense eigenproblem.
        #[arg(long, default_value_t = SPECTRUM_CAP)]
        cap: usize,
        /// Largest term inverted exactly.
        #[arg(long, default_value_t = 600)]
        inverse_cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write an operator as Matrix Market, plus a `.cells.json` sidecar.
    Export {
        expr: String,
        #[arg(value_parser = parse_op)]
        op: OperatorTag,
        path: PathBuf,
    },
    /// Eigenvalues of an operator as CSV.
    Spectrum {
        expr: String,
        #[arg(value_parser = parse_op)]
        op: OperatorTag,
        #[arg(long, default_value_t = SPECTRUM_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Densities of states along Barycentric refinements, as JSON.
    Limit {
        expr: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, value_parser = parse_op, default_value = "kirchhoff")]
        op: OperatorTag,
        #[arg(long, default_value_t = SPECTRUM_CAP)]
        cap: usize,
    },
    /// Lax deformation of the Dirac operator; diagnostics as CSV.
    Flow {
        expr: String,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = 5.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1e-6)]
        drift_bound: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_op(s: &str) -> Result<OperatorTag, String> {
    s.parse::<OperatorTag>().map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Cap(String),
    Compute(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            _ if e.is_cap() => Failure::Cap(e.to_string()),
            Error::Syntax { .. } | Error::UnknownGenerator(_) | Error::BadParameter(_) | Error::UnknownSuite(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn parse(expr: &str) -> Result<RingElement, Failure> {
    Ok(parse_with_base(expr, &std::env::current_dir().map_err(Error::from)?)?)
}

fn write_out(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(Error::from)?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Error::from)?,
    }
    Ok(())
}

fn json(v: &impl serde::Serialize) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(v).map_err(Error::from)? + "\n")
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Invariants { expr, betti, betti_direct, wu, wu_semantics, curvature, interaction, json: _ } => {
            let e = parse(&expr)?;
            let opts = ReportOptions {
                betti,
                betti_kunneth: !betti_direct,
                wu,
                wu_semantics: match wu_semantics {
                    Semantics::Pairwise => WuSemantics::Pairwise,
                    Semantics::Common => WuSemantics::Common,
                },
                curvature,
                interaction_cap: interaction,
            };
            write_out(&json(&invariant_report(&e, &opts)?)?, None)
        }
        Command::Verify { suite, seed, count, tol, n, d, levels, cap, inverse_cap, json: as_json } => {
            let suites = Suite::parse_list(&suite)?;
            let opts = VerifyOptions { seed, count, tol, n, d, levels, cap, inverse_cap };
            let report = verify(&suites, &opts)?;
            let text = if as_json { json(&report)? } else { report.to_text() };
            write_out(&text, None)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Export { expr, op, path } => {
            let m = export_operator(&parse(&expr)?, op, &path)?;
            eprintln!("wrote {}x{} {op} operator to {}", m.rows(), m.cols(), path.display());
            Ok(())
        }
        Command::Spectrum { expr, op, cap, out } => {
            let s = spectrum(&parse(&expr)?, op, cap)?;
            write_out(&s.to_csv(), out.as_ref())
        }
        Command::Limit { expr, levels, op, cap } => {
            let e = parse(&expr)?;
            let c = match e.terms() {
                [(1, t)] if t.factors().len() == 1 => t.factors()[0].clone(),
                _ => return Err(Failure::Usage(format!("`{expr}` is not a single complex"))),
            };
            write_out(&json(&barycentric_limit_experiment(&c, levels, op, cap)?)?, None)
        }
        Command::Flow { expr, beta, t_end, dt, drift_bound, out } => {
            let e = parse(&expr)?;
            let t = e.as_single_term()?;
            let tr = lax_flow(&operator_bundle(t), &LaxOptions { beta, t_end, dt, drift_bound })?;
            write_out(&tr.to_csv(), out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads.filter(|&n| n > 0) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool configured once");
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
