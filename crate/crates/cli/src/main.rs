//! `nct`: command-line front end and verification harness for `nctorus`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage, parse or
//! domain error, 3 numerical non-convergence.

mod commands;
mod config;
mod error;
mod report;
mod sample;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nctorus::extension::ProfileQuality;
use nctorus::{Polytope, C64};

use commands::{EvalAt, Output, StarArgs};
use config::RunConfig;
use error::CliError;
use suites::{Ctx, Fault, Suite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "nct", version, about = "Symbol calculus and regularized traces on noncommutative tori")]
struct Cli {
    /// JSON run configuration; flags below override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed for the randomized verification checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance for every verification check, and the canonical-sum polytope tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Compute a plain cut-off sum on this polytope instead of the canonical sum.
    #[arg(long, global = true, value_parser = parse_polytope)]
    polytope: Option<Polytope>,
    /// Fit window `A:B` for cut-off sums.
    #[arg(long, global = true, value_name = "A:B", value_parser = parse_window)]
    fit_window: Option<(i64, i64)>,
    #[arg(long, global = true, value_enum)]
    profile_quality: Option<QualityArg>,
    /// Include per-check runtimes in verification reports (which makes them
    /// run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum QualityArg {
    Fast,
    Accurate,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a symbol at a lattice point or a real point.
    Eval {
        symbol: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "xi", required_unless_present = "xi")]
        k: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        xi: Option<Vec<f64>>,
    },
    /// Star product (or bracket) of two symbols, exact at a point or as an expansion.
    Star {
        sigma: PathBuf,
        tau: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        k: Option<Vec<i64>>,
        /// Asymptotic expansion to this depth.
        #[arg(long, value_name = "J")]
        asympt: Option<u32>,
        /// Use the bracket {σ,τ} instead of the product.
        #[arg(long)]
        bracket: bool,
        /// Tabulate exact-minus-expansion defects at 2^p·k, p = 0..7.
        #[arg(long, requires = "asympt")]
        table: bool,
    },
    /// Noncommutative residue res_θ.
    Res { symbol: PathBuf },
    /// Canonical discrete sum of τ̄σ (or a cut-off sum with --polytope).
    Csum {
        symbol: PathBuf,
        /// Value used at k = 0 instead of τ̄σ(0), as `re` or `re,im`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, num_args = 1..=2)]
        origin: Option<Vec<f64>>,
    },
    /// Canonical trace TR_θ(Op σ), compared with the lattice trace when trace class.
    Trace { symbol: PathBuf },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
        /// Inject a known defect to check that the harness notices.
        #[arg(long, value_enum)]
        inject_fault: Option<Fault>,
    },
    /// Riemann zeta by Euler–Maclaurin summation.
    Zeta {
        #[arg(allow_negative_numbers = true)]
        s: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        im: f64,
    },
}

fn parse_polytope(s: &str) -> Result<Polytope, String> {
    s.parse()
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected A:B, got `{s}`"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    Ok((a, b))
}

fn run_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = cli.tol {
        cfg.tol = Some(tol);
        cfg.canonical_tol = tol;
    }
    if let Some(p) = cli.polytope {
        cfg.polytope = Some(p);
    }
    if let Some((a, b)) = cli.fit_window {
        cfg.fit.n_min = a;
        cfg.fit.n_max = b;
    }
    if let Some(q) = cli.profile_quality {
        cfg.profile_quality = match q {
            QualityArg::Fast => ProfileQuality::Fast,
            QualityArg::Accurate => ProfileQuality::Accurate,
        };
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    let cfg = run_config(cli)?;
    let format = cli.format;
    match &cli.command {
        Command::Eval { symbol, k, xi } => {
            let at = match (k, xi) {
                (Some(k), _) => EvalAt::Lattice(k.clone()),
                (None, Some(xi)) => EvalAt::Real(xi.clone()),
                (None, None) => return Err(CliError::Usage("eval needs --k or --xi".into())),
            };
            commands::eval(symbol, at, format)
        }
        Command::Star {
            sigma,
            tau,
            k,
            asympt,
            bracket,
            table,
        } => commands::star(
            sigma,
            tau,
            StarArgs {
                k: k.clone(),
                asympt: *asympt,
                bracket: *bracket,
                table: *table,
            },
            format,
        ),
        Command::Res { symbol } => commands::res(symbol, format),
        Command::Csum { symbol, origin } => {
            let origin = origin.as_ref().map(|v| C64::new(v[0], v.get(1).copied().unwrap_or(0.0)));
            cfg.validate()?;
            commands::csum(symbol, origin, &cfg, format)
        }
        Command::Trace { symbol } => {
            cfg.validate()?;
            commands::trace(symbol, &cfg, format)
        }
        Command::Zeta { s, im } => commands::zeta(C64::new(*s, *im), format),
        Command::Verify { suite, inject_fault } => {
            let truth = cfg.validate()?;
            let ctx = Ctx::new(cfg, truth, *inject_fault);
            let report = suites::run(*suite, &ctx, *inject_fault, cli.timings);
            let body = match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
                Format::Text => report.to_text(),
            };
            Ok(Output {
                body,
                summary: report.summary_line(),
                exit: if report.passed() { 0 } else { 1 },
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &out.body) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    println!("{}", out.summary);
                }
                None => print!("{}", out.body),
            }
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
