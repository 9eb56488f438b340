use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hkline::hkquotient::{dynkin_signs, DynkinGraph, DynkinKind};
use hkline::suite::{emit_profiles, run_suite, RunConfig};
use hkline::Error;

#[derive(Parser)]
#[command(name = "hkline", version, about = "Numerical checks of hyperholomorphic line bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: flat, bg, gh, quotient, twistor, mckay or all.
    Verify {
        /// Suite name (same as --suite).
        name: Option<String>,
        #[command(flatten)]
        opts: RunArgs,
        /// Print the JSON report to stdout instead of the per-check lines.
        #[arg(long)]
        json: bool,
    },
    /// Print a sign assignment c_i = ±1 with c_ic_j = −1 on every edge of an extended diagram.
    Signs {
        #[arg(long)]
        diagram: String,
    },
    /// Write CSV plot data for the gh or quotient suite.
    Profiles {
        name: Option<String>,
        #[command(flatten)]
        opts: RunArgs,
        /// Output directory.
        #[arg(long, default_value = "profiles")]
        dir: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// key = value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite name.
    #[arg(long)]
    suite: Option<String>,
    /// Override every per-check tolerance.
    #[arg(long)]
    tol: Option<String>,
    /// Finite-difference step (default 1e-3).
    #[arg(long)]
    h: Option<String>,
    /// Finite-difference order, 2 or 4 (default 4).
    #[arg(long)]
    order: Option<String>,
    /// Random sample points per check (default 20).
    #[arg(long)]
    samples: Option<String>,
    /// RNG seed (default 1).
    #[arg(long)]
    seed: Option<String>,
    /// Comma-separated centers on the x₁-axis.
    #[arg(long, allow_hyphen_values = true)]
    centers: Option<String>,
    /// GH lift constant for gh, moment level for quotient.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Quaternionic dimension of the flat model (default 2).
    #[arg(long)]
    n: Option<String>,
    /// Restrict mckay to one extended diagram, e.g. D5.
    #[arg(long)]
    diagram: Option<String>,
    /// Contour node count for twistor residues.
    #[arg(long)]
    nodes: Option<String>,
    /// Path of the JSON report.
    #[arg(long)]
    out: Option<String>,
}

impl RunArgs {
    fn build(&self, name: &Option<String>) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            cfg.apply_text(&text)?;
        }
        let pairs = [
            ("suite", &self.suite),
            ("tol", &self.tol),
            ("h", &self.h),
            ("order", &self.order),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("centers", &self.centers),
            ("c", &self.c),
            ("n", &self.n),
            ("diagram", &self.diagram),
            ("nodes", &self.nodes),
            ("out", &self.out),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                cfg.set(k, v)?;
            }
        }
        if let Some(n) = name {
            cfg.set("suite", n)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Config(_) | Error::Invalid(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn verify(name: &Option<String>, opts: &RunArgs, json: bool) -> Result<ExitCode, Error> {
    let cfg = opts.build(name)?;
    let report = run_suite(&cfg)?;
    if let Some(path) = &cfg.out {
        fs::write(path, report.to_json())?;
    }
    if json {
        println!("{}", report.to_json());
    } else {
        for r in &report.records {
            let verdict = match (r.diagnostic, r.pass) {
                (true, _) => "INFO",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            let extra = r.error.as_deref().map(|e| format!("  ({e})")).unwrap_or_default();
            println!("{verdict} {:<42} residual {:>10.3e}  tol {:.1e}  {}{extra}", r.id, r.residual, r.tolerance, r.anchor);
        }
        let s = &report.summary;
        println!("{} checks: {} passed, {} failed; {} diagnostics", s.total, s.passed, s.failed, s.diagnostics);
    }
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn signs(diagram: &str) -> Result<ExitCode, Error> {
    let kind: DynkinKind = diagram.parse()?;
    let graph = DynkinGraph::extended(kind)?;
    match dynkin_signs(&graph)? {
        None => println!("NONE (odd cycle)"),
        Some(c) => {
            let s: Vec<&str> = c.iter().map(|&x| if x > 0 { "+1" } else { "-1" }).collect();
            println!("{}", s.join(" "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn profiles(name: &Option<String>, opts: &RunArgs, dir: &Path) -> Result<ExitCode, Error> {
    let cfg = opts.build(name)?;
    for f in emit_profiles(&cfg, dir)? {
        println!("{}", f.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Verify { name, opts, json } => verify(name, opts, *json),
        Command::Signs { diagram } => signs(diagram),
        Command::Profiles { name, opts, dir } => profiles(name, opts, dir),
    };
    out.unwrap_or_else(|e| fail(&e))
}
