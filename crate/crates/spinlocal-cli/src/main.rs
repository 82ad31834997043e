use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{CommandFactory, Parser, Subcommand};
use spinlocal_core::thetadef::{theta_coeffs, ZLattice};
use spinlocal_core::verify::{list_suites, run_suite, RunConfig, REPORT_DIR_ENV, SUITES};

#[derive(Parser)]
#[command(name = "spinlocal", version, about = "Exact verification suites for local GSp4 and spin-group computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named suite and write its JSON report.
    Verify {
        suite: String,
        /// JSON file with RunConfig fields; flags given here override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Residue characteristic (odd prime, at most 13).
        #[arg(long)]
        q: Option<u64>,
        /// Coefficient prime for admissible-local (default: alternate 7 and 11).
        #[arg(long)]
        p: Option<u64>,
        /// Ball radius around the base lattice (at most 3).
        #[arg(long)]
        radius: Option<usize>,
        /// Trace bound for theta-basic.
        #[arg(long)]
        trace_bound: Option<i64>,
        /// Seed for randomized suites.
        #[arg(long)]
        seed: Option<u64>,
        /// Sample count for randomized suites.
        #[arg(long)]
        samples: Option<usize>,
        /// Report path. Defaults to <suite>.json in $SPINLOCAL_REPORT_DIR,
        /// or standard output when that is unset.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Lift the q and radius guardrails (unsupported; may run for hours).
        #[arg(long)]
        unchecked: bool,
    },
    /// Theta coefficients of a positive definite Gram matrix.
    Theta {
        /// JSON file holding an integer matrix, e.g. [[2,1],[1,2]].
        #[arg(long)]
        gram: PathBuf,
        /// Genus of the coefficients (1 or 2).
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        trace_bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print each suite and the statement it checks.
    List,
}

fn usage() -> String {
    let names: Vec<&str> = SUITES.iter().map(|(s, _)| *s).collect();
    format!("{}\nsuites: {}", Cli::command().render_usage(), names.join(", "))
}

fn write_or_print(path: Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run() -> anyhow::Result<bool> {
    match Cli::parse().command {
        Command::List => {
            print!("{}", list_suites());
            Ok(true)
        }
        Command::Verify { suite, config, q, p, radius, trace_bound, seed, samples, out, unchecked } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
                }
                None => RunConfig::default(),
            };
            cfg.suite = suite;
            if !SUITES.iter().any(|(s, _)| *s == cfg.suite) {
                bail!("unknown suite '{}'\n{}", cfg.suite, usage());
            }
            cfg.q = q.unwrap_or(cfg.q);
            cfg.p = p.or(cfg.p);
            cfg.radius = radius.unwrap_or(cfg.radius);
            cfg.trace_bound = trace_bound.unwrap_or(cfg.trace_bound);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.samples = samples.or(cfg.samples);
            cfg.unchecked |= unchecked;
            let report = run_suite(&cfg)?;
            let path = out.or_else(|| std::env::var_os(REPORT_DIR_ENV).map(|d| PathBuf::from(d).join(format!("{}.json", cfg.suite))));
            write_or_print(path, &report.to_json())?;
            let s = &report.summary;
            eprintln!("{}: {} checks, {} passed, {} failed", cfg.suite, s.total, s.passed, s.failed);
            Ok(report.passed())
        }
        Command::Theta { gram, n, trace_bound, out } => {
            let text = std::fs::read_to_string(&gram).with_context(|| format!("reading {}", gram.display()))?;
            let g: Vec<Vec<i64>> = serde_json::from_str(&text).context("gram must be a JSON integer matrix")?;
            let l = ZLattice::new(g)?;
            let coeffs = theta_coeffs(&l, n, trace_bound)?;
            let table: BTreeMap<String, u64> = coeffs.iter().map(|(t, c)| (t.label(), *c)).collect();
            let doc = serde_json::json!({
                "n": n,
                "trace_bound": trace_bound,
                "normalization": "representation numbers; the global volume constant is not included",
                "coefficients": table,
            });
            write_or_print(out, &serde_json::to_string_pretty(&doc)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
