//! `acx`: verification suites with JSON reports.
//!
//! Exit status is 0 when every case passes, 1 when a case fails or a suite
//! hits a numerical error, and 2 for usage errors.

mod report;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use acx_core::cxlinalg::Tolerances as CoreTolerances;
use acx_core::zspace::MEMBERSHIP_TOL;
use acx_core::AcxError;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use report::{Config, Report, Tolerances};

#[derive(Parser, Debug)]
#[command(name = "acx", version, about = "Verification suites for universal embedding spaces")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// RNG seed for sampled cases
    #[arg(long, global = true, env = "ACX_SEED", default_value_t = 1)]
    seed: u64,
    /// Override the suite tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Override the finite-difference step
    #[arg(long, global = true)]
    h: Option<f64>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the summary line on stderr
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite
    Run {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Complex dimension of the embedding space
    #[command(name = "dims")]
    Dims {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Flag chart decode/encode round trip
    #[command(name = "chart-roundtrip")]
    ChartRoundtrip {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Closed-form torsion against bracket oracles
    #[command(name = "torsion-oracle")]
    TorsionOracle {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Stabilizer pattern and transitivity witnesses
    #[command(name = "group-action")]
    GroupAction {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Linearity, rank and kernel of Θ
    #[command(name = "theta-rank")]
    ThetaRank {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Free and transitive action on affine fibers
    #[command(name = "affine-fiber")]
    AffineFiber {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Octonionic Nijenhuis tensor identities on S⁶
    #[command(name = "nijenhuis")]
    Nijenhuis {
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Real points, transversality and dπ of the S⁶ embedding
    #[command(name = "embed-s6")]
    EmbedS6 {
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// N = 4θ along the lift of the S⁶ embedding
    #[command(name = "verify-4theta")]
    Verify4Theta {
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Chern classes; built-in identities unless --expr is given
    #[command(name = "chern")]
    Chern {
        /// e.g. "tensor(lambda2(conj(dual(T))),T)"
        #[arg(long)]
        expr: Option<String>,
        /// e.g. "T:rank=3,c=[0,0,t]" (repeatable)
        #[arg(long)]
        bundle: Vec<String>,
        /// Complex truncation degree (half the real base dimension)
        #[arg(long, default_value_t = 3)]
        dim: u32,
        /// Expected class as k=POLY, e.g. "3=0" (repeatable)
        #[arg(long)]
        expect: Vec<String>,
    },
}

struct Plan {
    name: &'static str,
    tol: f64,
    h: Option<f64>,
    params: Value,
}

fn plan(suite: &Suite, h: Option<f64>) -> Plan {
    let p = |name, tol, default_h: Option<f64>, params| Plan { name, tol, h: default_h.map(|d| h.unwrap_or(d)), params };
    match suite {
        Suite::Dims { n, k } => p("dims", 0.0, None, json!({"n": n, "k": k})),
        Suite::ChartRoundtrip { n, k, samples } => {
            p("chart-roundtrip", 1e-10, None, json!({"n": n, "k": k, "samples": samples}))
        }
        Suite::TorsionOracle { n, k, samples } => {
            p("torsion-oracle", 1e-6, Some(1e-6), json!({"n": n, "k": k, "samples": samples}))
        }
        Suite::GroupAction { n, k, samples } => p("group-action", 1e-9, None, json!({"n": n, "k": k, "samples": samples})),
        Suite::ThetaRank { n, k, samples } => p("theta-rank", 1e-10, None, json!({"n": n, "k": k, "samples": samples})),
        Suite::AffineFiber { samples } => p("affine-fiber", 1e-10, None, json!({"samples": samples})),
        Suite::Nijenhuis { samples } => p("nijenhuis", 1e-6, Some(1e-5), json!({"samples": samples})),
        Suite::EmbedS6 { samples } => p("embed-s6", 1e-6, Some(1e-5), json!({"samples": samples})),
        Suite::Verify4Theta { samples } => p("verify-4theta", 1e-4, Some(1e-5), json!({"samples": samples})),
        Suite::Chern { expr, bundle, dim, expect } => {
            p("chern", 0.0, None, json!({"expr": expr, "bundle": bundle, "dim": dim, "expect": expect}))
        }
    }
}

fn run_suite(suite: &Suite, seed: u64, h: Option<f64>) -> acx_core::Result<Vec<report::Case>> {
    let h = h.unwrap_or(f64::NAN);
    match suite {
        Suite::Dims { n, k } => suites::dims(*n, *k),
        Suite::ChartRoundtrip { n, k, samples } => suites::chart_roundtrip(seed, *n, *k, *samples),
        Suite::TorsionOracle { n, k, samples } => suites::torsion_oracle(seed, *n, *k, *samples, h),
        Suite::GroupAction { n, k, samples } => suites::group_action(seed, *n, *k, *samples),
        Suite::ThetaRank { n, k, samples } => suites::theta_rank_suite(seed, *n, *k, *samples),
        Suite::AffineFiber { samples } => suites::affine_fiber(seed, *samples),
        Suite::Nijenhuis { samples } => suites::nijenhuis_suite(seed, *samples, h),
        Suite::EmbedS6 { samples } => suites::embed_s6(seed, *samples, h),
        Suite::Verify4Theta { samples } => suites::verify_4theta_suite(seed, *samples, h),
        Suite::Chern { expr: None, .. } => suites::chern_builtin(),
        Suite::Chern { expr: Some(e), bundle, dim, expect } => suites::chern_expr(e, bundle, *dim, expect),
    }
}

fn is_usage_error(e: &AcxError) -> bool {
    matches!(e, AcxError::Parse(_) | AcxError::InvalidDims(_) | AcxError::RankTooLarge { .. } | AcxError::TruncationMismatch(..))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let Command::Run { suite } = &cli.command;
    let g = &cli.global;
    let plan = plan(suite, g.h);
    let tol = g.tol.unwrap_or(plan.tol);
    let start = Instant::now();
    let cases = match run_suite(suite, g.seed, plan.h) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("acx run {}: {e}", plan.name);
            return ExitCode::from(if is_usage_error(&e) { 2 } else { 1 });
        }
    };
    let core = CoreTolerances::default();
    let config = Config {
        seed: g.seed,
        tolerances: Tolerances { suite: tol, rank: core.rank, eq: core.eq, acs: core.acs, membership: MEMBERSHIP_TOL },
        h: plan.h,
        params: plan.params,
    };
    let report = Report::new(plan.name, config, cases, start.elapsed().as_millis());
    let body = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let written = match &g.out {
        Some(path) => std::fs::write(path, &body),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("acx: cannot write report: {e}");
        return ExitCode::from(1);
    }
    for c in report.cases.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: residual {:e} > tol {tol:e}; observed {}", c.id, c.residual, c.observed);
    }
    if !g.quiet {
        eprintln!(
            "{}: {} passed, {} failed ({} ms)",
            report.suite, report.summary.passed, report.summary.failed, report.timing_ms
        );
    }
    ExitCode::from(if report.ok() { 0 } else { 1 })
}
