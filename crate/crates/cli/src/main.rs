//! `mubsig` — verification suites, exact probability tables, seeded Monte
//! Carlo, and information reports for the basis-choice signaling protocol.
//!
//! Exit codes: 0 success, 1 invariant-suite failure, 2 usage/config error.

mod render;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mubsig_core::{
    closed_form_probability, info_report, outcome_distribution, run_trials, BasisLabel,
    MessagePrior, PrepPolicy, Preparation, PrimeDim, Tolerances,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use render::{Format, ProbsOutput, ProbsRow, SimulateOutput, StatsView};

const SWEEP_DIMS: [u64; 6] = [2, 3, 5, 7, 11, 13];

#[derive(Parser)]
#[command(
    name = "mubsig",
    version,
    about = "Simulate signaling through the choice of a non-selective measurement basis \
             on maximally entangled qudit pairs (prime dimension)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all invariant suites for the configured dimension
    Verify(VerifyArgs),
    /// Exact outcome probabilities: closed form next to the brute-force route
    Probs(ProbsArgs),
    /// Seeded Monte Carlo rounds with confusion matrix and conclusive rate
    Simulate(SimulateArgs),
    /// Mutual information of the signaling channel, with reference values
    Capacity(CapacityArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Prime Hilbert-space dimension
    #[arg(long, default_value_t = 3)]
    dim: u64,

    /// Seed for anything sampled
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Write the payload to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Structural tolerance override (env MUBSIG_TOL_STRUCTURAL, default 1e-12)
    #[arg(long)]
    tol_structural: Option<f64>,

    /// Oracle tolerance override (env MUBSIG_TOL_ORACLE, default 1e-10)
    #[arg(long)]
    tol_oracle: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ProbsArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Preparation as c,r,s
    #[arg(long, value_name = "c,r,s")]
    prep: String,

    /// Message basis: `ddot0` or an integer in 0..dim
    #[arg(long)]
    message: String,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Number of rounds
    #[arg(long, default_value_t = 10_000)]
    trials: u64,

    /// Fixed preparation as c,r,s (default: resampled uniformly per round)
    #[arg(long, value_name = "c,r,s")]
    prep: Option<String>,

    /// Fixed message (default: uniform prior over the d+1 labels)
    #[arg(long)]
    message: Option<String>,

    /// Distribute rounds across threads (output is identical to serial)
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct CapacityArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Preparation as c,r,s (default: sampled from the seed; the mutual
    /// information does not depend on it)
    #[arg(long, value_name = "c,r,s")]
    prep: Option<String>,

    /// Report every dimension in {2, 3, 5, 7, 11, 13}
    #[arg(long)]
    sweep: bool,
}

enum Failure {
    /// Bad flags or inconsistent configuration: exit 2.
    Config(String),
    /// Anything that went wrong while producing output: exit 1.
    Runtime(String),
}

impl Failure {
    fn config(err: impl std::fmt::Display) -> Self {
        Failure::Config(err.to_string())
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Probs(args) => cmd_probs(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Capacity(args) => cmd_capacity(args),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let common = &args.common;
    let d = parse_dim(common)?;
    let tol = tolerances(common)?;
    let report = suites::full_verification(d, common.seed, &tol);
    let payload = render::render_verify(&report, common.format, d.get(), common.seed);
    emit(&payload, common)?;
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_probs(args: ProbsArgs) -> Result<ExitCode, Failure> {
    let common = &args.common;
    let d = parse_dim(common)?;
    let tol = tolerances(common)?;
    let prep = parse_prep(d, &args.prep)?;
    let message = BasisLabel::parse(d, &args.message).map_err(Failure::config)?;

    let brute = outcome_distribution(d, message, &prep);
    let mut rows = Vec::with_capacity(brute.len());
    let mut closed_total = 0.0;
    let mut brute_total = 0.0;
    let mut max_abs_diff = 0.0f64;
    for (out, p_brute) in brute {
        let p_closed = closed_form_probability(d, message, &prep, &out);
        let abs_diff = (p_closed - p_brute).abs();
        max_abs_diff = max_abs_diff.max(abs_diff);
        closed_total += p_closed;
        brute_total += p_brute;
        rows.push(ProbsRow {
            c_prime: out.c_prime.value(),
            r_prime: out.r_prime.value(),
            closed_form: p_closed,
            brute_force: p_brute,
            abs_diff,
        });
    }
    let output = ProbsOutput {
        prep: (prep.c.value(), prep.r.value(), prep.s.value()),
        message: message.to_string(),
        rows,
        closed_form_total: closed_total,
        brute_force_total: brute_total,
        max_abs_diff,
    };
    let payload = render::render_probs(&output, common.format, d.get(), common.seed);
    emit(&payload, common)?;
    Ok(if max_abs_diff <= tol.oracle {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, Failure> {
    let common = &args.common;
    let d = parse_dim(common)?;
    if args.trials < 1 {
        return Err(Failure::Config("trials must be at least 1".into()));
    }
    let (policy, policy_desc) = match &args.prep {
        Some(text) => {
            let prep = parse_prep(d, text)?;
            (
                PrepPolicy::Fixed(prep),
                format!("fixed ({},{},{})", prep.c, prep.r, prep.s),
            )
        }
        None => (PrepPolicy::ResampleUniform, "resample_uniform".to_string()),
    };
    let (prior, prior_desc) = match &args.message {
        Some(token) => {
            let message = BasisLabel::parse(d, token).map_err(Failure::config)?;
            (MessagePrior::point(d, message), format!("fixed {message}"))
        }
        None => (MessagePrior::uniform(d), "uniform".to_string()),
    };

    let stats = run_trials(common.seed, d, &policy, &prior, args.trials, args.parallel)
        .map_err(Failure::config)?;
    let output = SimulateOutput {
        trials: stats.trials,
        prep_policy: policy_desc,
        message_prior: prior_desc,
        conclusive: stats.conclusive,
        conclusive_rate: stats.conclusive_rate(),
        stats: StatsView::from_stats(&stats),
    };
    let payload = render::render_simulate(&output, common.format, d.get(), common.seed);
    emit(&payload, common)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_capacity(args: CapacityArgs) -> Result<ExitCode, Failure> {
    let common = &args.common;
    let reports = if args.sweep {
        let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
        SWEEP_DIMS
            .iter()
            .map(|&dd| {
                let pd = PrimeDim::new(dd).expect("sweep dims are prime");
                info_report(pd, &sample_prep(pd, &mut rng))
            })
            .collect::<Vec<_>>()
    } else {
        let d = parse_dim(common)?;
        let prep = match &args.prep {
            Some(text) => parse_prep(d, text)?,
            None => sample_prep(d, &mut ChaCha8Rng::seed_from_u64(common.seed)),
        };
        vec![info_report(d, &prep)]
    };
    let dim = if args.sweep { 0 } else { reports[0].dim };
    let payload = render::render_capacity(&reports, common.format, dim, common.seed);
    emit(&payload, common)?;
    Ok(ExitCode::SUCCESS)
}

/// Draw a uniform preparation; there is no canonical default one.
fn sample_prep(d: PrimeDim, rng: &mut ChaCha8Rng) -> Preparation {
    Preparation::from_values(
        d,
        rng.gen_range(0..d.get()) as i64,
        rng.gen_range(0..d.get()) as i64,
        rng.gen_range(0..d.get()) as i64,
    )
}

fn parse_dim(common: &CommonArgs) -> Result<PrimeDim, Failure> {
    PrimeDim::new(common.dim).map_err(Failure::config)
}

/// Parse `c,r,s` with every component in `0..d`.
fn parse_prep(d: PrimeDim, text: &str) -> Result<Preparation, Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::Config(format!(
            "prep must be three comma-separated values, got `{text}`"
        )));
    }
    let mut values = [0u64; 3];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<u64>()
            .map_err(|_| Failure::Config(format!("bad prep component `{part}`")))?;
        if *slot >= d.get() {
            return Err(Failure::Config(format!(
                "prep component {slot} out of range for dim {d}"
            )));
        }
    }
    Ok(Preparation::from_values(
        d,
        values[0] as i64,
        values[1] as i64,
        values[2] as i64,
    ))
}

fn tolerances(common: &CommonArgs) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    if let Some(v) = env_tolerance("MUBSIG_TOL_STRUCTURAL")? {
        tol.structural = v;
    }
    if let Some(v) = env_tolerance("MUBSIG_TOL_ORACLE")? {
        tol.oracle = v;
    }
    if let Some(v) = common.tol_structural {
        tol.structural = v;
    }
    if let Some(v) = common.tol_oracle {
        tol.oracle = v;
    }
    if tol.structural <= 0.0 || tol.oracle <= 0.0 {
        return Err(Failure::Config("tolerances must be positive".into()));
    }
    Ok(tol)
}

fn env_tolerance(name: &str) -> Result<Option<f64>, Failure> {
    match std::env::var(name) {
        Ok(text) => text
            .parse::<f64>()
            .map(Some)
            .map_err(|_| Failure::Config(format!("{name} must be a number, got `{text}`"))),
        Err(_) => Ok(None),
    }
}

/// Send the payload to stdout, or verbatim to `--out`.
fn emit(payload: &str, common: &CommonArgs) -> Result<(), Failure> {
    match &common.out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}
