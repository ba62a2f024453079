//! Thin argument-parsing shell over [`design_entropy::cli`].
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 for
//! usage or configuration errors.

use clap::{Args, Parser, Subcommand};
use design_entropy::cli::{
    execute, render_csv, render_json, MomentTarget, OutputFormat, RunConfig,
};
use design_entropy::moments::{BoundParams, TheoremId};
use design_entropy::{Error, Result};

#[derive(Parser)]
#[command(
    name = "design-entropy",
    version,
    about = "Exact moments and entropy bounds for random states and channels"
)]
struct Cli {
    /// Output format: csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    /// Write the table to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Averaged trace powers of reduced states, exact and optionally sampled.
    Moment(MomentArgs),
    /// Closed-form entropy bounds at given dimensions.
    Bounds(BoundsArgs),
    /// Run the seeded self-check battery.
    Verify(VerifyArgs),
    /// Exact trace powers and entropy ceilings of the spiked state.
    GapDesign(GapDesignArgs),
}

#[derive(Args)]
struct MomentArgs {
    /// Bipartite pure-state average: subsystem dimensions d_a d_b.
    #[arg(long, num_args = 2, value_names = ["D_A", "D_B"], conflicts_with = "choi")]
    state: Option<Vec<u64>>,
    /// Channel Choi-state average: output split d_a d_b, input split d_c d_d.
    #[arg(long, num_args = 4, value_names = ["D_A", "D_B", "D_C", "D_D"])]
    choi: Option<Vec<u64>>,
    /// Moment orders: a value, an inclusive range, or a comma list
    /// (e.g. 3, 2..5, 2,3,6).
    #[arg(long, default_value = "2")]
    alpha: String,
    /// Also estimate each moment from this many sampled states.
    #[arg(long)]
    samples: Option<u64>,
    /// Seed for the sampled estimates.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Comma list of bound ids (T1,T2a,T2b,T3,T4,T5,T6); default is every
    /// bound the parameters support.
    #[arg(long)]
    theorems: Option<String>,
    #[arg(long, value_name = "D_A")]
    d_a: Option<u64>,
    #[arg(long, value_name = "D_B")]
    d_b: Option<u64>,
    /// Total dimension for the channel bounds; defaults to d_a * d_b.
    #[arg(long, value_name = "D")]
    d_total: Option<u64>,
    #[arg(long)]
    alpha: Option<u32>,
    /// Entropy-rate parameter of the min-entropy bounds, in (0, 1].
    #[arg(long)]
    a: Option<f64>,
    /// Use the real-field constant where a bound distinguishes fields.
    #[arg(long)]
    real: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for every sampled check (required for reproducibility).
    #[arg(long)]
    seed: u64,
    /// Samples per Monte Carlo check.
    #[arg(long, default_value_t = 20_000)]
    samples: u64,
}

#[derive(Args)]
struct GapDesignArgs {
    #[arg(long, value_name = "D_A")]
    d_a: u64,
    #[arg(long, value_name = "D_B")]
    d_b: u64,
    /// Moment orders, same syntax as `moment --alpha`.
    #[arg(long, default_value = "2..4")]
    alpha: String,
}

/// Expands "3", "2..5", and comma lists of those into a sorted-as-given
/// order list.
fn parse_alpha_list(text: &str) -> Result<Vec<u32>> {
    let mut alphas = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::InvalidArgument(format!("empty order in {text:?}")));
        }
        if let Some((lo, hi)) = token.split_once("..") {
            let lo: u32 = lo.trim().parse().map_err(|_| bad_alpha(token))?;
            let hi: u32 = hi.trim().parse().map_err(|_| bad_alpha(token))?;
            if lo > hi {
                return Err(bad_alpha(token));
            }
            alphas.extend(lo..=hi);
        } else {
            alphas.push(token.parse().map_err(|_| bad_alpha(token))?);
        }
    }
    Ok(alphas)
}

fn bad_alpha(token: &str) -> Error {
    Error::InvalidArgument(format!(
        "cannot parse order {token:?} (expected N, N..M, or a comma list)"
    ))
}

fn parse_theorems(text: &str) -> Result<Vec<TheoremId>> {
    text.split(',').map(|token| token.trim().parse()).collect()
}

fn to_config(command: Command) -> Result<RunConfig> {
    match command {
        Command::Moment(args) => {
            let target = match (args.state, args.choi) {
                (Some(dims), None) => {
                    MomentTarget::State { d_a: dims[0], d_b: dims[1] }
                }
                (None, Some(dims)) => MomentTarget::Choi {
                    d_a: dims[0],
                    d_b: dims[1],
                    d_c: dims[2],
                    d_d: dims[3],
                },
                _ => {
                    return Err(Error::InvalidArgument(
                        "pass exactly one of --state D_A D_B or --choi D_A D_B D_C D_D".into(),
                    ))
                }
            };
            Ok(RunConfig::Moment {
                target,
                alphas: parse_alpha_list(&args.alpha)?,
                mc_samples: args.samples,
                seed: args.seed,
            })
        }
        Command::Bounds(args) => Ok(RunConfig::Bounds {
            theorems: args.theorems.as_deref().map(parse_theorems).transpose()?,
            params: BoundParams {
                d_a: args.d_a,
                d_b: args.d_b,
                d_total: args.d_total,
                alpha: args.alpha,
                a: args.a,
                complex_field: !args.real,
            },
        }),
        Command::Verify(args) => {
            Ok(RunConfig::Verify { seed: args.seed, samples: args.samples })
        }
        Command::GapDesign(args) => Ok(RunConfig::GapDesign {
            d_a: args.d_a,
            d_b: args.d_b,
            alphas: parse_alpha_list(&args.alpha)?,
        }),
    }
}

fn run(cli: Cli) -> Result<i32> {
    let format: OutputFormat = cli.format.parse()?;
    let config = to_config(cli.command)?;
    let report = execute(&config)?;
    let rendered = match format {
        OutputFormat::Csv => render_csv(&report.table)?,
        OutputFormat::Json => render_json(&config, &report)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, &rendered)?,
        None => print!("{rendered}"),
    }
    Ok(if report.all_passed { 0 } else { 1 })
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
