use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use colorpart::analytic::dirichlet::TruncationParams;
use colorpart::partitions::Status;
use colorpart_cli::commands::{self, KindArg, TheoremArg, VerifyArgs};
use colorpart_cli::output::{render, Tabular};
use colorpart_cli::{Cache, Format};

/// Partition recurrences, their modular-form constants and the weighted
/// Dirichlet sums behind them.
#[derive(Parser)]
#[command(name = "colorpart", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    /// Shorthand for `--format tsv`.
    #[arg(long, global = true)]
    tsv: bool,
    /// Neither read nor write the artifact cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Args, Clone, Copy)]
struct Truncation {
    /// Cutoff of the m-sum.
    #[arg(long = "M", default_value_t = TruncationParams::default().m)]
    m: u32,
    /// Cutoff of the Dirichlet n-sum.
    #[arg(long = "N", default_value_t = TruncationParams::default().n)]
    n: u64,
    /// Working precision in decimal digits.
    #[arg(long, default_value_t = TruncationParams::default().prec)]
    prec: u32,
}

impl Truncation {
    fn params(self) -> TruncationParams {
        TruncationParams {
            m: self.m,
            n: self.n,
            prec: self.prec,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Partition counts from the generating function next to the recurrence.
    Pcount {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        n_max: u64,
    },
    /// The constants α_v and β_v, checked against published values.
    Tables,
    /// Runs one verification sweep; exits 0 iff every check passes.
    Verify {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long)]
        v: Option<u32>,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        n_max: u64,
        #[command(flatten)]
        truncation: Truncation,
    },
    /// Truncated weighted sums for each eigenform of weight 2v.
    Dirichlet {
        #[arg(long)]
        v: u32,
        #[command(flatten)]
        truncation: Truncation,
    },
}

fn emit<T: Tabular>(report: &T, format: Format) {
    print!("{}", render(report, format));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match (cli.json, cli.tsv) {
        (true, _) => Format::Json,
        (_, true) => Format::Tsv,
        _ => cli.format,
    };
    let cache = if cli.no_cache {
        Cache::disabled()
    } else {
        Cache::from_env()
    };
    let result = match cli.command {
        Command::Pcount { kind, t, n_max } => commands::partition_kind(kind, t)
            .and_then(|k| commands::pcount(&cache, k, n_max))
            .map(|r| {
                emit(&r, format);
                r.status
            }),
        Command::Tables => commands::tables().map(|r| {
            emit(&r, format);
            r.status
        }),
        Command::Verify {
            theorem,
            v,
            t,
            n_max,
            truncation,
        } => {
            let args = VerifyArgs {
                v,
                t,
                n_max,
                params: truncation.params(),
            };
            commands::verify(&cache, theorem, &args).map(|r| {
                emit(&r, format);
                r.status()
            })
        }
        Command::Dirichlet { v, truncation } => {
            commands::dirichlet(&cache, v, &truncation.params()).map(|r| {
                emit(&r, format);
                Status::Pass
            })
        }
    };
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(commands::exit_code(&result) as u8)
}
