//! `compmu`: Möbius functions, intervals, Morse matchings and verification
//! sweeps for generalized subword order.

mod commands;
mod poset_spec;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use poset_spec::PosetSpec;

#[derive(Parser, Debug)]
#[command(name = "compmu", version, about = "Generalized subword order toolkit")]
pub struct Cli {
    /// Print structured JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// μ(u, w) by one or all methods.
    Mobius {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
    /// Elements, Hasse diagram and maximal chains of [u, w].
    Interval {
        #[command(flatten)]
        pair: Pair,
        /// Write the Hasse diagram in DOT format to this file.
        #[arg(long)]
        dot: Option<std::path::PathBuf>,
        /// List maximal chains (label sequences in PL-order over a chain).
        #[arg(long)]
        chains: bool,
    },
    /// Per-chain Morse matching table of a composition interval.
    Critical {
        #[command(flatten)]
        pair: Pair,
    },
    /// Check the critical-chain characterisation on one interval.
    MorseVerify {
        #[command(flatten)]
        pair: Pair,
    },
    /// Exhaustive property sweeps; defaults reproduce the acceptance sizes.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[arg(long)]
        poset: Option<PosetSpec>,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        max_part: Option<usize>,
        #[arg(long)]
        max_total: Option<usize>,
    },
    /// μ(a^i, c^j) over Λ* against Chebyshev coefficients, 1 ≤ i ≤ j.
    Chebyshev {
        /// Largest i + j.
        #[arg(long, default_value_t = 6)]
        max_sum: usize,
        #[arg(long)]
        csv: bool,
    },
    /// μ(s, p) in the permutation pattern order.
    Perm {
        #[arg(long)]
        s: String,
        #[arg(long)]
        p: String,
    },
}

#[derive(clap::Args, Debug)]
pub struct Pair {
    /// chain[:n] | antichain:a,b,... | lambda | file:<path>
    #[arg(long, default_value = "chain")]
    poset: PosetSpec,
    #[arg(long)]
    u: String,
    #[arg(long)]
    w: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Formula,
    Recurrence,
    Antichain,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Formula,
    Involution,
    Morse,
    Samelength,
    Layered,
    FactorRange,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(msg) => {
            if cli.json {
                println!("{}", serde_json::json!({ "error": msg }));
            }
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
