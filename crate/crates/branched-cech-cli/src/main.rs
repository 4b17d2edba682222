//! Command-line front end: reproducible reports on the quintic computation,
//! Batyrev numbers of reflexive polytopes and square-map ranks of toric
//! Fano fourfolds.
//!
//! Exit codes: 0 when every gate passes, 1 when a gate fails, 2 on an input
//! or usage error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use branched_cech::exact_linalg::Ring;
use commands::{InputError, Quintic};

#[derive(Parser, Debug)]
#[command(name = "branched-cech", version, about = "Exact Cech and Heegaard computations for branched covers")]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    /// Emit tab-separated lines instead of JSON.
    #[arg(long, global = true)]
    tsv: bool,
    /// Seed for randomized choices.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Coefficient ring.
    #[arg(long, global = true, value_enum, default_value_t = RingArg::Z2)]
    ring: RingArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RingArg {
    Z,
    Z2,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Self {
        match r {
            RingArg::Z => Ring::Z,
            RingArg::Z2 => Ring::Z2,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Computations on the quintic model.
    Quintic {
        #[command(subcommand)]
        what: QuinticCommand,
    },
    /// Batyrev's h21 of a reflexive polytope given as JSON.
    Batyrev {
        /// Path to `{"vertices": [[a,b,c,d], ...]}`.
        polytope: PathBuf,
    },
    /// Toric Fano fourfolds.
    Fano {
        #[command(subcommand)]
        what: FanoCommand,
    },
    /// The local monodromy table.
    Monodromy {
        /// Print the table and its derivation in every vertex chart.
        #[arg(long, required = true)]
        dump: bool,
    },
    /// Run gates.
    Verify {
        /// Run every gate.
        #[arg(long, required = true)]
        all: bool,
    },
}

#[derive(Subcommand, Debug)]
enum QuinticCommand {
    /// The E2 page.
    E2,
    /// Totalized Betti numbers and degeneration check.
    Betti,
    /// The Cech complex of locally constant functions.
    BottomRow,
    /// E2 generators matched with interior lattice points.
    Correspondence,
    /// First homology from the Heegaard splitting.
    Heegaard {
        /// Include the relation matrix in triplet form.
        #[arg(long)]
        matrix: bool,
    },
}

#[derive(Subcommand, Debug)]
enum FanoCommand {
    /// Square-map rank and related numbers of a smooth complete fan.
    Square {
        /// Path to `{"rays": [...], "max_cones": [...]}`.
        fan: PathBuf,
        /// Match the computed tuple against the embedded table.
        #[arg(long)]
        match_table: bool,
    },
}

fn configure_threads() -> Result<(), InputError> {
    let Ok(raw) = std::env::var("BRANCHED_CECH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| InputError(format!("BRANCHED_CECH_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| InputError(format!("cannot configure threads: {e}")))
}

fn run(cli: Cli) -> Result<report::Report, InputError> {
    configure_threads()?;
    let ring = Ring::from(cli.output.ring);
    let seed = cli.output.seed;
    match cli.command {
        Command::Quintic { what } => {
            let q = Quintic::new();
            match what {
                QuinticCommand::E2 => commands::quintic_e2(&q, ring),
                QuinticCommand::Betti => commands::quintic_betti(&q, ring),
                QuinticCommand::BottomRow => commands::quintic_bottom_row(&q, ring),
                QuinticCommand::Correspondence => commands::quintic_correspondence(&q),
                QuinticCommand::Heegaard { matrix } => commands::quintic_heegaard(&q, seed, matrix),
            }
        }
        Command::Batyrev { polytope } => commands::batyrev(&polytope),
        Command::Fano { what: FanoCommand::Square { fan, match_table } } => commands::fano_square(&fan, match_table),
        Command::Monodromy { .. } => commands::monodromy_dump(&Quintic::new()),
        Command::Verify { .. } => commands::verify_all(&Quintic::new()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let tsv = cli.output.tsv;
    match run(cli) {
        Ok(report) => {
            print!("{}", if tsv { report.to_tsv() } else { report.to_json() });
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
