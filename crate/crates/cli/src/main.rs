//! `torlat`: reproduction harness and calculators for finite subgroups of
//! `GL_d(Z)` and the algebraic tori they describe.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use torlat_core::Error;

/// Exit status for a failed mathematical check.
pub const EXIT_VERIFY: u8 = 1;
/// Exit status for unusable input.
pub const EXIT_INPUT: u8 = 2;
/// Exit status when a closure, orbit or search bound is hit.
pub const EXIT_RESOURCE: u8 = 3;
/// Exit status when the seed groups miss a class.
pub const EXIT_INCOMPLETE: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "torlat", version, about = "Finite subgroups of GL_d(Z) and algebraic tori")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Worker threads for parallel steps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Suppress progress lines on stderr.
    #[arg(short, long, global = true)]
    pub quiet: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingArg {
    #[value(name = "Z", alias = "z")]
    Z,
    #[value(name = "Q", alias = "q")]
    Q,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximal orders of finite subgroups of GL_d(Q) for d = 1..10.
    Table1 {
        /// Compare every row with the published orders.
        #[arg(long)]
        verify: bool,
        /// Comma-separated dimensions to show.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
    /// Z- and Q-classes of finite subgroups of GL_d(Z).
    Classify {
        #[arg(long)]
        dim: usize,
        /// Write the catalog to this file.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Compare the class counts with the published ones.
        #[arg(long)]
        verify_counts: bool,
        /// Ignore TORLAT_CACHE_DIR.
        #[arg(long)]
        no_cache: bool,
    },
    /// Conjugacy tests.
    Conj {
        #[command(subcommand)]
        command: ConjCommand,
    },
    /// Finite matrix group calculators.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Torus calculators.
    Torus {
        #[command(subcommand)]
        command: TorusCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConjCommand {
    /// Decide whether two groups are conjugate.
    Test {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = RingArg::Z)]
        ring: RingArg,
        /// Coefficient height for the final unimodular search.
        #[arg(long, default_value_t = torlat_core::conjtest::DEFAULT_SEARCH_BOUND)]
        bound: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupCommand {
    /// Group order (Schreier-Sims).
    Order { group: String },
    /// Conjugacy classes.
    Classes { group: String },
    /// Character fingerprint (trace, order, class size).
    Fingerprint { group: String },
    /// Subgroup counts by order.
    Subgroups { group: String },
    /// All elements.
    Elements { group: String },
    /// Injectivity of reduction mod N.
    Reduce {
        group: String,
        #[arg(long)]
        modulus: u64,
    },
    /// Position of an integral group in the catalog of its dimension.
    Lookup {
        group: String,
        #[arg(long)]
        no_cache: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum TorusCommand {
    /// Equivariant maps between character lattices.
    Hom {
        a: String,
        b: String,
        #[command(flatten)]
        pairing: Pairing,
    },
    /// Dual torus.
    Dual { torus: String },
    /// Galois action on N-torsion.
    Torsion {
        torus: String,
        #[arg(long)]
        modulus: u64,
    },
    /// Splitting-degree bounds through reduction mod N.
    SerreCheck {
        torus: String,
        /// Inclusive range such as 2..8.
        #[arg(long, value_parser = input::parse_range, default_value = "2..8")]
        modulus_range: (u64, u64),
    },
    /// Isogeny test (equal characters).
    Isogeny {
        a: String,
        b: String,
        #[command(flatten)]
        pairing: Pairing,
    },
    /// Isomorphism test (unimodular intertwiner).
    Iso {
        a: String,
        b: String,
        #[command(flatten)]
        pairing: Pairing,
        #[arg(long, default_value_t = torlat_core::torus::DEFAULT_ISOMORPHISM_HEIGHT)]
        height: u32,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Pairing {
    /// Treat generator i of both inputs as the same Galois element, even
    /// when the tori carry no common label.
    #[arg(long)]
    pub shared_galois: bool,
}

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Ok,
    VerificationFailed(String),
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::IncompleteSeedSet { .. } => EXIT_INCOMPLETE,
        Error::NotFiniteWithinBound(_) | Error::NotFinite(_) | Error::OrbitExplosion(_) | Error::UndecidedConjugacy(_) => {
            EXIT_RESOURCE
        }
        Error::AssertionFailure(_) => EXIT_VERIFY,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_INPUT);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match commands::run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
