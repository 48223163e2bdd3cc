use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::range::{FloatSweep, IntRange};

#[derive(Debug, Parser)]
#[command(
    name = "qclone",
    version,
    about = "Universal quantum cloning simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one cloner on one input and print its report.
    Clone(CloneArgs),
    /// Recompute every headline result; exit status 1 if any row fails.
    Reproduce(ReproduceArgs),
    /// Emit plot data as CSV.
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Print a circuit in the line-based text format.
    DumpCircuit(DumpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(
        long,
        value_enum,
        env = "QCLONE_FORMAT",
        default_value = "json",
        global = true
    )]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CloneArgs {
    #[command(subcommand)]
    pub cloner: Cloner,
    /// Polar angle of the input qubit in radians, in [0, π].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Azimuthal angle of the input qubit in radians, in [0, 2π).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Seed for a Haar-random input (ignored when angles are given).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Weight α² of |00⟩ in the register α|00⟩ + β|11⟩ (default 1/2).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha2: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Cloner {
    /// The 1 → 2 copier, run through its gate network.
    Uqcm,
    /// The 1 → 1+n cloner.
    Gm {
        /// Number of additional copies, 1 to 8.
        n: usize,
    },
    /// The 1 → 2 cloner for an M-level system, 2 ≤ M ≤ 64.
    Mdim { m: usize },
    /// Two-qubit register cloned qubit by qubit.
    RegisterLocal,
    /// Two-qubit register cloned as one 4-level system.
    RegisterNonlocal,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Output format.
    #[arg(long, value_enum, env = "QCLONE_FORMAT", default_value = "table")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Local,
    Nonlocal,
}

#[derive(Debug, Subcommand)]
pub enum SweepCommand {
    /// Scaling factor, Bures distance and entropies against M.
    MdimScaling {
        /// Inclusive range `start:stop` of dimensions.
        #[arg(long, default_value = "2:64")]
        m: IntRange,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Minimum partial-transpose eigenvalue of the cloned register against α².
    RegisterNegativity {
        /// `start:stop:steps`, endpoints included.
        #[arg(long, default_value = "0:1:101")]
        alpha2: FloatSweep,
        #[arg(long, value_enum, default_value = "local")]
        method: Method,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Fidelity of the 1 → 1+n cloner against n.
    GmFidelity {
        /// Inclusive range `start:stop` of copy counts.
        #[arg(long, default_value = "1:8")]
        n: IntRange,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[arg(value_enum)]
    pub circuit: CircuitKind,
    /// Number of copies for the copy stage.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitKind {
    Prep1,
    Copy,
}
