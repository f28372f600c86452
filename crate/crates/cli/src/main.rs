mod commands;
mod error;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "cliquerel", version, about = "Clique-labelling relations: graphs, protocols, payoffs and reconstruction")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance for orthogonality and zero checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Search budget (classical search nodes, G2 vertex limit).
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Generate or check orthogonality graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Build a relation from a graph or infer a graph from a relation.
    #[command(subcommand)]
    Relation(RelationCmd),
    /// Classical protocols and message counts.
    #[command(subcommand)]
    Complexity(ComplexityCmd),
    /// Quantum strategies, optimization, MUB and RSP reports.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// Paley graph identities and spectra.
    #[command(subcommand)]
    Paley(PaleyCmd),
    /// Round simulation and reconstruction probabilities.
    #[command(subcommand)]
    Simulate(SimulateCmd),
}

#[derive(Args, Debug, Clone)]
pub struct Io {
    /// Input JSON file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct OutOnly {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Disconnected,
    Nncc,
    Paley,
}

#[derive(Subcommand, Debug)]
pub enum GraphCmd {
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        omega: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[command(flatten)]
        out: OutOnly,
    },
    Check {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand, Debug)]
pub enum RelationCmd {
    /// Graph JSON to relation JSON.
    Build {
        #[command(flatten)]
        io: Io,
    },
    /// Relation JSON to graph JSON.
    Infer {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Deterministic,
    Randomized,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    T1,
    T2,
}

#[derive(Subcommand, Debug)]
pub enum ComplexityCmd {
    /// Omega-message deterministic T0 strategy.
    Ccr {
        #[command(flatten)]
        io: Io,
    },
    /// |V|-message strategy meeting T0 and T1.
    Sccr {
        #[command(flatten)]
        io: Io,
    },
    /// Both message counts.
    Report {
        #[command(flatten)]
        io: Io,
    },
    /// Exhaustive check that no m-message protocol meets T0 and T1.
    Lowerbound {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Model::Deterministic)]
        model: Model,
    },
    /// Public-coin mixture meeting T1 or T2.
    Mixture {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = Target::T2)]
        target: Target,
    },
}

#[derive(Subcommand, Debug)]
pub enum QuantumCmd {
    /// Table of a constructed faithful representation.
    Table {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        d: usize,
    },
    /// Maximize the payoff over representations in dimension d.
    Optimize {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
    /// Quantum strategy from the optimal Paley Gram matrix.
    Paley {
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        out: OutOnly,
    },
    /// MUB certificate on a disjoint union of cliques.
    Mub {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        d: usize,
    },
    /// Payoff of equatorial measurement bases.
    Rsp {
        /// Number of evenly spread bases.
        #[arg(long, conflicts_with = "angles")]
        n: Option<usize>,
        /// Use azimuths k*pi/n (the default when --n is given).
        #[arg(long)]
        symmetric: bool,
        /// Explicit comma-separated azimuths in radians.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Option<Vec<f64>>,
        #[command(flatten)]
        out: OutOnly,
    },
}

#[derive(Subcommand, Debug)]
pub enum PaleyCmd {
    Analyze {
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        out: OutOnly,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Ccr,
    Sccr,
    T1,
    T2,
    Uniform,
    Quantum,
}

#[derive(Args, Debug, Clone)]
pub struct TableSource {
    /// Built-in strategy for the input graph.
    #[arg(long, value_enum, conflicts_with = "table")]
    pub strategy: Option<Strategy>,
    /// Dimension for the quantum strategy (defaults to omega).
    #[arg(long)]
    pub d: Option<usize>,
    /// Table JSON instead of a built-in strategy.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum SimulateCmd {
    /// Simulate k rounds; the log goes to --out as CSV, a summary to stdout.
    Run {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        source: TableSource,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact and Monte-Carlo success probability over a grid of k, as CSV.
    Success {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        source: TableSource,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u64>,
        /// Monte-Carlo trials per k; 0 skips the simulation column.
        #[arg(long, default_value_t = 0)]
        trials: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = commands::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}
