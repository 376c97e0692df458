use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Experiments on random graphs just above the connectivity threshold.
#[derive(Parser, Debug, Clone)]
#[command(name = "keychain", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Master seed; every random choice is derived from it
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = ProfileArg::Desk)]
    pub profile: ProfileArg,

    /// Overrides the profile's γ
    #[arg(long, global = true)]
    pub gamma: Option<f64>,

    /// Growth factor g of the sequence a_j (desk profile only)
    #[arg(long, global = true)]
    pub growth: Option<f64>,

    /// Trial count for sampled checks, mcs and sweep
    #[arg(long, global = true)]
    pub trials: Option<usize>,

    /// Write CSV and JSON reports into this directory instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Format printed to stdout when --out is absent
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Sample G(n, p) and print it as an edge list
    Sample(Gnp),
    /// Print the KeyChain KC(n, t, ℓ)
    Template {
        #[arg(long)]
        n: usize,
        /// Key count; computed from the profile with --ell when absent
        #[arg(long, requires = "ell")]
        t: Option<usize>,
        #[arg(long, requires = "t")]
        ell: Option<usize>,
    },
    /// Compute (t, ℓ, a_j) for n (any size, as a decimal string)
    Params {
        #[arg(long)]
        n: String,
    },
    /// Check properties P1–P8
    Check {
        #[command(flatten)]
        source: GraphSource,
        /// Properties to check (default: all)
        #[arg(long = "property", value_delimiter = ',')]
        properties: Vec<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Sampled)]
        mode: ModeArg,
    },
    /// Find a spanning KeyChain
    Embed {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Check an embedding (JSON from `embed`) against a graph
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        embedding: PathBuf,
    },
    /// Find a Hamilton cycle by sparsification and boosters
    Hamiltonize {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        d0: Option<usize>,
    },
    /// Maximum common edge subgraph experiments
    Mcs {
        #[command(subcommand)]
        action: McsAction,
    },
    /// Success rates over a grid of n and p (or c)
    Sweep {
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            conflicts_with = "p"
        )]
        c: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Metric::Connected)]
        metric: Metric,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum McsAction {
    /// M(G1, G2) over independent pairs of G(n, p)
    Experiment {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = McsModeArg::Exact)]
        mode: McsModeArg,
        /// Report how often M exceeds (1 + ε)n
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        epsilon: Vec<f64>,
    },
    /// Union bound on Pr(M ≥ (1 + ε)n)
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        /// Defaults to n^{-1+δ}
        #[arg(long)]
        p: Option<f64>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Gnp {
    #[arg(long)]
    pub n: usize,
    #[arg(long, required_unless_present = "c", conflicts_with = "c")]
    pub p: Option<f64>,
    /// Offset c with p = (ln n + c) / n
    #[arg(long, allow_hyphen_values = true, required_unless_present = "p")]
    pub c: Option<f64>,
}

/// A graph file, or G(n, p) sampled from the master seed.
#[derive(Args, Debug, Clone)]
pub struct GraphSource {
    /// Edge-list file
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, conflicts_with = "graph")]
    pub n: Option<usize>,
    #[arg(long, conflicts_with_all = ["graph", "c"])]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "graph")]
    pub c: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileArg {
    Paper,
    Desk,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Exact,
    Sampled,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum McsModeArg {
    Exact,
    Heuristic,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Connected,
    Embed,
}
