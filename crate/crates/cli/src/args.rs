use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact experiments on nilpotent matrix pairs with scalar commutator over finite fields.
#[derive(Parser, Debug)]
#[command(name = "nilpairs", version)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Master seed; defaults to $NILPAIRS_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Points enumerated exhaustively per cell before switching to sampling.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    pub enumeration_cap: u64,
    /// Samples per cell once enumeration is out of reach.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a pair and print it as pair JSON.
    Construct(ConstructArgs),
    /// Re-check every invariant of a pair file.
    Verify {
        pair: PathBuf,
    },
    /// Centre and matrix-structure checks in the Weyl algebra.
    WeylCheck {
        #[arg(long)]
        p: u32,
        /// Truncation level a of the quotient by x^(p^a), y^(p^a).
        #[arg(long, default_value_t = 1)]
        a: u32,
    },
    /// Decide simultaneous conjugacy of two pairs (and of their p-th powers).
    Conjugacy {
        first: PathBuf,
        second: PathBuf,
        /// Random intertwiner combinations tried before enumeration.
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Point counts of X, Y or D with a dimension fit.
    Count(CountArgs),
    /// Dimension fits, plus the fiber of (A, B) -> A over a regular nilpotent.
    Dims(CountArgs),
    /// Tangent-space dimension at a pair.
    Tangent(PairSource),
    /// Centralizer and preimage dimensions at a good pair.
    Fiber {
        #[command(flatten)]
        source: PairSource,
        #[arg(long, default_value = "fixed-lambda")]
        mode: String,
        /// Field sizes for the all-lambda preimage counts.
        #[arg(long, value_delimiter = ',')]
        q: Vec<u32>,
    },
    /// Run the whole experiment battery and write one report.
    Report {
        /// Morita trials per configuration.
        #[arg(long, default_value_t = 100)]
        morita_trials: usize,
        /// Commuting pairs sampled for the algebra-dimension bound.
        #[arg(long, default_value_t = 1000)]
        gerstenhaber_trials: usize,
        /// Also count at q = 8 by brute force (about 17M pair checks).
        #[arg(long)]
        with_q8: bool,
    },
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Integer (reduced mod p) or comma-separated base-p coefficients.
    #[arg(long, default_value = "1")]
    pub lambda: String,
    /// C = D = J_r.
    #[arg(long, conflicts_with_all = ["standard", "c_type"])]
    pub good: bool,
    /// The p x p pair of the standard representation.
    #[arg(long, conflicts_with = "c_type")]
    pub standard: bool,
    /// Jordan type of C, e.g. 2,1; D is its cyclic partner unless --d-zero.
    #[arg(long, value_delimiter = ',')]
    pub c_type: Vec<usize>,
    #[arg(long, requires = "c_type")]
    pub d_zero: bool,
    /// Perturb the result: centralizing-upper or poly-in-a.
    #[arg(long)]
    pub perturb: Option<String>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long, default_value = "X")]
    pub variety: String,
    #[arg(long)]
    pub n: usize,
    /// Characteristic; checked against every q.
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<u32>,
    #[arg(long, default_value = "all")]
    pub lambda_mode: String,
    /// auto, brute, class or both.
    #[arg(long, default_value = "auto")]
    pub method: String,
}

#[derive(Args, Debug)]
pub struct PairSource {
    /// Pair JSON file; otherwise the good pair for --p, --m, --r, --lambda.
    #[arg(long)]
    pub pair: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, default_value = "1")]
    pub lambda: String,
}
