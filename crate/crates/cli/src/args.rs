use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bcurves",
    version,
    about = "Exact and Monte Carlo statistics of blocking plane curves over F_q"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Worker threads (0 = all cores). Never changes results.
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the result here instead of stdout; the run manifest goes next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Lift the size guards of the exact engines.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Line-union frequency table: k lines, points in their union, count.
    Table {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Exact density of non-blocking curves from both exact engines.
    Nb {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Blocking sets by size, with the smooth-curve density and ratio.
    Census {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        common: Common,
    },
    /// The two-sided bound on nb(q), with the exact value when computable.
    Bounds {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo samplers.
    Mc(McArgs),
    /// Random trials of independence of point conditions.
    Interp {
        /// Comma-separated field sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 4, 5, 7, 8, 9])]
        q: Vec<u64>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 20)]
        k_max: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the elimination smoothness test with the extension-field oracle.
    SmoothCheck {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Random curves to test; 0 walks every form of degree d.
        #[arg(long, default_value_t = 0)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Check one polynomial given as `q d c0 c1 ...` instead.
        #[arg(long)]
        poly: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute every published table and constant and cross-check the engines.
    Report {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum McKind {
    Blocking,
    PointCount,
    Line,
    Skew,
    KPoint,
    Smooth,
    Roots,
    Moments,
}

#[derive(Args, Debug)]
pub struct McArgs {
    #[arg(long, value_enum)]
    pub kind: McKind,
    #[arg(long)]
    pub q: u64,
    /// Curve degree; unused by `roots`.
    #[arg(long, default_value_t = 0)]
    pub d: u32,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Line index for `line`.
    #[arg(long, default_value_t = 0)]
    pub line: usize,
    /// Intersection size for `k-point`.
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    /// Highest moment for `moments`.
    #[arg(long, default_value_t = 4)]
    pub k_max: u32,
    #[command(flatten)]
    pub common: Common,
}
