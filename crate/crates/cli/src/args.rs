use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "quadpencil", version, about = "Rational points on intersections of two diagonal quadrics in P^3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Coefficients of the first form, `a0,a1,a2,a3`.
    #[arg(long, allow_hyphen_values = true, requires = "b", conflicts_with = "curve")]
    pub a: Option<String>,
    /// Coefficients of the second form, `b0,b1,b2,b3`.
    #[arg(long, allow_hyphen_values = true, requires = "a", conflicts_with = "curve")]
    pub b: Option<String>,
    /// JSON file `{"a": [..4], "b": [..4]}`; entries may be integers or decimal strings.
    #[arg(long)]
    pub curve: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads; defaults to the number of available cores.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Byte cap on stored points.
    #[arg(long, env = "QUADPENCIL_MEMORY_BUDGET")]
    pub memory_budget: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plücker data, height, reduction and Jacobian of a pencil.
    Analyze {
        #[command(flatten)]
        curve: CurveArgs,
        /// Rank estimate constant.
        #[arg(long, default_value_t = 0.722)]
        c: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        c0: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// All rational points of height at most B.
    Enumerate {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long = "bound", short = 'B')]
        bound: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Point counts over F_p for the good primes up to a limit.
    Fpcount {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 100)]
        p_limit: u64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Divisibility certificates for evaluation determinants.
    Detverify {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, short = 'k', default_value_t = 1)]
        k: usize,
        #[arg(long = "bound", short = 'B', default_value = "1")]
        bound: String,
        /// Prime for the residue-class certificates; defaults to the least good odd prime.
        #[arg(long)]
        p: Option<u64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// An auxiliary form through the first points of height at most B.
    Auxform {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, short = 'k', default_value_t = 1)]
        k: usize,
        #[arg(long = "bound", short = 'B')]
        bound: String,
        /// Number of points the form must pass through; at most 8k - 1 by default.
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Shape values of the counting bounds next to N(B).
    Bounds {
        #[command(flatten)]
        curve: CurveArgs,
        /// Comma-separated height bounds.
        #[arg(long = "bound", short = 'B', value_delimiter = ',', num_args = 1.., required = true)]
        bounds: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        /// Exact rational, as a fraction or a decimal.
        #[arg(long, default_value = "0.0075")]
        delta: String,
        #[arg(long, default_value_t = 0.722)]
        c: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        c0: f64,
        /// Known rank; otherwise the heuristic estimate is used.
        #[arg(long)]
        rank: Option<f64>,
        /// Skip the enumeration of N(B).
        #[arg(long)]
        no_count: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Scan a coefficient box for pencils with many small points.
    Search {
        #[arg(long = "box", default_value_t = 10)]
        coeff_box: i64,
        #[arg(long, default_value_t = 3)]
        coord_limit: u32,
        #[arg(long = "bound", short = 'B', default_value_t = 20)]
        bound: u64,
        #[arg(long, default_value_t = 8)]
        min_points: usize,
        #[arg(long, default_value_t = 20)]
        max_curves: usize,
        #[command(flatten)]
        run: RunArgs,
    },
}

impl Command {
    pub fn run_args(&self) -> &RunArgs {
        match self {
            Command::Analyze { run, .. }
            | Command::Enumerate { run, .. }
            | Command::Fpcount { run, .. }
            | Command::Detverify { run, .. }
            | Command::Auxform { run, .. }
            | Command::Bounds { run, .. }
            | Command::Search { run, .. } => run,
        }
    }
}
