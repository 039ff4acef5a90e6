use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "programsey", version)]
#[command(
    about = "Ramsey lower bounds, exhaustive oracles and exact thresholds for semi- and quasi-progressions"
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Emit errors as a JSON object on stderr
    #[arg(long, global = true)]
    pub json_errors: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form and spectral lower bounds
    #[command(subcommand)]
    Bound(BoundCmd),

    /// The beta_{r,n} table
    Table {
        #[arg(long, default_value_t = 4)]
        r_max: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = programsey::spectral::DEFAULT_TOL)]
        tol: f64,
    },

    /// Exhaustive counts over all colorings
    #[command(subcommand)]
    Oracle(OracleCmd),

    /// Exact thresholds and witness colorings
    #[command(subcommand)]
    Search(SearchCmd),

    /// Re-verify a witness certificate file
    Check { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum BoundCmd {
    /// alpha(m) = sqrt(2^m / (2^m - 1))
    Semi {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: Option<usize>,
    },
    /// beta_{r,n} = sqrt(r / lambda_max(A_{r,n}))
    Quasi {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = programsey::spectral::DEFAULT_TOL)]
        tol: f64,
    },
    /// Naive, earlier and current bounds side by side
    Compare {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// semi or quasi
    #[arg(long)]
    pub family: String,
    /// Scope m (semi) or diameter n (quasi)
    #[arg(long)]
    pub param: usize,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Number of points N
    #[arg(long)]
    pub points: usize,
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, env = "PROGRAMSEY_MAX_POINTS", default_value_t = 24)]
    pub max_points: usize,
    #[arg(long, env = "PROGRAMSEY_MAX_COLORINGS", default_value_t = 1 << 24)]
    pub max_colorings: u64,
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    /// Count colorings with a monochromatic progression
    Count(OracleArgs),
    /// Count and compare against the counting bound (exit 1 if violated)
    Verify(OracleArgs),
    /// Check that primaries partition the colorings for one (a, d)
    Partition {
        #[command(flatten)]
        base: OracleArgs,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        d: usize,
    },
    /// Check the per-progression forced-cell bound for one (a, d)
    Forced {
        #[command(flatten)]
        base: OracleArgs,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        d: usize,
    },
    /// Count reports for N = 1..=points
    Sweep(OracleArgs),
}

#[derive(Subcommand, Debug)]
pub enum SearchCmd {
    /// Exact threshold by exhaustive backtracking
    Exact {
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, env = "PROGRAMSEY_MAX_NODES", default_value_t = 100_000_000)]
        max_nodes: u64,
        #[arg(long, default_value_t = 512)]
        max_length: usize,
        /// Write the witness certificate here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random coloring with local repair
    Witness {
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total repair moves across all streams
        #[arg(long, env = "PROGRAMSEY_MAX_MOVES", default_value_t = 1_000_000)]
        max_moves: u64,
        #[arg(long, default_value_t = 16)]
        restarts: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
