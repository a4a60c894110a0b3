//! `descent` — exact descent-operator tooling on finite spaces plus grid
//! dispersion numerics.

mod render;
mod run;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "descent",
    about = "Audit descent operators, compute critical structure, run downhill dynamics and validate dispersion identities",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,

    /// Space-spec JSON document (vertices, generator, metric,
    /// neighborhoods, functions).
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,

    /// Operator expression: inline JSON (starts with '{') or a file path.
    /// Defaults to {"op":"TL"}.
    #[arg(long, global = true)]
    pub op: Option<String>,

    /// Number of integer grid levels (values 0..G-1) for exhaustive scans.
    #[arg(long, global = true, default_value_t = 3)]
    pub grid: u32,

    /// Enumeration budget cap (fields / pairs).
    #[arg(long, global = true)]
    pub cap: Option<u128>,

    /// Seed recorded in every output and used by sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output directory for artifacts (default: $DESCENT_OUT_DIR; no files
    /// written when unset).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Audit an operator against the descent-modulus axioms on a full grid.
    Audit,
    /// Critical set of a named function under an operator.
    Critical {
        #[arg(long = "fn")]
        function: String,
    },
    /// Order minima of a named function under the document's generator.
    Minima {
        #[arg(long = "fn")]
        function: String,
    },
    /// Exhaustive determination oracle over the grid.
    Determine,
    /// Simulate the downhill jump process.
    Simulate {
        #[arg(long = "fn")]
        function: String,
        /// Start vertex label.
        #[arg(long)]
        start: String,
        #[arg(long, default_value_t = 100.0)]
        horizon: f64,
    },
    /// Exact limit law of the downhill process from a start vertex.
    Pif {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        start: String,
    },
    /// Classify a homogeneous operator by its critical map.
    Classify,
    /// Audit the critical-map axioms Z1-Z5.
    Zaxioms {
        /// Extra scaling probes (rationals "p/q"), prepended to defaults.
        #[arg(long)]
        rset: Vec<String>,
    },
    /// Ball-averaged dispersion of a packaged function on a grid domain.
    Dispersion {
        /// 1 or 2 space dimensions on [-1, 1]^dim.
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 512)]
        res: usize,
        /// Packaged profile: x2 | negx2 | quad (2-D, see --coef).
        #[arg(long = "fn", default_value = "x2")]
        function: String,
        /// Quadratic coefficients "a,b,c,d,e" for a x^2 + b y^2 + c xy + d x + e y.
        #[arg(long)]
        coef: Option<String>,
        /// Evaluation point, comma-separated.
        #[arg(long, default_value = "1")]
        point: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = false)]
        oriented: bool,
        /// Coarsest sweep radius (default: a quarter of the box side).
        #[arg(long)]
        sweep_start: Option<f64>,
        /// Number of sweep radii before clamping at eight cells.
        #[arg(long, default_value_t = 6)]
        radii: usize,
    },
    /// Monte-Carlo check of the rotation-invariance ball identity.
    BallIdentity {
        /// Vector components, comma-separated.
        #[arg(long)]
        vector: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(&cli) {
        Ok(run::Outcome::Clean) => ExitCode::SUCCESS,
        Ok(run::Outcome::TheoremViolation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
