use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "charvar", version, about = "Character variety experiments: classification, orbits, censuses and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    JsonLines,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Seed for every random choice made by the command.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json-lines")]
    pub format: Format,
    /// Worker threads; only changes speed, never output.
    #[arg(long, default_value_t = 1)]
    #[serde(skip)]
    pub workers: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a point of a character variety.
    Classify(ClassifyArgs),
    /// Dynamical regime of a one-holed torus level set.
    Regime(RegimeArgs),
    /// Random walks of the mapping class group.
    Orbit(OrbitArgs),
    /// Exact census of integer points in an orbit.
    Enumerate(EnumerateArgs),
    /// Casimir, Jacobi and bracket checks of the Poisson structures.
    PoissonCheck(CheckArgs),
    /// Polynomial action and relations against explicit matrices.
    OracleCheck(CheckArgs),
    /// Equidistribution histograms on the SU(2) component.
    Histogram(HistogramArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Regime(_) => "regime",
            Command::Orbit(_) => "orbit",
            Command::Enumerate(_) => "enumerate",
            Command::PoissonCheck(_) => "poisson-check",
            Command::OracleCheck(_) => "oracle-check",
            Command::Histogram(_) => "histogram",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Classify(a) => &a.common,
            Command::Regime(a) => &a.common,
            Command::Orbit(a) => &a.common,
            Command::Enumerate(a) => &a.common,
            Command::PoissonCheck(a) | Command::OracleCheck(a) => &a.common,
            Command::Histogram(a) => &a.common,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long, default_value = "one-holed-torus")]
    pub model: String,
    /// Comma-separated coordinates; complex values as `1.5-2i`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Comma-separated boundary traces.
    #[arg(long, allow_hyphen_values = true)]
    pub boundary: Option<String>,
    /// G± sector label: RRR, R_iR_iR, iR_R_iR or iR_iR_R.
    #[arg(long)]
    pub sector: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RegimeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
    /// Use the regime table of a mixed G± sector.
    #[arg(long)]
    pub sector: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OrbitArgs {
    #[arg(long, default_value = "one-holed-torus")]
    pub model: String,
    /// Starting point; repeat for several starts.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub start: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub boundary: Option<String>,
    #[arg(long)]
    pub steps: u64,
    /// Independent walks per start.
    #[arg(long, default_value_t = 1)]
    pub runs: u32,
    #[arg(long, default_value_t = 1)]
    pub record_every: u64,
    /// Also draw Vieta involutions and sign flips.
    #[arg(long)]
    pub extended: bool,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Relative κ drift that aborts a run.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 1e6)]
    pub escape_radius: f64,
    /// Emit every recorded sample.
    #[arg(long)]
    pub emit_samples: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraversalArg {
    Bfs,
    Dfs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnumerateArgs {
    /// Integer triple, e.g. `3,3,3`.
    #[arg(long, allow_hyphen_values = true)]
    pub start: String,
    #[arg(long)]
    pub bound: i64,
    /// List every triple, not only canonical representatives.
    #[arg(long)]
    pub raw: bool,
    #[arg(long, value_enum, default_value = "bfs")]
    pub traversal: TraversalArg,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_states: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    /// Random points per suite.
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HistogramArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long)]
    pub steps: u64,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    /// Independent walks; consecutive pairs are compared for agreement.
    #[arg(long, default_value_t = 1)]
    pub runs: u32,
    #[arg(long)]
    pub extended: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 100.0)]
    pub min_expected: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}
