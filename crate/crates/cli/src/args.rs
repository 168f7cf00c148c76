use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "detkit", version, about = "Detectability and diagnosability of labeled finite-state automata")]
pub struct Cli {
    /// On errors, also print a JSON error object on stdout.
    #[arg(long, global = true)]
    pub error_json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide a property; exit 0 if it holds, 1 if it fails.
    Verify(VerifyArgs),
    /// Compute controllable transitions to disable; exit 0 if feasible.
    Synthesize(SynthesizeArgs),
    /// Build a composition or the observation automaton.
    Compose(ComposeArgs),
    /// Decide a property by bounded enumeration of observations.
    Oracle(OracleArgs),
    /// Compare structural verdicts with the oracles on random automata.
    Campaign(CampaignArgs),
    /// Current or delayed state estimate after an observation.
    Estimate(EstimateArgs),
    /// Report deadlocks and unobservable cycles.
    Check(ModelArg),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyName {
    OmegaKDelayed,
    StarKDelayed,
    OmegaK1k2,
    StarK1k2,
    OmegaK1k2D,
    StarK1k2D,
    Diagnosable,
}

#[derive(Args, Debug)]
pub struct ModelArg {
    /// Model file (`.json` for the JSON form, text otherwise).
    pub model: PathBuf,
}

#[derive(Args, Debug)]
pub struct PropertyArgs {
    #[arg(long, value_enum)]
    pub property: PropertyName,
    /// Delay bound for the K-delayed properties.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    /// Crucial pairs, one `x y` per line (D-properties only).
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub property: PropertyArgs,
    /// Write the violation witness as JSON.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Include the layer sets in the output.
    #[arg(long)]
    pub layers: bool,
    pub model: PathBuf,
}

#[derive(Args, Debug)]
pub struct SynthesizeArgs {
    #[command(flatten)]
    pub property: PropertyArgs,
    /// Exhaustive minimum-cardinality search instead of the cut heuristic.
    #[arg(long)]
    pub exact: bool,
    /// Largest controllable set accepted by --exact.
    #[arg(long, default_value_t = detkit::synthesis::DEFAULT_EXHAUSTIVE_CAP)]
    pub cap: usize,
    /// Write the plan, including the residual model, as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    pub model: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComposeKind {
    Cc,
    Obs,
    CcTn,
}

#[derive(Args, Debug)]
pub struct ComposeArgs {
    #[arg(long, value_enum)]
    pub kind: ComposeKind,
    /// Keep every pair state instead of the accessible ones.
    #[arg(long)]
    pub full: bool,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a Graphviz rendering.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Emit the JSON model form.
    #[arg(long)]
    pub json: bool,
    pub model: PathBuf,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub property: PropertyArgs,
    /// Observation length explored; defaults to the exactness bound.
    #[arg(long)]
    pub depth: Option<usize>,
    pub model: PathBuf,
}

#[derive(Args, Debug)]
pub struct CampaignArgs {
    #[arg(long, default_value_t = 500)]
    pub instances: usize,
    /// Maximum number of states per instance.
    #[arg(long, default_value_t = 5)]
    pub states: usize,
    #[arg(long, default_value_t = 6)]
    pub events: usize,
    #[arg(long, default_value_t = 2)]
    pub unobservable: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Print the full report as JSON instead of the table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Observed symbols, separated by spaces.
    #[arg(long, default_value = "")]
    pub word: String,
    /// Symbols observed afterwards, for the delayed estimate.
    #[arg(long)]
    pub after: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub max_word_len: usize,
    pub model: PathBuf,
}
