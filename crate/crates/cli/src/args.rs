//! Command-line grammar.

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "dw",
    version,
    about = "Expand, recover and check Donaldson series of simple type"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "DW_FORMAT", default_value = "table")]
    pub format: Format,

    /// Fail instead of warning when a guarantee needs Q(S) > 0 and the input violates it.
    #[arg(long, global = true)]
    pub paper_backed: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List built-in entries, or print one.
    Catalog {
        /// Entry name such as `k3`, `elliptic_pg3` or `k3#cp2bar`.
        name: Option<String>,
    },
    /// C_d(S) and q_d(S) along a ray, or oracle tables for many rays.
    Expand(ExpandArgs),
    /// Minimal recurrence and integer-root decomposition of a ray sequence.
    Sequence(SequenceArgs),
    /// Reconstruct a series from ray data.
    Recover(RecoverArgs),
    /// Genus lower bound for an embedded surface.
    GenusBound(ClassArgs),
    /// J(h) = max K_s·h.
    Jnorm(ClassArgs),
    /// Remainder of log q(tS) after t²Q(S)/2 + tJ(S).
    Asympt(AsymptArgs),
    /// Structural validation of a series.
    Check(CheckArgs),
    /// Series after a connected sum with a negative-definite CP².
    Blowup(BlowupArgs),
    /// Conjectured series of an elliptic surface with multiple fibres.
    Dolgachev(DolgachevArgs),
    /// Reduce a mixed invariant table to q_d(S).
    ReduceTable(ReduceTableArgs),
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    /// `builtin:<name>` or a series JSON file.
    #[arg(long)]
    pub series: String,
    /// Ray as `e1+2*e3` or `[0,1,-1]`.
    #[arg(long, conflicts_with_all = ["plan", "rays"])]
    pub ray: Option<String>,
    /// Highest degree. Defaults to the plan degree with --plan, or to the
    /// degrees present in an oracle file given to --rays.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Emit an oracle table for every ray a recovery with these bounds queries.
    #[arg(long)]
    pub plan: bool,
    /// Emit an oracle table for the rays listed in a file: one expression per
    /// line, or an oracle CSV.
    #[arg(long)]
    pub rays: Option<String>,
    #[command(flatten)]
    pub recovery: RecoveryOpts,
}

#[derive(Debug, Args, Clone)]
pub struct RecoveryOpts {
    /// Bound B on |K·e_i| for every basic class K.
    #[arg(long)]
    pub bound: Option<u64>,
    /// Maximum number of basic classes.
    #[arg(long)]
    pub max_classes: Option<usize>,
    /// Terms requested beyond twice the class budget.
    #[arg(long, default_value_t = 4)]
    pub degree_margin: usize,
    /// Random rays used to verify the reconstruction.
    #[arg(long, default_value_t = 2)]
    pub verify_rays: usize,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    /// RaySequence CSV (`d,c_d`).
    #[arg(long, conflicts_with_all = ["series", "ray"], required_unless_present = "series")]
    pub input: Option<String>,
    #[arg(long, requires = "ray", requires = "degree")]
    pub series: Option<String>,
    #[arg(long)]
    pub ray: Option<String>,
    #[arg(long)]
    pub degree: Option<usize>,
    /// Q(S) for the parity and support checks (implied with --series).
    #[arg(long, allow_hyphen_values = true)]
    pub qs: Option<String>,
    /// Claimed genus for the support check.
    #[arg(long)]
    pub genus: Option<u64>,
    /// Extra terms required beyond twice the order.
    #[arg(long, default_value_t = 0)]
    pub margin: usize,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    /// `file:<oracle.csv>` or `builtin:<name>`.
    #[arg(long)]
    pub oracle: String,
    /// Lattice JSON file or `builtin:<name>`; implied by a builtin oracle.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Print the full recovery report instead of the series.
    #[arg(long)]
    pub report: bool,
    #[command(flatten)]
    pub recovery: RecoveryOpts,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    #[arg(long)]
    pub series: String,
    /// Class as `e1+2*e3` or `[0,1,-1]`.
    #[arg(long, allow_hyphen_values = true)]
    pub class: String,
}

#[derive(Debug, Args)]
pub struct AsymptArgs {
    #[arg(long)]
    pub series: String,
    #[arg(long, allow_hyphen_values = true)]
    pub ray: String,
    /// Comma-separated values of t.
    #[arg(long, value_delimiter = ',', default_value = "5,10,15,20,25,30,35,40,45,50")]
    pub t: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub series: String,
    /// Euler characteristic for the numerology check (builtin entries supply it).
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<i64>,
    /// Signature for the numerology check (builtin entries supply it).
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<i64>,
}

#[derive(Debug, Args)]
pub struct BlowupArgs {
    #[arg(long)]
    pub series: String,
    /// Number of blow-ups.
    #[arg(long, default_value_t = 1)]
    pub times: u32,
}

#[derive(Debug, Args)]
pub struct DolgachevArgs {
    #[arg(long)]
    pub pg: u32,
    /// Multiple-fibre multiplicities, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub mult: Vec<u32>,
}

#[derive(Debug, Args)]
pub struct ReduceTableArgs {
    /// MixedInvariantTable JSON file.
    #[arg(long)]
    pub table: String,
}
