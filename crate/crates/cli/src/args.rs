use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hypermatch",
    version,
    about = "Exact matching thresholds in uniform hypergraphs"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Emit a single JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads. Results are identical for every value.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Write witness hypergraphs to this file (text format).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    pub timed: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build an extremal construction.
    Construct(ConstructArgs),
    /// Evaluate bound formulas.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Matching number, perfect matching and the fractional LP.
    Solve(SolveArgs),
    /// Shifting, shadows and the bounded-matching extremal search.
    #[command(subcommand)]
    Emc(EmcCommand),
    /// Brute-force degree and size thresholds.
    Threshold(ThresholdArgs),
    /// Finite-n replay of the fractional reduction chain.
    Replay(ReplayArgs),
    /// Run the acceptance battery.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "aks", alias = "a-ks")]
    Aks,
    #[value(name = "an1s", alias = "a-n1s")]
    An1s,
    #[value(name = "parity")]
    Parity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Odd,
    Even,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub kind: ConstructKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub s: Option<usize>,
    /// Size of the part `A` for parity constructions.
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long, value_enum, default_value = "odd")]
    pub parity: ParityArg,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// Evaluate one formula.
    Eval(EvalArgs),
    /// Conjectured, known and new coefficients over a range of k.
    Table(TableArgs),
    /// Order the three coefficients at one (k,d).
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub formula: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub x: Option<String>,
    /// Working precision in bits for interval formulas.
    #[arg(long, default_value_t = 96)]
    pub bits: u32,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Inclusive range such as `3..12` or `3-12`.
    #[arg(long)]
    pub k_range: String,
    /// `all`, `fixed:<d>` or `min-ratio:<x>`.
    #[arg(long, default_value = "all")]
    pub d_rule: String,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub d: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveMode {
    Nu,
    Pm,
    Frac,
    Pfm,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Hypergraph file; stdin when absent or `-`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: SolveMode,
}

#[derive(Subcommand, Debug)]
pub enum EmcCommand {
    /// Largest family with matching number at most s.
    Search(SearchArgs),
    /// Check `s|∂F| >= |F|` for `s = ν(F)`.
    VerifyShadow(InputArgs),
    /// Check the nested cross-dependent inequality on a multi-family file.
    #[command(alias = "check-t31")]
    CheckNested(NestedArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchModeArg {
    Exhaustive,
    Pruned,
    Stable,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub s: usize,
    /// Search stable families only.
    #[arg(long)]
    pub stable: bool,
    /// Force a search mode.
    #[arg(long, value_enum, conflicts_with = "stable")]
    pub mode: Option<SearchModeArg>,
    #[arg(long)]
    pub cap_nodes: Option<u64>,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NestedArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "1/2")]
    pub beta: String,
    /// Defaults to `ceil(beta(2s+1))`.
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Md,
    Fd,
    M0,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub d: Option<usize>,
    /// Matching size; a rational for `fd`.
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub cap_nodes: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub d: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "quick")]
    pub profile: String,
    /// Run a single criterion, e.g. `AC-5`.
    #[arg(long)]
    pub only: Option<String>,
}
