//! Command-line grammar. Every command's arguments are also serialised into
//! the run manifest, so a manifest can be replayed without the shell line.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "qes", version, about = "Quasi-exactly-solvable sectors of sextic, third-order and n-th order eigenproblems")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalFlags,
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalFlags {
    /// Working precision of the multiple-precision parts.
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    /// Eigenvalue tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Series seeding point near the origin.
    #[arg(long, global = true)]
    pub x0: Option<f64>,
    /// Matching point.
    #[arg(long, global = true)]
    pub xm: Option<f64>,
    /// Outer seeding point (adaptive when absent).
    #[arg(long, global = true)]
    pub xr: Option<f64>,
    /// Output form: coeffs|roots for `poly`, json|tsv elsewhere.
    #[arg(long, global = true, value_enum)]
    pub emit: Option<Emit>,
    /// Output file: the TSV samples with `--emit tsv`, otherwise the manifest.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Configuration file (key = value); defaults to $QES_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Run every scan sequentially.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Emit {
    Coeffs,
    Roots,
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    #[command(flatten)]
    Run(Command),
    /// Re-run a stored manifest and compare the results.
    Replay {
        manifest: PathBuf,
    },
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Polynomial of a recursion family: coefficients or real roots.
    Poly(PolyArgs),
    /// Eigenvalues by shooting.
    Spectrum(SpectrumArgs),
    /// Level-by-level pairing of a sextic and its third-order partner.
    Isospec(IsospecArgs),
    /// Resonance obstruction polynomial, its roots and their channels.
    Resonance(ResonanceArgs),
    /// Closed-form solutions, optionally sampled on a grid.
    Closedform(ClosedformArgs),
    /// Biorthogonality of direct and adjoint third-order eigenfunctions.
    Biorthogonality(BiorthArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Poly(_) => "poly",
            Command::Spectrum(_) => "spectrum",
            Command::Isospec(_) => "isospec",
            Command::Resonance(_) => "resonance",
            Command::Closedform(_) => "closedform",
            Command::Biorthogonality(_) => "biorthogonality",
        }
    }
}

/// Parameters shared by the problem-selecting commands. Rationals are
/// `p/q` strings.
#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<String>,
    /// QES level; selects α = α_J(l) or g = g_qes(J, l).
    #[arg(long)]
    pub j: Option<u32>,
    /// Comma-separated exponents, e.g. `3/2,-3/2,3`.
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// Order n of the general family.
    #[arg(long)]
    pub order: Option<u32>,
    /// Potential power M of the general family (V = x^{nM}).
    #[arg(long)]
    pub power: Option<u32>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolyFamily {
    Sextic,
    Irregular,
    Cheng,
    General,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyArgs {
    #[arg(long, value_enum)]
    pub family: PolyFamily,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Polynomial index (defaults to J when J is given).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Sextic,
    Third,
    Adjoint,
    General,
    Irregular,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemKind,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 5)]
    pub k_max: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsospecArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 5)]
    pub k_max: usize,
    /// Certification threshold on |E_k − κĒ_k|.
    #[arg(long, default_value_t = 1e-6)]
    pub pair_tol: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResonanceFamily {
    Sextic,
    Third,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceArgs {
    #[arg(long, value_enum)]
    pub family: ResonanceFamily,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedformKind {
    Whittaker,
    Bessel,
    F02,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedformArgs {
    #[arg(long, value_enum)]
    pub kind: ClosedformKind,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Leading exponent g0 of the ₀F₂ solution (defaults to g_qes(1, l)).
    #[arg(long, allow_hyphen_values = true)]
    pub g0: Option<String>,
    /// Sample grid `start:end:count`.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiorthArgs {
    /// Ordered direct triple g0 < g1 < g2.
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    #[arg(long, default_value_t = 2)]
    pub n_max: usize,
    /// Certification threshold on the normalised off-diagonal entries.
    #[arg(long, default_value_t = 1e-6)]
    pub orth_tol: f64,
}
