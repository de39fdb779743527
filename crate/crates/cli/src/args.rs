use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const GOLDEN: &str = "surd:(sqrt(5)-1)/2";

#[derive(Parser, Debug, Clone)]
#[command(
    name = "skewshift",
    version,
    about = "Skew-shift orbit and exponential-sum experiments"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// Flat `section.key = value` file; entries of the chosen command's
    /// section (and of `global`) are read as if given first on the command line.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed recorded in the header and used by every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Serialize, Debug, Clone)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Dump `f^1 x, ..., f^N x`.
    Orbit(OrbitArgs),
    /// Exponential sums of one polynomial or over a box of frequency vectors.
    Expsum(ExpsumArgs),
    /// Ratio of `|S|^(2^(b-1))` to the Weyl differencing bound.
    Weyl(WeylArgs),
    /// Brute-force Vinogradov mean values and shifted counts.
    Vinogradov(VinogradovArgs),
    /// Hit counts against the Fejer-kernel majorant.
    Fejer(FejerArgs),
    /// Fitted hit-count exponents against the sublinear bounds.
    Sublinear(SublinearArgs),
    /// Wavepacket moments for a finite-volume operator.
    Transport(TransportArgs),
    /// Continued fractions, empirical Diophantine constants and denominators.
    Dioph(DiophArgs),
    /// Summarize run outputs and tabulate the exponents.
    Report(ReportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Orbit(_) => "orbit",
            Command::Expsum(_) => "expsum",
            Command::Weyl(_) => "weyl",
            Command::Vinogradov(_) => "vinogradov",
            Command::Fejer(_) => "fejer",
            Command::Sublinear(_) => "sublinear",
            Command::Transport(_) => "transport",
            Command::Dioph(_) => "dioph",
            Command::Report(_) => "report",
        }
    }

    pub fn default_format(&self) -> Format {
        match self {
            Command::Sublinear(_) | Command::Dioph(_) | Command::Report(_) => Format::Json,
            _ => Format::Csv,
        }
    }
}

pub const NAMES: [&str; 9] = [
    "orbit",
    "expsum",
    "weyl",
    "vinogradov",
    "fejer",
    "sublinear",
    "transport",
    "dioph",
    "report",
];

/// A skew-shift `T^b -> T^b` and a starting point.
#[derive(Args, Serialize, Debug, Clone)]
pub struct SystemArgs {
    /// Torus dimension.
    #[arg(long, default_value_t = 2)]
    pub b: usize,
    /// Frequency descriptor: `surd:(a+b*sqrt(d))/c`, `dec:<digits>` or a bare decimal.
    #[arg(long, default_value = GOLDEN)]
    pub omega: String,
    /// Starting point, comma-separated descriptors; zero when omitted.
    #[arg(long)]
    pub x: Option<String>,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct OrbitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Number of points.
    #[arg(long)]
    pub n: u64,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct ExpsumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Monomial coefficients `c_0,...,c_d` of a single phase polynomial;
    /// replaces the skew-shift source.
    #[arg(long)]
    pub coeffs: Option<String>,
    /// Frequency vector `k` for the sum of `e(<k, f^n x>)`.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Sweep every `k` with `0 < ||k|| < R` instead of a single vector.
    #[arg(long)]
    pub radius: Option<i64>,
    /// Sum lengths, comma-separated.
    #[arg(long, default_value = "1000")]
    pub n_grid: String,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct WeylArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Monomial coefficients `c_0,...,c_d`; replaces the skew-shift source.
    #[arg(long)]
    pub coeffs: Option<String>,
    /// Which coordinate polynomial of the orbit to use (default `b`).
    #[arg(long)]
    pub coord: Option<usize>,
    #[arg(long, default_value = "16,32,64,128,256,512,1024")]
    pub n_grid: String,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct VinogradovArgs {
    /// Number of power sums.
    #[arg(long)]
    pub b: u32,
    /// Half the number of variables.
    #[arg(long)]
    pub rho: u32,
    #[arg(long, default_value = "2,4,8,16")]
    pub n_grid: String,
    /// Exponent loss in the decoupling ratio.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Tabulate `R_2(h)` for `|h| <= h-max` instead of `J`.
    #[arg(long)]
    pub r2: bool,
    #[arg(long, default_value_t = 10)]
    pub h_max: u64,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct FejerArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Ball centre, comma-separated descriptors; zero when omitted.
    #[arg(long)]
    pub center: Option<String>,
    /// Ball radius, or cell size of the cover when `--set` is given.
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    /// Semi-algebraic target (JSON, `schema: 1`), covered by eps-balls.
    #[arg(long)]
    pub set: Option<PathBuf>,
    #[arg(long, default_value = "100,200,500,1000")]
    pub n_grid: String,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Weyl,
    Vino,
    Auto,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum TargetArg {
    /// Fixed ball of radius `eps`.
    Ball,
    /// Ball of radius `N^(-1/(tau b w))`.
    Coupled,
    /// Set read from `--set`.
    Set,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct SublinearArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1.001)]
    pub tau: f64,
    /// Allowed excess of the fitted slope over the exponent.
    #[arg(long, default_value_t = 0.1)]
    pub slack: f64,
    /// Constant in `log B <= c0 log N`.
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    #[arg(long, default_value = "1024,2048,4096,8192,16384,32768,65536")]
    pub n_grid: String,
    #[arg(long, value_enum, default_value_t = TargetArg::Coupled)]
    pub target: TargetArg,
    #[arg(long)]
    pub center: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long)]
    pub set: Option<PathBuf>,
    /// Monte-Carlo samples for the measure of a set without a closed form.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum KernelArg {
    /// Nearest-neighbour hopping.
    Nn,
    /// `c exp(-decay |n - n'|)`.
    Exp,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FitArg {
    Poly,
    Loglog,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct TransportArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Half-width: sites `-L..=L`.
    #[arg(long, default_value_t = 100)]
    pub l: usize,
    #[arg(long, default_value_t = 10.0)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = KernelArg::Nn)]
    pub kernel: KernelArg,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub decay: f64,
    /// Potential terms `k_1,...,k_b:cos:sin` separated by `;`; default `cos(2 pi x_b)`.
    #[arg(long)]
    pub potential: Option<String>,
    /// Initial amplitudes `site:amp` separated by `;`; default `delta_0`.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Moment order.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Explicit times; overrides the logarithmic grid.
    #[arg(long)]
    pub t_grid: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 21)]
    pub t_count: usize,
    /// Abel means instead of moments at fixed times.
    #[arg(long)]
    pub averaged: bool,
    #[arg(long, value_enum, default_value_t = FitArg::Poly)]
    pub fit: FitArg,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct DiophArgs {
    #[arg(long, default_value = GOLDEN)]
    pub omega: String,
    #[arg(long, default_value_t = 1.001)]
    pub tau: f64,
    /// Number of convergents.
    #[arg(long, default_value_t = 30)]
    pub depth: usize,
    /// Largest `k` in the empirical Diophantine constant.
    #[arg(long, default_value_t = 10_000)]
    pub search_depth: u64,
    /// `N` values for the denominator search.
    #[arg(long, default_value = "10,100,1000,10000")]
    pub n_grid: String,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct ReportArgs {
    /// Files written by other commands.
    pub inputs: Vec<PathBuf>,
}
