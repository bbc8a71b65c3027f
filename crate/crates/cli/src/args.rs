use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "waring",
    version,
    about = "Exact counts, exponential sums, arcs, singular series and the asymptotic cascade for Waring's problem",
    after_help = "Environment: WARING_THREADS caps the number of worker threads.\nExit status: 0 success, 1 invalid input, 2 computation failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Pretty)]
    pub format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact representation count r_k(N) by convolution.
    Count(CountArgs),
    /// Lattice points in the k-ball against its volume.
    Ball(BallArgs),
    /// Weyl sum f_X(xi).
    Weyl(WeylArgs),
    /// Normalized Gauss sum G(a/q).
    Gauss(GaussArgs),
    /// Oscillatory integral v(theta) with upper limit X.
    Vint(VintArgs),
    /// Exact moment of |f_X| of order k(k+1).
    Hua(HuaArgs),
    /// Measured ratio against one of the exponential-sum bound shapes.
    Bounds(BoundsArgs),
    /// Major-arc decomposition, optionally classifying one point.
    Arcs(ArcsArgs),
    /// Circle integral, sampled mean and arc integral of f_X^d e(-N xi).
    Circle(CircleArgs),
    /// Singular series as truncated sum and as Euler product.
    Singular(SingularArgs),
    /// Gamma main term, optionally with the singular-integral check.
    Mainterm(MaintermArgs),
    /// The approximations A1, A2, A3.
    Cascade(CascadeArgs),
    /// Full verification record for one instance.
    Verify(VerifyArgs),
    /// Verification records over a grid of targets.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct PowerArg {
    /// Power k (at least 2).
    #[arg(short = 'k', default_value_t = 2)]
    pub k: u32,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Power k (at least 2).
    #[arg(short = 'k', default_value_t = 2)]
    pub k: u32,
    /// Number of summands; implied by --coeffs when given.
    #[arg(short = 'd')]
    pub d: Option<u32>,
    /// Target N.
    #[arg(short = 'N')]
    pub n: u64,
    /// Comma-separated positive coefficients c_i (default: all 1).
    #[arg(long, value_delimiter = ',')]
    pub coeffs: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// Truncation point of the singular series.
    #[arg(long = "Q", default_value_t = 1000)]
    pub q: u64,
    /// Largest prime in the Euler product.
    #[arg(long = "P", default_value_t = 50)]
    pub p: u64,
    /// Stabilization tolerance of the local densities.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub inst: InstanceArgs,
    /// Also count by brute-force enumeration.
    #[arg(long, default_value_t = false)]
    pub brute: bool,
    /// Emit every row j = 1..d of the ladder.
    #[arg(long, default_value_t = false)]
    pub full_ladder: bool,
}

#[derive(Debug, Args)]
pub struct BallArgs {
    #[command(flatten)]
    pub power: PowerArg,
    /// Dimension d.
    #[arg(short = 'd')]
    pub d: u32,
    /// Radius parameter N.
    #[arg(short = 'N')]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct WeylArgs {
    #[command(flatten)]
    pub power: PowerArg,
    /// Length X of the sum.
    #[arg(short = 'X')]
    pub x: u64,
    /// Point xi on the circle.
    #[arg(long, allow_negative_numbers = true)]
    pub xi: f64,
}

#[derive(Debug, Args)]
pub struct GaussArgs {
    #[command(flatten)]
    pub power: PowerArg,
    /// Numerator a, coprime to q.
    #[arg(short = 'a')]
    pub a: u64,
    /// Modulus q.
    #[arg(short = 'q')]
    pub q: u64,
    /// Also evaluate by the direct sum over r.
    #[arg(long, default_value_t = false)]
    pub direct: bool,
}

#[derive(Debug, Args)]
pub struct VintArgs {
    #[command(flatten)]
    pub power: PowerArg,
    /// Upper limit X.
    #[arg(short = 'X')]
    pub x: u64,
    /// Frequency theta.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: f64,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct HuaArgs {
    #[command(flatten)]
    pub power: PowerArg,
    /// Length X of the Weyl sum.
    #[arg(short = 'X')]
    pub x: u64,
    /// Number of equispaced samples M [default: k(k+1)/2 X^k + 1].
    #[arg(long)]
    pub samples: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Bound to measure: weyl_minor, gauss_decay, hua_moment or v_decay.
    #[arg(long)]
    pub bound: String,
    #[command(flatten)]
    pub power: PowerArg,
    /// Length X (weyl_minor, v_decay).
    #[arg(short = 'X', default_value_t = 1000)]
    pub x: u64,
    /// Major-arc exponent (weyl_minor).
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    /// Number of minor-arc sample points (weyl_minor).
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Largest modulus (gauss_decay).
    #[arg(long, default_value_t = 200)]
    pub q_max: u64,
    /// Exponent slack epsilon (gauss_decay).
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Comma-separated lengths X (hua_moment).
    #[arg(long, value_delimiter = ',', default_values_t = vec![16u64, 32, 64, 128])]
    pub xs: Vec<u64>,
    /// Comma-separated frequencies theta (v_decay) [default: 10^j / X^k, j = -1..=3].
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub thetas: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ArcsArgs {
    #[command(flatten)]
    pub power: PowerArg,
    /// Length X.
    #[arg(short = 'X')]
    pub x: u64,
    /// Major-arc exponent alpha in (0, 1/3).
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    /// Classify this point and give its Dirichlet approximation.
    #[arg(long)]
    pub xi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CircleArgs {
    #[command(flatten)]
    pub inst: InstanceArgs,
    /// Length X [default: floor(N^(1/k))].
    #[arg(short = 'X')]
    pub x: Option<u64>,
    /// Sample count of the DFT mean [default: max(degree, N) + 1].
    #[arg(long)]
    pub samples: Option<u64>,
    /// Lower end of an arc to integrate over (needs --hi).
    #[arg(long, requires = "hi")]
    pub lo: Option<f64>,
    /// Upper end of an arc to integrate over (needs --lo).
    #[arg(long, requires = "lo")]
    pub hi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SingularArgs {
    #[command(flatten)]
    pub inst: InstanceArgs,
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Instead of the series, check multiplicativity on this many random
    /// coprime pairs (drawn with --seed).
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Largest entry of a random pair.
    #[arg(long, default_value_t = 100)]
    pub pair_max: u64,
}

#[derive(Debug, Args)]
pub struct MaintermArgs {
    #[command(flatten)]
    pub inst: InstanceArgs,
    /// Also integrate v^d e(-theta N) numerically and compare.
    #[arg(long, default_value_t = false)]
    pub integral: bool,
    /// Relative tolerance of the singular-integral check.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CascadeArgs {
    #[command(flatten)]
    pub power: PowerArg,
    /// Number of summands d.
    #[arg(short = 'd')]
    pub d: u32,
    /// Target N.
    #[arg(short = 'N')]
    pub n: u64,
    /// Major-arc exponent alpha in (0, 1/3).
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    /// Largest prime in the Euler product.
    #[arg(long = "P", default_value_t = 50)]
    pub p: u64,
    /// Tolerance for local densities and (relative) for the A1 quadrature.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub inst: InstanceArgs,
    /// Major-arc exponent alpha in (0, 1/3).
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    #[command(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Power k (at least 2).
    #[arg(short = 'k', default_value_t = 2)]
    pub k: u32,
    /// Number of summands; implied by --coeffs when given.
    #[arg(short = 'd')]
    pub d: Option<u32>,
    /// Comma-separated positive coefficients c_i (default: all 1).
    #[arg(long, value_delimiter = ',')]
    pub coeffs: Option<Vec<u64>>,
    /// First target of the grid.
    #[arg(long = "N-from")]
    pub n_from: u64,
    /// Last target of the grid (inclusive).
    #[arg(long = "N-to")]
    pub n_to: u64,
    /// Grid spacing.
    #[arg(long, default_value_t = 1)]
    pub step: u64,
    /// Major-arc exponent alpha in (0, 1/3).
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    #[command(flatten)]
    pub series: SeriesArgs,
}
