use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use lincg::cg::{BetaRule, GradientUpdate, SolverConfig, StepsizeRule, Tolerance};
use lincg::io::TraceFormat;
use lincg::linalg::Distribution;

#[derive(Debug, Parser)]
#[command(
    name = "lincg",
    version,
    about = "Linear conjugate gradient solver and identity verifier"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the problem and write its iteration trace.
    Solve(RunArgs),
    /// Solve, then run every identity check on the trace.
    Verify(RunArgs),
    /// Solve once and compare the two stepsize formulas at every iteration.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        /// Largest acceptable |α_exact − α_orth| / α_exact.
        #[arg(long, default_value_t = 1e-12)]
        compare_tol: f64,
    },
    /// Write a builtin problem as MatrixMarket plus a b-vector sidecar.
    Generate {
        #[command(flatten)]
        source: BuiltinArgs,
        /// Matrix destination; the b vector goes next to it with extension `.rhs`.
        #[arg(long)]
        output: PathBuf,
        /// Defaults to coordinate for sparse families and array for dense ones.
        #[arg(long, value_enum)]
        layout: Option<LayoutArg>,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Trace or report destination. Without it only the summary is printed.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Structured)]
    pub format: FormatArg,
    /// Omit the wall-clock timestamp so repeated runs are byte-identical.
    #[arg(long)]
    pub no_timestamp: bool,
    /// Include x_k, g_k and d_k in the trace.
    #[arg(long)]
    pub vectors: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["matrix", "builtin"])))]
pub struct SourceArgs {
    /// MatrixMarket file holding A.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// b vector file, one value per line. Only with --matrix.
    #[arg(long, requires = "matrix", conflicts_with_all = ["b", "known_solution"])]
    pub rhs: Option<PathBuf>,
    #[command(flatten)]
    pub builtin: BuiltinArgs,
}

#[derive(Debug, Args)]
pub struct BuiltinArgs {
    #[arg(long, value_enum)]
    pub builtin: Option<FamilyArg>,
    /// Problem order. Inferred from --eigs for `diagonal`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated eigenvalues (`diagonal`, or an explicit `random_spd` spectrum).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub eigs: Option<Vec<f64>>,
    /// Target condition number for `random_spd`.
    #[arg(long, default_value_t = 100.0)]
    pub cond: f64,
    #[arg(long, value_enum, default_value_t = DistributionArg::LogUniform)]
    pub distribution: DistributionArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = RhsArg::Ones)]
    pub b: RhsArg,
    /// Seed for `--b random`; defaults to --seed.
    #[arg(long)]
    pub b_seed: Option<u64>,
    /// Plant x* and set b = −Ax*.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "b")]
    pub known_solution: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value_t = StepsizeArg::Exact)]
    pub stepsize: StepsizeArg,
    #[arg(long, value_enum, default_value_t = BetaArg::Fr)]
    pub beta: BetaArg,
    #[arg(long, value_enum, default_value_t = GradUpdateArg::Recurrence)]
    pub grad_update: GradUpdateArg,
    /// Stop when ‖g‖ ≤ tol·‖g_0‖.
    #[arg(long, conflicts_with = "abs_tol")]
    pub tol: Option<f64>,
    /// Stop when ‖g‖ ≤ abs-tol.
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Iteration cap; defaults to n.
    #[arg(long)]
    pub max_iters: Option<usize>,
}

impl SolverArgs {
    pub fn config(&self) -> SolverConfig {
        let mut c = SolverConfig::traced()
            .with_stepsize(self.stepsize.into())
            .with_beta(self.beta.into())
            .with_gradient_update(self.grad_update.into());
        if let Some(t) = self.tol {
            c = c.with_tolerance(Tolerance::Relative(t));
        }
        if let Some(t) = self.abs_tol {
            c = c.with_tolerance(Tolerance::Absolute(t));
        }
        if let Some(m) = self.max_iters {
            c = c.with_max_iterations(m);
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Laplacian1d,
    Hilbert,
    Diagonal,
    #[value(name = "random_spd", alias = "random-spd")]
    RandomSpd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RhsArg {
    Ones,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistributionArg {
    LogUniform,
    Linear,
    Clustered,
}

impl From<DistributionArg> for Distribution {
    fn from(d: DistributionArg) -> Self {
        match d {
            DistributionArg::LogUniform => Distribution::LogUniform,
            DistributionArg::Linear => Distribution::Linear,
            DistributionArg::Clustered => Distribution::Clustered,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StepsizeArg {
    Exact,
    Orthogonal,
}

impl From<StepsizeArg> for StepsizeRule {
    fn from(s: StepsizeArg) -> Self {
        match s {
            StepsizeArg::Exact => StepsizeRule::ExactLineSearch,
            StepsizeArg::Orthogonal => StepsizeRule::GradientOrthogonality,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BetaArg {
    Fr,
    Hs,
    Prp,
    Dy,
}

impl From<BetaArg> for BetaRule {
    fn from(b: BetaArg) -> Self {
        match b {
            BetaArg::Fr => BetaRule::FletcherReeves,
            BetaArg::Hs => BetaRule::HestenesStiefel,
            BetaArg::Prp => BetaRule::PolakRibierePolyak,
            BetaArg::Dy => BetaRule::DaiYuan,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GradUpdateArg {
    Recurrence,
    Explicit,
}

impl From<GradUpdateArg> for GradientUpdate {
    fn from(g: GradUpdateArg) -> Self {
        match g {
            GradUpdateArg::Recurrence => GradientUpdate::Recurrence,
            GradUpdateArg::Explicit => GradientUpdate::Explicit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Structured,
    Tabular,
}

impl From<FormatArg> for TraceFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Structured => TraceFormat::Structured,
            FormatArg::Tabular => TraceFormat::Tabular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    Coordinate,
    Array,
}
