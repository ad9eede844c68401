use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use lratio_core::reproduce::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "lratio", version, about = "Bounded ratios of Lorentzian matrices and the cut cone")]
pub struct Cli {
    /// Worker threads for data-parallel sections (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lorentzian signature checks.
    #[command(subcommand)]
    Lorentzian(LorentzianCmd),
    /// Facets of the cut cone.
    #[command(subcommand)]
    Cutcone(CutconeCmd),
    /// Boundedness, evaluation and decomposition of ratios.
    #[command(subcommand)]
    Ratio(RatioCmd),
    /// Log-domain metrics, hyperbolicity and trees.
    #[command(subcommand)]
    Metric(MetricCmd),
    /// Optimal bounding constants.
    #[command(subcommand)]
    Constant(ConstantCmd),
    /// Computational checks of open statements.
    #[command(subcommand)]
    Conjecture(ConjectureCmd),
    /// Run the acceptance suite.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Subcommand)]
pub enum LorentzianCmd {
    Check {
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CutconeCmd {
    Facets {
        #[arg(long)]
        n: usize,
        /// Also classify the facets into S_n orbits.
        #[arg(long)]
        orbits: bool,
        /// Write the facet list here instead of embedding it in the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RatioCmd {
    /// Boundedness with a violating or tight-cut certificate.
    Check {
        #[arg(long)]
        ratio: PathBuf,
    },
    /// `prod p_ij^alpha_ij` on a matrix.
    Eval {
        #[arg(long)]
        ratio: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Nonnegative integer combination of facets (or of a given facet list).
    Decompose {
        #[arg(long)]
        ratio: PathBuf,
        /// Facet list JSON; defaults to the facets of the ratio's cut cone.
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Rescale to off-diagonal sum -1.
    Normalize {
        #[arg(long)]
        ratio: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct MetricInput {
    /// Metric JSON.
    #[arg(long)]
    pub metric: Option<PathBuf>,
    /// Matrix JSON with positive entries; the metric is `log p_ij / sqrt(p_ii p_jj)`.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Tree JSON; the metric is its path-length metric.
    #[arg(long)]
    pub tree: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum MetricCmd {
    /// Membership of a matrix (or of `exp d`) in Delta(T_p).
    Check {
        /// `p >= 0` as an integer, `a/b`, or decimal.
        #[arg(long)]
        p: String,
        #[command(flatten)]
        input: MetricInput,
    },
    /// Gromov hyperbolicity constant.
    Delta {
        #[command(flatten)]
        input: MetricInput,
    },
    /// Tree metric below `d` from Gromov products.
    Treeapprox {
        /// 1-based basepoint.
        #[arg(long, default_value_t = 1)]
        basepoint: usize,
        #[command(flatten)]
        input: MetricInput,
    },
    /// Cut decomposition of a tree metric.
    Decompose {
        /// 1-based leaf whose side labels every cut.
        #[arg(long, default_value_t = 1)]
        root: usize,
        #[command(flatten)]
        input: MetricInput,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstantCmd {
    /// Optimal constant of a barycentric ratio at n = 3.
    N3 {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Cross-check against a grid scan with Newton refinement.
        #[arg(long)]
        verify: bool,
    },
    /// Optimal constant on Delta_3(T_p).
    Tp {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
    },
    /// Empirical supremum over rank-2 samples and witness families.
    Estimate {
        #[arg(long)]
        ratio: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConjectureCmd {
    /// Subtraction-free expansion under the rank-2 substitution.
    Subfree {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        which: FacetChoice,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct FacetChoice {
    /// 1-based index into the sorted facet list.
    #[arg(long)]
    pub facet_index: Option<usize>,
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("which").required(true).args(["all", "criterion"])))]
pub struct ReproduceArgs {
    /// Every criterion.
    #[arg(long)]
    pub all: bool,
    /// A single criterion (repeatable).
    #[arg(long)]
    pub criterion: Vec<u8>,
    /// Reduced sample counts for a fast smoke run.
    #[arg(long)]
    pub quick: bool,
}
