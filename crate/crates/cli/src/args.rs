use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::input::FormSpec;

/// Generalized n-inner products, subspace angles and axiom checks on R^m.
///
/// Matrices are CSV files with one vector per row; `#` starts a comment line.
#[derive(Debug, Parser)]
#[command(name = "grassmetric", version)]
pub struct Cli {
    /// `gram:standard`, `gram:<ambient.csv>` or `diagonal:<coefficients.json>`.
    #[arg(long, global = true, default_value = "gram:standard")]
    pub form: FormSpec,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Tolerance for checks that decide pass or fail.
    #[arg(long, global = true, env = "GRASSMETRIC_TOL", default_value_t = 1e-9)]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// `<A|B>` for two tuples of n vectors.
    Inner(PairArgs),
    /// `sqrt(<A|A>)`.
    Norm {
        #[arg(long)]
        input: PathBuf,
    },
    /// Splits each row of `--vector` into a part in `span(basis)` and an orthogonal part.
    Decompose {
        #[arg(long)]
        vector: PathBuf,
        #[arg(long)]
        basis: PathBuf,
    },
    /// Angle between the subspaces spanned by `--left` and `--right`.
    Angle(PairArgs),
    /// Pairwise distances between the subspaces in `--inputs`, one basis per file.
    Distmat {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Orthonormal basis of the orthogonal complement (gram forms only).
    Complement {
        #[arg(long)]
        basis: PathBuf,
    },
    /// Angle between two subspaces against the angle between their complements.
    DualCheck(PairArgs),
    /// Randomized checks of the n-inner product axioms for `--form`.
    CheckAxioms(AxiomArgs),
    /// Complementary-minor identity and Laplace expansion for an orthogonal matrix.
    MinorCheck {
        #[arg(long)]
        matrix: PathBuf,
        /// Only minors of this order; all orders `1..m` when omitted.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub left: PathBuf,
    #[arg(long)]
    pub right: PathBuf,
}

#[derive(Debug, Args)]
pub struct AxiomArgs {
    /// Ambient dimension; taken from the form when it fixes one.
    #[arg(long)]
    pub m: Option<usize>,
    /// Order; taken from the form when it fixes one.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}
