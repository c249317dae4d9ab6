//! Command-line front end: loads CSV/JSON inputs, runs one library operation
//! and renders its report.

pub mod args;
pub mod error;
pub mod input;
pub mod report;

use std::io::Write;

use grassmetric_core::axioms::{check_all, overall_verdict, SampleConfig, Verdict};
use grassmetric_core::forms::increasing_tuples;
use grassmetric_core::{
    complementary_minor, decompose, determinant, distance_matrix, dual_angle_check,
    laplace_identity_check, n_inner, n_norm, orthogonal_complement, subspace_angle, Matrix,
    NInnerProduct, Subspace, SubspacePair, VectorTuple,
};

pub use args::{Cli, Command, Format};
pub use error::{CliError, Result};
pub use input::{build_form, parse_matrix_csv, CliForm, FormSpec};

use report::*;

/// A rendered report and the exit status it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub status: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, status: 0 }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn read_pair(p: &args::PairArgs) -> Result<(VectorTuple, VectorTuple)> {
    let a = input::read_tuple(&p.left)?;
    let b = input::read_tuple(&p.right)?;
    if a.dim() != b.dim() {
        return Err(grassmetric_core::Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        }
        .into());
    }
    Ok((a, b))
}

fn subspace_pair(p: &args::PairArgs) -> Result<SubspacePair> {
    let (a, b) = read_pair(p)?;
    Ok(SubspacePair::new(Subspace::new(a)?, Subspace::new(b)?)?)
}

fn distances_csv(d: &Matrix) -> String {
    let mut s = String::new();
    for row in d.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Runs the parsed command line without touching standard output.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    match &cli.command {
        Command::Inner(p) => {
            let (a, b) = read_pair(p)?;
            let form = build_form(&cli.form, Some(a.dim()), Some(a.order()))?;
            Ok(Outcome::ok(to_json(&ValueReport {
                value: n_inner(&form, &a, &b)?,
            })))
        }
        Command::Norm { input } => {
            let a = input::read_tuple(input)?;
            let form = build_form(&cli.form, Some(a.dim()), Some(a.order()))?;
            Ok(Outcome::ok(to_json(&ValueReport {
                value: n_norm(&form, &a)?,
            })))
        }
        Command::Decompose { vector, basis } => {
            let s = Subspace::new(input::read_tuple(basis)?)?;
            let xs = parse_matrix_csv(vector)?;
            let form = build_form(&cli.form, Some(s.dim()), Some(s.order()))?;
            let decompositions = xs
                .row_iter()
                .map(|x| {
                    let d = decompose(&form, x, &s)?;
                    Ok(DecomposeEntry {
                        projection: d.projection(),
                        lambdas: d.lambdas,
                        residual: d.residual,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Outcome::ok(to_json(&DecomposeReport { decompositions })))
        }
        Command::Angle(p) => {
            let pair = subspace_pair(p)?;
            let form = build_form(&cli.form, Some(pair.left.dim()), Some(pair.left.order()))?;
            Ok(Outcome::ok(to_json(&subspace_angle(&form, &pair)?)))
        }
        Command::Distmat { inputs, format } => {
            let subspaces = inputs
                .iter()
                .map(|p| Ok(Subspace::new(input::read_tuple(p)?)?))
                .collect::<Result<Vec<_>>>()?;
            let first = &subspaces[0];
            let form = build_form(&cli.form, Some(first.dim()), Some(first.order()))?;
            let d = distance_matrix(&form, &subspaces)?;
            Ok(Outcome::ok(match format {
                Format::Json => to_json(&DistanceReport {
                    distances: d.to_rows(),
                }),
                Format::Csv => distances_csv(&d),
            }))
        }
        Command::Complement { basis } => {
            let s = Subspace::new(input::read_tuple(basis)?)?;
            let form = build_form(&cli.form, Some(s.dim()), Some(s.order()))?;
            let c = orthogonal_complement(form.as_gram()?, &s)?;
            Ok(Outcome::ok(to_json(&BasisReport {
                basis: c.basis().to_vecs(),
            })))
        }
        Command::DualCheck(p) => {
            let pair = subspace_pair(p)?;
            let form = build_form(&cli.form, Some(pair.left.dim()), Some(pair.left.order()))?;
            let check = dual_angle_check(form.as_gram()?, &pair)?;
            let holds = check.gap <= tol;
            Ok(Outcome {
                output: to_json(&DualReport { check, holds }),
                status: if holds { 0 } else { 1 },
            })
        }
        Command::CheckAxioms(a) => {
            let form = build_form(&cli.form, a.m, a.n)?;
            let m = a.m.unwrap_or(form.dim());
            let n =
                a.n.or(form.order())
                    .ok_or_else(|| CliError::Usage("check-axioms needs the order (--n)".into()))?;
            let config = SampleConfig {
                seed: a.seed,
                trials: a.trials,
                m,
                n,
                tol,
                rank_tol: 1e-10,
            };
            config.validate(&form)?;
            let reports = check_all(&form, &config);
            let verdict = overall_verdict(&reports);
            Ok(Outcome {
                output: to_json(&AxiomsReport {
                    form: cli.form.to_string(),
                    config,
                    verdict,
                    reports,
                }),
                status: if verdict == Verdict::Fail { 1 } else { 0 },
            })
        }
        Command::MinorCheck { matrix, n } => {
            let a = parse_matrix_csv(matrix)?;
            let m = a.nrows();
            let orders: Vec<usize> = match n {
                Some(n) => vec![*n],
                None => (1..m).collect(),
            };
            let mut minors = Vec::new();
            let mut laplace = Vec::new();
            for &k in &orders {
                for idx in increasing_tuples(m, k) {
                    let c = complementary_minor(&a, &idx)?;
                    minors.push(MinorEntry {
                        n: k,
                        idx: idx.to_one_based(),
                        minor: c.minor,
                        cominor: c.cominor,
                        sign: c.sign,
                        residual: c.residual,
                    });
                }
                laplace.push(LaplaceEntry {
                    n: k,
                    residual: laplace_identity_check(&a, k)?,
                });
            }
            let max_residual = minors.iter().map(|e| e.residual).fold(0.0, f64::max);
            Ok(Outcome::ok(to_json(&MinorReport {
                m,
                determinant: determinant(&a)?,
                orthogonality_defect: a.orthonormality_defect(),
                max_residual,
                minors,
                laplace,
            })))
        }
    }
}

/// Parses `args`, runs, writes the report and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(outcome) => match emit(&cli, &outcome.output) {
            Ok(()) => outcome.status,
            Err(e) => {
                eprintln!("grassmetric: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            eprintln!("grassmetric: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
