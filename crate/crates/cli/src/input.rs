//! Reading matrices from CSV files and building forms from `--form` specs.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use grassmetric_core::axioms::BiasedForm;
use grassmetric_core::forms::IndexTuple;
use grassmetric_core::{DiagonalNForm, GramNForm, Matrix, NInnerForm, NInnerProduct, VectorTuple};

use crate::error::{CliError, Result};

/// Rows are vectors. Blank lines and lines starting with `#` are skipped.
pub fn parse_matrix_csv(path: &Path) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| match source.kind() {
            csv::ErrorKind::Io(_) => CliError::Io {
                path: path.to_path_buf(),
                source: std::io::Error::other(source.to_string()),
            },
            _ => CliError::Csv {
                path: path.to_path_buf(),
                source,
            },
        })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|source| CliError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::NonNumericToken {
                        path: path.to_path_buf(),
                        line,
                        token: tok.to_string(),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::RaggedRows {
                    path: path.to_path_buf(),
                    line,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::EmptyFile(path.to_path_buf()));
    }
    Ok(Matrix::from_rows(&rows)?)
}

pub fn read_tuple(path: &Path) -> Result<VectorTuple> {
    Ok(VectorTuple::from_matrix(parse_matrix_csv(path)?))
}

/// The value of `--form`.
#[derive(Clone, Debug, PartialEq)]
pub enum FormSpec {
    StandardGram,
    Gram(PathBuf),
    Diagonal(PathBuf),
    /// Standard Gram form plus a constant; fails the axioms on purpose.
    Biased(f64),
}

impl FromStr for FormSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || {
            format!("expected gram:standard, gram:<matrix.csv> or diagonal:<coefficients.json>, got {s:?}")
        };
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match (kind, arg) {
            ("gram", "standard") => Ok(FormSpec::StandardGram),
            ("gram", p) if !p.is_empty() => Ok(FormSpec::Gram(PathBuf::from(p))),
            ("diagonal", p) if !p.is_empty() => Ok(FormSpec::Diagonal(PathBuf::from(p))),
            ("gram-biased", b) => b.parse().map(FormSpec::Biased).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormSpec::StandardGram => write!(f, "gram:standard"),
            FormSpec::Gram(p) => write!(f, "gram:{}", p.display()),
            FormSpec::Diagonal(p) => write!(f, "diagonal:{}", p.display()),
            FormSpec::Biased(b) => write!(f, "gram-biased:{b}"),
        }
    }
}

/// A form loaded from a [`FormSpec`].
#[derive(Clone, Debug)]
pub enum CliForm {
    Core(NInnerForm),
    Biased(BiasedForm<GramNForm>),
}

impl CliForm {
    pub fn as_gram(&self) -> Result<&GramNForm> {
        match self {
            CliForm::Core(NInnerForm::Gram(g)) => Ok(g),
            _ => Err(CliError::Usage("this command needs a gram form".into())),
        }
    }
}

impl NInnerProduct for CliForm {
    fn dim(&self) -> usize {
        match self {
            CliForm::Core(f) => f.dim(),
            CliForm::Biased(f) => f.dim(),
        }
    }

    fn order(&self) -> Option<usize> {
        match self {
            CliForm::Core(f) => f.order(),
            CliForm::Biased(f) => f.order(),
        }
    }

    fn evaluate(&self, a: &VectorTuple, b: &VectorTuple) -> grassmetric_core::Result<f64> {
        match self {
            CliForm::Core(f) => f.evaluate(a, b),
            CliForm::Biased(f) => f.evaluate(a, b),
        }
    }

    fn magnitude_bound(&self, order: usize) -> f64 {
        match self {
            CliForm::Core(f) => f.magnitude_bound(order),
            CliForm::Biased(f) => f.magnitude_bound(order),
        }
    }

    fn basis_product(&self, i: &IndexTuple, j: &IndexTuple) -> grassmetric_core::Result<f64> {
        match self {
            CliForm::Core(f) => f.basis_product(i, j),
            CliForm::Biased(f) => f.basis_product(i, j),
        }
    }

    fn wedge_coordinates(&self, a: &VectorTuple) -> Option<grassmetric_core::Result<Vec<f64>>> {
        match self {
            CliForm::Core(f) => f.wedge_coordinates(a),
            CliForm::Biased(_) => None,
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn check_dim(expected: Option<usize>, found: usize) -> Result<()> {
    match expected {
        Some(m) if m != found => Err(grassmetric_core::Error::DimensionMismatch {
            expected: found,
            found: m,
        }
        .into()),
        _ => Ok(()),
    }
}

/// Loads the form. `dim` and `order` come from the inputs when known; forms
/// that fix their own shape are checked against them.
pub fn build_form(spec: &FormSpec, dim: Option<usize>, order: Option<usize>) -> Result<CliForm> {
    let need_dim =
        || dim.ok_or_else(|| CliError::Usage(format!("{spec} needs the ambient dimension (--m)")));
    let form = match spec {
        FormSpec::StandardGram => CliForm::Core(GramNForm::standard(need_dim()?).into()),
        FormSpec::Gram(path) => {
            let g = GramNForm::new(parse_matrix_csv(path)?)?;
            check_dim(dim, g.dim())?;
            CliForm::Core(g.into())
        }
        FormSpec::Diagonal(path) => {
            let d: DiagonalNForm = read_json(path)?;
            check_dim(dim, d.dim())?;
            if let (Some(n), Some(k)) = (order, d.order()) {
                if n != k {
                    return Err(grassmetric_core::Error::OrderMismatch {
                        expected: k,
                        found: n,
                    }
                    .into());
                }
            }
            CliForm::Core(d.into())
        }
        FormSpec::Biased(bias) => CliForm::Biased(BiasedForm {
            inner: GramNForm::standard(need_dim()?),
            bias: *bias,
        }),
    };
    Ok(form)
}
