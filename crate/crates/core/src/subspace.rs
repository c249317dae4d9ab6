//! Orthogonality of a vector to an n-dimensional subspace, the unique
//! decomposition `x = sum lambda_i b_i + c`, and the Cauchy-Schwarz inequality
//! `<A|B>^2 <= <A|A><B|B>` with classification of its equality cases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, Matrix, DEFAULT_RANK_TOL};
use crate::ninner::{n_inner, value_scale, NInnerProduct, VectorTuple};

/// Orthogonality tolerance asserted on every decomposition residual.
pub const DECOMPOSITION_TOL: f64 = 1e-8;

/// Relative width of the band in which `lhs` and `rhs` count as equal.
pub const EQUALITY_BAND: f64 = 1e-7;

/// An n-dimensional subspace of R^m given by a basis of `n` independent rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorTuple", into = "VectorTuple")]
pub struct Subspace {
    basis: VectorTuple,
}

impl Subspace {
    pub fn new(basis: VectorTuple) -> Result<Self> {
        Self::with_rank_tol(basis, DEFAULT_RANK_TOL)
    }

    pub fn with_rank_tol(basis: VectorTuple, rank_tol: f64) -> Result<Self> {
        let (n, m) = (basis.order(), basis.dim());
        if n > m {
            return Err(Error::OrderExceedsDimension { order: n, dim: m });
        }
        let rank = numerical_rank(basis.as_matrix(), rank_tol);
        if rank != n {
            return Err(Error::RankDeficient { rank, expected: n });
        }
        Ok(Subspace { basis })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(VectorTuple::new(rows)?)
    }

    pub fn basis(&self) -> &VectorTuple {
        &self.basis
    }

    /// Subspace dimension `n`.
    pub fn order(&self) -> usize {
        self.basis.order()
    }

    /// Ambient dimension `m`.
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Same subspace with basis rows `P * B`.
    pub fn rebased(&self, p: &Matrix) -> Result<Self> {
        Self::new(self.basis.transformed(p)?)
    }
}

impl TryFrom<VectorTuple> for Subspace {
    type Error = Error;
    fn try_from(t: VectorTuple) -> Result<Self> {
        Subspace::new(t)
    }
}

impl From<Subspace> for VectorTuple {
    fn from(s: Subspace) -> Self {
        s.basis
    }
}

fn check_vector(s: &Subspace, v: &[f64]) -> Result<()> {
    if v.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: v.len(),
        });
    }
    Ok(())
}

/// Normalized residuals `|<a, b_1..^b_i..b_n | B>| / scale` for each `i`.
pub fn orthogonality_residuals<F: NInnerProduct + ?Sized>(
    form: &F,
    a: &[f64],
    s: &Subspace,
) -> Result<Vec<f64>> {
    check_vector(s, a)?;
    let b = s.basis();
    (0..s.order())
        .map(|i| {
            let mut rows: Vec<&[f64]> = vec![a];
            rows.extend((0..s.order()).filter(|&j| j != i).map(|j| b.vector(j)));
            let left = VectorTuple::new(&rows)?;
            let value = n_inner(form, &left, b)?;
            let scale = value_scale(form, &left, b);
            Ok(if scale > 0.0 {
                value.abs() / scale
            } else {
                value.abs()
            })
        })
        .collect()
}

/// True iff every replacement product `<a, b_1..^b_i..b_n | B>` vanishes within `tol * scale`.
pub fn is_orthogonal_to_subspace<F: NInnerProduct + ?Sized>(
    form: &F,
    a: &[f64],
    s: &Subspace,
    tol: f64,
) -> Result<bool> {
    Ok(orthogonality_residuals(form, a, s)?
        .iter()
        .all(|&r| r <= tol))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub lambdas: Vec<f64>,
    /// The component `c` orthogonal to the subspace.
    pub residual: Vec<f64>,
    pub original: Vec<f64>,
}

impl Decomposition {
    /// `sum lambda_i b_i = x - c`.
    pub fn projection(&self) -> Vec<f64> {
        self.original
            .iter()
            .zip(&self.residual)
            .map(|(x, c)| x - c)
            .collect()
    }
}

/// `lambda_i = <b_1..x (slot i)..b_n | B> / <B|B>`, `c = x - sum lambda_i b_i`.
pub fn decompose<F: NInnerProduct + ?Sized>(
    form: &F,
    x: &[f64],
    s: &Subspace,
) -> Result<Decomposition> {
    check_vector(s, x)?;
    let b = s.basis();
    let denom = n_inner(form, b, b)?;
    if denom <= 1e-12 * value_scale(form, b, b) {
        return Err(Error::DegenerateSubspace(denom));
    }
    let lambdas = (0..s.order())
        .map(|i| Ok(n_inner(form, &b.with_vector(i, x)?, b)? / denom))
        .collect::<Result<Vec<f64>>>()?;
    let mut residual = x.to_vec();
    for (lambda, bi) in lambdas.iter().zip(b.iter()) {
        for (r, v) in residual.iter_mut().zip(bi) {
            *r -= lambda * v;
        }
    }
    let worst = orthogonality_residuals(form, &residual, s)?
        .into_iter()
        .fold(0.0, f64::max);
    if worst > DECOMPOSITION_TOL {
        return Err(Error::ResidualNotOrthogonal(worst));
    }
    Ok(Decomposition {
        lambdas,
        residual,
        original: x.to_vec(),
    })
}

/// Which equality condition holds for the pair, judged by numerical rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EqualityCase {
    #[serde(rename = "A-dependent")]
    ADependent,
    #[serde(rename = "B-dependent")]
    BDependent,
    #[serde(rename = "same-subspace")]
    SameSubspace,
    #[serde(rename = "strict")]
    Strict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchySchwarzVerdict {
    /// `<A|B>^2`.
    pub lhs: f64,
    /// `<A|A> <B|B>`.
    pub rhs: f64,
    /// `lhs - rhs`; never meaningfully positive for a conforming form.
    pub gap: f64,
    /// `|lhs - rhs| <= EQUALITY_BAND * max(1, rhs)`.
    pub equality: bool,
    pub case: EqualityCase,
}

impl CauchySchwarzVerdict {
    /// Whether the numerical equality band agrees with the rank classification.
    pub fn is_consistent(&self) -> bool {
        self.equality == (self.case != EqualityCase::Strict)
    }
}

/// Evaluates both sides of the inequality and classifies equality.
///
/// Fails with [`Error::InequalityViolated`] if `lhs > rhs + tol * scale`.
pub fn cauchy_schwarz<F: NInnerProduct + ?Sized>(
    form: &F,
    a: &VectorTuple,
    b: &VectorTuple,
    tol: f64,
) -> Result<CauchySchwarzVerdict> {
    let ab = n_inner(form, a, b)?;
    let aa = n_inner(form, a, a)?;
    let bb = n_inner(form, b, b)?;
    let lhs = ab * ab;
    let rhs = aa * bb;
    let scale = value_scale(form, a, a) * value_scale(form, b, b);
    if lhs > rhs + tol * scale {
        return Err(Error::InequalityViolated { lhs, rhs });
    }
    let n = a.order();
    let case = if numerical_rank(a.as_matrix(), DEFAULT_RANK_TOL) < n {
        EqualityCase::ADependent
    } else if numerical_rank(b.as_matrix(), DEFAULT_RANK_TOL) < n {
        EqualityCase::BDependent
    } else if numerical_rank(&a.stacked(b)?, DEFAULT_RANK_TOL) == n {
        EqualityCase::SameSubspace
    } else {
        EqualityCase::Strict
    };
    Ok(CauchySchwarzVerdict {
        lhs,
        rhs,
        gap: lhs - rhs,
        equality: (lhs - rhs).abs() <= EQUALITY_BAND * rhs.max(1.0),
        case,
    })
}
