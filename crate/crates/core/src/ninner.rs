//! n-inner products on R^m: the Gram-determinant form built from an ambient
//! inner product, and the diagonal form given by positive coefficients on
//! basis n-tuples. Also the induced n-norm and the reduction to the
//! (n+1)-argument product `(a, b | x_1, ..., x_{n-1})`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{increasing_tuples, IndexTuple};
use crate::linalg::{cholesky, determinant, dot, norm, solve_upper, submatrix, Matrix};

/// Radicands in `[-NEGATIVE_RADICAND_FLOOR, 0)` are treated as round-off and clamped to zero.
pub const NEGATIVE_RADICAND_FLOOR: f64 = 1e-12;

/// An ordered tuple of `n` vectors of common dimension `m`, stored as the rows of a matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VectorTuple(Matrix);

impl VectorTuple {
    pub fn new<R: AsRef<[f64]>>(vectors: &[R]) -> Result<Self> {
        Ok(VectorTuple(Matrix::from_rows(vectors)?))
    }

    pub fn from_matrix(rows: Matrix) -> Self {
        VectorTuple(rows)
    }

    /// Number of vectors `n`.
    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    /// Common dimension `m`.
    pub fn dim(&self) -> usize {
        self.0.ncols()
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.0.row_iter()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn to_vecs(&self) -> Vec<Vec<f64>> {
        self.0.to_rows()
    }

    /// Copy with slot `i` replaced by `v`.
    pub fn with_vector(&self, i: usize, v: &[f64]) -> Result<Self> {
        if i >= self.order() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.order(),
            });
        }
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let mut rows = self.to_vecs();
        rows[i] = v.to_vec();
        VectorTuple::new(&rows)
    }

    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut rows = self.to_vecs();
        rows.swap(i, j);
        VectorTuple::new(&rows).expect("permuted rows stay valid")
    }

    /// Slot `k` of the result holds slot `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.order(), "permutation length");
        let rows: Vec<&[f64]> = perm.iter().map(|&p| self.vector(p)).collect();
        VectorTuple::new(&rows).expect("permuted rows stay valid")
    }

    /// Rows of `p * A`: each new vector is a combination of the old ones.
    pub fn transformed(&self, p: &Matrix) -> Result<Self> {
        Ok(VectorTuple(p.matmul(&self.0)?))
    }

    /// The `2n x m` matrix with `self` on top of `other`.
    pub fn stacked(&self, other: &VectorTuple) -> Result<Matrix> {
        let mut rows = self.to_vecs();
        rows.extend(other.to_vecs());
        Matrix::from_rows(&rows)
    }

    pub fn row_norm_product(&self) -> f64 {
        self.iter().map(norm).product()
    }
}

/// A real function of `2n` vector arguments `<a_1..a_n | b_1..b_n>`.
///
/// Implementors provide [`NInnerProduct::evaluate`]; callers go through
/// [`n_inner`], which validates shapes first.
pub trait NInnerProduct {
    /// Ambient dimension `m`.
    fn dim(&self) -> usize;

    /// Fixed order `n`, if the form only accepts one.
    fn order(&self) -> Option<usize> {
        None
    }

    /// Evaluates on tuples already checked to have matching order and dimension.
    fn evaluate(&self, a: &VectorTuple, b: &VectorTuple) -> Result<f64>;

    /// Bound `K` with `|<A|B>| <= K * prod |a_i| * prod |b_i|` for conforming forms.
    fn magnitude_bound(&self, order: usize) -> f64;

    /// `<e_{i_1},..,e_{i_n} | e_{j_1},..,e_{j_n}>` on standard basis vectors.
    fn basis_product(&self, i: &IndexTuple, j: &IndexTuple) -> Result<f64> {
        let m = self.dim();
        let basis = |idx: &IndexTuple| -> Result<VectorTuple> {
            let rows: Vec<Vec<f64>> = idx
                .as_slice()
                .iter()
                .map(|&k| {
                    let mut e = vec![0.0; m];
                    e[k] = 1.0;
                    e
                })
                .collect();
            VectorTuple::new(&rows)
        };
        n_inner(self, &basis(i)?, &basis(j)?)
    }

    /// Coordinates `w(A)` of the decomposable n-form in a basis orthonormal for
    /// the induced inner product, so that `<A|B> = w(A) . w(B)`. `None` when the
    /// form has no such representation available.
    fn wedge_coordinates(&self, _a: &VectorTuple) -> Option<Result<Vec<f64>>> {
        None
    }
}

fn check_shapes<F: NInnerProduct + ?Sized>(
    form: &F,
    a: &VectorTuple,
    b: &VectorTuple,
) -> Result<()> {
    for t in [a, b] {
        if t.dim() != form.dim() {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                found: t.dim(),
            });
        }
    }
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            expected: a.order(),
            found: b.order(),
        });
    }
    if let Some(n) = form.order() {
        if a.order() != n {
            return Err(Error::OrderMismatch {
                expected: n,
                found: a.order(),
            });
        }
    }
    Ok(())
}

/// `<a_1, ..., a_n | b_1, ..., b_n>`.
pub fn n_inner<F: NInnerProduct + ?Sized>(
    form: &F,
    a: &VectorTuple,
    b: &VectorTuple,
) -> Result<f64> {
    check_shapes(form, a, b)?;
    let v = form.evaluate(a, b)?;
    if !v.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(v)
}

/// `sqrt(<A|A>)`, clamping tiny negative round-off to zero.
pub fn n_norm<F: NInnerProduct + ?Sized>(form: &F, a: &VectorTuple) -> Result<f64> {
    sqrt_clamped(n_inner(form, a, a)?)
}

pub(crate) fn sqrt_clamped(radicand: f64) -> Result<f64> {
    if radicand >= 0.0 {
        Ok(radicand.sqrt())
    } else if radicand >= -NEGATIVE_RADICAND_FLOOR {
        Ok(0.0)
    } else {
        Err(Error::NegativeSquare(radicand))
    }
}

/// `(a, b | x_1, ..., x_{n-1}) = <a, x_1, ..., x_{n-1} | b, x_1, ..., x_{n-1}>`.
pub fn misiak_reduce<F: NInnerProduct + ?Sized, R: AsRef<[f64]>>(
    form: &F,
    a: &[f64],
    b: &[f64],
    shared: &[R],
) -> Result<f64> {
    let mut left: Vec<&[f64]> = vec![a];
    let mut right: Vec<&[f64]> = vec![b];
    for x in shared {
        left.push(x.as_ref());
        right.push(x.as_ref());
    }
    n_inner(form, &VectorTuple::new(&left)?, &VectorTuple::new(&right)?)
}

/// Determinants of every `n x n` column-submatrix of the tuple's row matrix, keyed by columns.
pub fn pluecker_coordinates(a: &VectorTuple) -> Result<BTreeMap<IndexTuple, f64>> {
    let (n, m) = (a.order(), a.dim());
    if n > m {
        return Err(Error::OrderExceedsDimension { order: n, dim: m });
    }
    let rows: Vec<usize> = (0..n).collect();
    increasing_tuples(m, n)
        .map(|idx| {
            let minor = determinant(&submatrix(a.as_matrix(), &rows, idx.as_slice())?)?;
            Ok((idx, minor))
        })
        .collect()
}

/// Normalization scale for residuals: `K * prod |a_i| * prod |b_i|`.
pub fn value_scale<F: NInnerProduct + ?Sized>(form: &F, a: &VectorTuple, b: &VectorTuple) -> f64 {
    form.magnitude_bound(a.order()) * a.row_norm_product() * b.row_norm_product()
}

/// Determinant of pairwise ambient inner products `<a_i | b_j> = a_i^T G b_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramNForm {
    ambient: Matrix,
    standard: bool,
}

impl GramNForm {
    /// The ambient inner product must be symmetric and positive definite.
    pub fn new(ambient: Matrix) -> Result<Self> {
        if !ambient.is_square() {
            return Err(Error::NonSquare {
                rows: ambient.nrows(),
                cols: ambient.ncols(),
            });
        }
        let m = ambient.nrows();
        let mut asym: f64 = 0.0;
        for i in 0..m {
            for j in 0..i {
                asym = asym.max((ambient[(i, j)] - ambient[(j, i)]).abs());
            }
        }
        if asym > 1e-12 * ambient.max_abs().max(1.0) {
            return Err(Error::NotSymmetric(asym));
        }
        for k in 1..=m {
            let lead: Vec<usize> = (0..k).collect();
            if determinant(&submatrix(&ambient, &lead, &lead)?)? <= 0.0 {
                return Err(Error::NotPositiveDefinite);
            }
        }
        let standard = ambient == Matrix::identity(m);
        Ok(GramNForm { ambient, standard })
    }

    /// The dot product on R^m.
    pub fn standard(m: usize) -> Self {
        GramNForm {
            ambient: Matrix::identity(m),
            standard: true,
        }
    }

    pub fn ambient(&self) -> &Matrix {
        &self.ambient
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    /// `x^T G y`.
    pub fn ambient_inner(&self, x: &[f64], y: &[f64]) -> f64 {
        if self.standard {
            return dot(x, y);
        }
        let m = self.ambient.nrows();
        (0..m).map(|i| x[i] * dot(self.ambient.row(i), y)).sum()
    }

    /// Rows expressed in coordinates where the ambient product is the dot
    /// product: `z = x L` with `G = L L^T`.
    pub fn to_orthonormal_coords(&self, t: &VectorTuple) -> Result<VectorTuple> {
        if self.standard {
            return Ok(t.clone());
        }
        let l = cholesky(&self.ambient)?;
        Ok(VectorTuple::from_matrix(t.as_matrix().matmul(&l)?))
    }

    /// Inverse of [`GramNForm::to_orthonormal_coords`]: solves `L^T x = z` per row.
    pub fn from_orthonormal_coords(&self, t: &VectorTuple) -> Result<VectorTuple> {
        if self.standard {
            return Ok(t.clone());
        }
        let lt = cholesky(&self.ambient)?.transpose();
        let rows: Vec<Vec<f64>> = t.iter().map(|z| solve_upper(&lt, z)).collect();
        VectorTuple::new(&rows)
    }
}

impl NInnerProduct for GramNForm {
    fn dim(&self) -> usize {
        self.ambient.nrows()
    }

    fn evaluate(&self, a: &VectorTuple, b: &VectorTuple) -> Result<f64> {
        let n = a.order();
        if n > self.dim() {
            return Ok(0.0);
        }
        let mut entries = Vec::with_capacity(n * n);
        for ai in a.iter() {
            for bj in b.iter() {
                entries.push(self.ambient_inner(ai, bj));
            }
        }
        determinant(&Matrix::new(n, n, entries)?)
    }

    fn magnitude_bound(&self, order: usize) -> f64 {
        if self.standard {
            1.0
        } else {
            self.ambient.inf_norm().powi(order as i32)
        }
    }

    fn basis_product(&self, i: &IndexTuple, j: &IndexTuple) -> Result<f64> {
        if i.len() > self.dim() {
            return Ok(0.0);
        }
        determinant(&submatrix(&self.ambient, i.as_slice(), j.as_slice())?)
    }

    fn wedge_coordinates(&self, a: &VectorTuple) -> Option<Result<Vec<f64>>> {
        Some(
            self.to_orthonormal_coords(a)
                .and_then(|z| pluecker_coordinates(&z))
                .map(|p| p.into_values().collect()),
        )
    }
}

/// `<e_I | e_J> = C_I * delta^I_J` on the standard basis, extended multilinearly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiagonalWire", into = "DiagonalWire")]
pub struct DiagonalNForm {
    dim: usize,
    order: usize,
    coefficients: BTreeMap<IndexTuple, f64>,
}

impl DiagonalNForm {
    /// Every `order`-subset of `0..dim` not listed in `overrides` gets coefficient 1.
    pub fn new(
        dim: usize,
        order: usize,
        overrides: impl IntoIterator<Item = (IndexTuple, f64)>,
    ) -> Result<Self> {
        if order == 0 || dim == 0 {
            return Err(Error::EmptyInput);
        }
        if order > dim {
            return Err(Error::OrderExceedsDimension { order, dim });
        }
        let mut coefficients: BTreeMap<IndexTuple, f64> =
            increasing_tuples(dim, order).map(|i| (i, 1.0)).collect();
        for (idx, c) in overrides {
            if idx.len() != order {
                return Err(Error::OrderMismatch {
                    expected: order,
                    found: idx.len(),
                });
            }
            if let Some(&bad) = idx.as_slice().iter().find(|&&k| k >= dim) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    len: dim,
                });
            }
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidCoefficient {
                    idx: idx.to_one_based(),
                    value: c,
                });
            }
            coefficients.insert(idx, c);
        }
        Ok(DiagonalNForm {
            dim,
            order,
            coefficients,
        })
    }

    pub fn uniform(dim: usize, order: usize, c: f64) -> Result<Self> {
        let all: Vec<(IndexTuple, f64)> = increasing_tuples(dim, order).map(|i| (i, c)).collect();
        Self::new(dim, order, all)
    }

    pub fn coefficient(&self, idx: &IndexTuple) -> f64 {
        self.coefficients.get(idx).copied().unwrap_or(0.0)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&IndexTuple, f64)> + '_ {
        self.coefficients.iter().map(|(k, &v)| (k, v))
    }

    pub fn is_uniform(&self) -> bool {
        let mut it = self.coefficients.values();
        let first = *it.next().expect("at least one coefficient");
        it.all(|&c| c == first)
    }

    /// For a form with every coefficient equal to `C`, returns the all-ones form
    /// and the coordinate scale `k = C^(1/2n)`, so that
    /// `<A|B>_C = <kA | kB>_1`.
    pub fn normalized(&self) -> Result<(DiagonalNForm, f64)> {
        if !self.is_uniform() {
            return Err(Error::NonUniformCoefficients);
        }
        let c = *self
            .coefficients
            .values()
            .next()
            .expect("at least one coefficient");
        let scale = c.powf(1.0 / (2.0 * self.order as f64));
        Ok((DiagonalNForm::uniform(self.dim, self.order, 1.0)?, scale))
    }
}

impl NInnerProduct for DiagonalNForm {
    fn dim(&self) -> usize {
        self.dim
    }

    fn order(&self) -> Option<usize> {
        Some(self.order)
    }

    fn evaluate(&self, a: &VectorTuple, b: &VectorTuple) -> Result<f64> {
        let pa = pluecker_coordinates(a)?;
        let pb = pluecker_coordinates(b)?;
        Ok(self
            .coefficients
            .iter()
            .map(|(idx, c)| c * pa[idx] * pb[idx])
            .sum())
    }

    fn magnitude_bound(&self, _order: usize) -> f64 {
        self.coefficients.values().copied().fold(0.0, f64::max)
    }

    fn basis_product(&self, i: &IndexTuple, j: &IndexTuple) -> Result<f64> {
        Ok(if i == j { self.coefficient(i) } else { 0.0 })
    }

    fn wedge_coordinates(&self, a: &VectorTuple) -> Option<Result<Vec<f64>>> {
        Some(pluecker_coordinates(a).map(|p| {
            p.iter()
                .map(|(idx, v)| self.coefficients[idx].sqrt() * v)
                .collect()
        }))
    }
}

#[derive(Serialize, Deserialize)]
struct DiagonalWire {
    m: usize,
    n: usize,
    #[serde(rename = "C")]
    coefficients: Vec<CoefficientEntry>,
}

#[derive(Serialize, Deserialize)]
struct CoefficientEntry {
    idx: Vec<usize>,
    value: f64,
}

impl TryFrom<DiagonalWire> for DiagonalNForm {
    type Error = Error;
    fn try_from(w: DiagonalWire) -> Result<Self> {
        let entries = w
            .coefficients
            .into_iter()
            .map(|e| Ok((IndexTuple::from_one_based(&e.idx, w.m)?, e.value)))
            .collect::<Result<Vec<_>>>()?;
        DiagonalNForm::new(w.m, w.n, entries)
    }
}

impl From<DiagonalNForm> for DiagonalWire {
    fn from(f: DiagonalNForm) -> Self {
        DiagonalWire {
            m: f.dim,
            n: f.order,
            coefficients: f
                .coefficients
                .iter()
                .map(|(k, &value)| CoefficientEntry {
                    idx: k.to_one_based(),
                    value,
                })
                .collect(),
        }
    }
}

/// Either concrete n-inner product.
#[derive(Clone, Debug, PartialEq)]
pub enum NInnerForm {
    Gram(GramNForm),
    Diagonal(DiagonalNForm),
}

impl From<GramNForm> for NInnerForm {
    fn from(g: GramNForm) -> Self {
        NInnerForm::Gram(g)
    }
}

impl From<DiagonalNForm> for NInnerForm {
    fn from(d: DiagonalNForm) -> Self {
        NInnerForm::Diagonal(d)
    }
}

impl NInnerProduct for NInnerForm {
    fn dim(&self) -> usize {
        match self {
            NInnerForm::Gram(g) => g.dim(),
            NInnerForm::Diagonal(d) => d.dim(),
        }
    }

    fn order(&self) -> Option<usize> {
        match self {
            NInnerForm::Gram(g) => g.order(),
            NInnerForm::Diagonal(d) => d.order(),
        }
    }

    fn evaluate(&self, a: &VectorTuple, b: &VectorTuple) -> Result<f64> {
        match self {
            NInnerForm::Gram(g) => g.evaluate(a, b),
            NInnerForm::Diagonal(d) => d.evaluate(a, b),
        }
    }

    fn magnitude_bound(&self, order: usize) -> f64 {
        match self {
            NInnerForm::Gram(g) => g.magnitude_bound(order),
            NInnerForm::Diagonal(d) => d.magnitude_bound(order),
        }
    }

    fn basis_product(&self, i: &IndexTuple, j: &IndexTuple) -> Result<f64> {
        match self {
            NInnerForm::Gram(g) => g.basis_product(i, j),
            NInnerForm::Diagonal(d) => d.basis_product(i, j),
        }
    }

    fn wedge_coordinates(&self, a: &VectorTuple) -> Option<Result<Vec<f64>>> {
        match self {
            NInnerForm::Gram(g) => g.wedge_coordinates(a),
            NInnerForm::Diagonal(d) => d.wedge_coordinates(a),
        }
    }
}
