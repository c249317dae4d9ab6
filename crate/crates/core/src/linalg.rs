//! Dense real linear algebra: row-major matrices, LU determinants, rank
//! detection, Gram-Schmidt orthonormalization and nullspaces.
//!
//! Row-major throughout. When a matrix holds a tuple of vectors, the `i`-th
//! row is the `i`-th vector.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ratio, relative to the largest pivot, below which a pivot counts as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Relative tolerance used for scalar equality throughout the crate.
pub const REL_TOL: f64 = 1e-9;
/// Absolute floor paired with [`REL_TOL`].
pub const ABS_FLOOR: f64 = 1e-12;

/// `|a - b| <= rel * max(|a|, |b|) + abs_floor`.
pub fn approx_eq(a: f64, b: f64, rel: f64, abs_floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + abs_floor
}

/// A dense, row-major matrix of finite `f64` values with at least one row and column.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyMatrix)?.as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * first);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != first {
                return Err(Error::RaggedRows {
                    row: i,
                    expected: first,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Matrix::new(rows.len(), first, data)
    }

    pub fn identity(k: usize) -> Self {
        Self::from_fn(k, k, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| 0.0)
    }

    pub(crate) fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        debug_assert!(data.iter().all(|x| x.is_finite()));
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.row_iter().map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", rhs.rows),
            });
        }
        let out = Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        });
        if out.data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest absolute row sum (the induced infinity norm).
    pub fn inf_norm(&self) -> f64 {
        self.row_iter()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation of `self * self^T` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.rows {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(self.row(i), self.row(j)) - target).abs());
            }
        }
        worst
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_iter()).finish()
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Determinant by LU factorization with partial pivoting.
pub fn determinant(m: &Matrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let k = m.rows;
    let mut lu = m.clone();
    let mut det = 1.0;
    for col in 0..k {
        let pivot_row = (col..k)
            .max_by(|&a, &b| lu[(a, col)].abs().total_cmp(&lu[(b, col)].abs()))
            .expect("non-empty pivot range");
        let pivot = lu[(pivot_row, col)];
        if pivot == 0.0 {
            return Ok(0.0);
        }
        if pivot_row != col {
            lu.swap_rows(pivot_row, col);
            det = -det;
        }
        det *= pivot;
        for r in col + 1..k {
            let factor = lu[(r, col)] / pivot;
            if factor != 0.0 {
                for c in col + 1..k {
                    lu[(r, c)] -= factor * lu[(col, c)];
                }
            }
        }
    }
    if !det.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(det)
}

/// Determinant as the signed sum over all permutations. Exponential; `k <= 6` only.
pub fn determinant_oracle(m: &Matrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let k = m.rows;
    if k > 6 {
        return Err(Error::TooLarge(k));
    }
    // Heap's algorithm: every step is a single transposition, so the sign alternates.
    let mut perm: Vec<usize> = (0..k).collect();
    let mut counters = vec![0usize; k];
    let term = |p: &[usize]| {
        p.iter()
            .enumerate()
            .map(|(i, &j)| m[(i, j)])
            .product::<f64>()
    };
    let mut sign = 1.0;
    let mut total = term(&perm);
    let mut i = 1;
    while i < k {
        if counters[i] < i {
            let j = if i % 2 == 0 { 0 } else { counters[i] };
            perm.swap(j, i);
            sign = -sign;
            total += sign * term(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}

/// Number of pivots exceeding `tol_ratio` times the largest pivot, from row
/// echelon form with partial pivoting. Rows are scaled to unit length first so
/// the count does not depend on row scaling.
pub fn numerical_rank(m: &Matrix, tol_ratio: f64) -> usize {
    let mut a = m.clone();
    for i in 0..a.rows {
        let n = norm(a.row(i));
        if n > 0.0 {
            for j in 0..a.cols {
                a[(i, j)] /= n;
            }
        }
    }
    let threshold = tol_ratio * a.max_abs();
    if threshold == 0.0 && a.max_abs() == 0.0 {
        return 0;
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let p = (row..a.rows)
            .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()))
            .expect("non-empty pivot range");
        let pivot = a[(p, col)];
        if pivot.abs() <= threshold {
            continue;
        }
        a.swap_rows(p, row);
        for r in row + 1..a.rows {
            let factor = a[(r, col)] / pivot;
            for c in col..a.cols {
                a[(r, c)] -= factor * a[(row, c)];
            }
        }
        pivots.push(pivot.abs());
        row += 1;
    }
    let largest = pivots.iter().copied().fold(0.0, f64::max);
    pivots.iter().filter(|&&p| p > tol_ratio * largest).count()
}

/// Modified Gram-Schmidt on the rows, with a second projection pass whenever
/// a projection coefficient exceeds half the row's original length.
pub fn orthonormalize(rows: &Matrix) -> Result<Matrix> {
    orthonormalize_with_tol(rows, DEFAULT_RANK_TOL)
}

pub fn orthonormalize_with_tol(rows: &Matrix, tol_ratio: f64) -> Result<Matrix> {
    let rank = numerical_rank(rows, tol_ratio);
    if rank < rows.rows {
        return Err(Error::RankDeficient {
            rank,
            expected: rows.rows,
        });
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(rows.rows);
    for r in rows.row_iter() {
        let v = project_out(r, &basis);
        let len = norm(&v);
        if len <= tol_ratio * norm(r) || len == 0.0 {
            return Err(Error::RankDeficient {
                rank: basis.len(),
                expected: rows.rows,
            });
        }
        basis.push(v.into_iter().map(|x| x / len).collect());
    }
    Matrix::from_rows(&basis)
}

/// Subtracts the projections onto orthonormal `basis` from `v`.
fn project_out(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let original = norm(v);
    let mut w = v.to_vec();
    let mut reorthogonalize = false;
    for q in basis {
        let c = dot(q, &w);
        if c.abs() > 0.5 * original {
            reorthogonalize = true;
        }
        for (wi, qi) in w.iter_mut().zip(q) {
            *wi -= c * qi;
        }
    }
    if reorthogonalize {
        for q in basis {
            let c = dot(q, &w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= c * qi;
            }
        }
    }
    w
}

/// Orthonormal rows spanning `{x : M x = 0}`, or `None` when that space is `{0}`.
///
/// Builds an orthonormal basis of the row space (skipping dependent rows) and
/// completes it with standard basis vectors.
pub fn nullspace(m: &Matrix, tol_ratio: f64) -> Option<Matrix> {
    let scale = m.row_iter().map(norm).fold(0.0, f64::max);
    let mut row_basis: Vec<Vec<f64>> = Vec::new();
    for r in m.row_iter() {
        let v = project_out(r, &row_basis);
        let len = norm(&v);
        if len > tol_ratio * scale && len > 0.0 {
            row_basis.push(v.into_iter().map(|x| x / len).collect());
        }
    }
    let dim = m.cols;
    let mut null_basis: Vec<Vec<f64>> = Vec::new();
    // Standard vectors best aligned with the orthogonal complement go first.
    let mut candidates: Vec<(usize, f64)> = (0..dim)
        .map(|k| {
            let captured: f64 = row_basis.iter().map(|q| q[k] * q[k]).sum();
            (k, captured)
        })
        .collect();
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1));
    for (k, _) in candidates {
        if row_basis.len() + null_basis.len() == dim {
            break;
        }
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        let mut all: Vec<Vec<f64>> = row_basis.clone();
        all.extend(null_basis.iter().cloned());
        let v = project_out(&e, &all);
        let len = norm(&v);
        if len > 1e-8 {
            null_basis.push(v.into_iter().map(|x| x / len).collect());
        }
    }
    if null_basis.is_empty() {
        None
    } else {
        Some(Matrix::from_rows(&null_basis).expect("nullspace rows are uniform and finite"))
    }
}

/// Extracts rows `row_idx` and columns `col_idx`, both strictly increasing.
pub fn submatrix(m: &Matrix, row_idx: &[usize], col_idx: &[usize]) -> Result<Matrix> {
    check_indices(row_idx, m.rows)?;
    check_indices(col_idx, m.cols)?;
    if row_idx.is_empty() || col_idx.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    Ok(Matrix::from_fn(row_idx.len(), col_idx.len(), |i, j| {
        m[(row_idx[i], col_idx[j])]
    }))
}

fn check_indices(idx: &[usize], len: usize) -> Result<()> {
    if let Some(&bad) = idx.iter().find(|&&i| i >= len) {
        return Err(Error::IndexOutOfRange { index: bad, len });
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NotIncreasing(idx.to_vec()));
    }
    Ok(())
}

/// Lower-triangular `L` with `M = L L^T`.
pub fn cholesky(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let k = m.rows;
    let mut l = Matrix::zeros(k, k);
    for j in 0..k {
        let d = m[(j, j)] - (0..j).map(|p| l[(j, p)] * l[(j, p)]).sum::<f64>();
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite);
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..k {
            let s = m[(i, j)] - (0..j).map(|p| l[(i, p)] * l[(j, p)]).sum::<f64>();
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Solves `U x = b` for upper-triangular `U`.
pub fn solve_upper(u: &Matrix, b: &[f64]) -> Vec<f64> {
    let k = u.rows;
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| u[(i, j)] * x[j]).sum();
        x[i] = (b[i] - s) / u[(i, i)];
    }
    x
}
