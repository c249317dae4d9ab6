//! Angles and distances between n-dimensional subspaces, orthogonal
//! complements, the dual (m-n)-inner product, and the minor identities for
//! orthogonal matrices that tie the two together.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{increasing_tuples, IndexTuple};
use crate::linalg::{
    determinant, dot, norm, nullspace, orthonormalize, submatrix, Matrix, DEFAULT_RANK_TOL,
};
use crate::ninner::{
    n_inner, n_norm, pluecker_coordinates, value_scale, GramNForm, NInnerProduct, VectorTuple,
};
use crate::subspace::Subspace;

/// Slack allowed on `|cos|` above 1 before it is reported as an error.
pub const COSINE_SLACK: f64 = 1e-9;

/// Tolerance on `|Q Q^T - I|` for inputs required to be orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

/// Tolerance on the complementary-minor residual.
pub const MINOR_TOL: f64 = 1e-8;

/// Two subspaces of the same dimension in the same ambient space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspacePair {
    pub left: Subspace,
    pub right: Subspace,
}

impl SubspacePair {
    pub fn new(left: Subspace, right: Subspace) -> Result<Self> {
        if left.dim() != right.dim() || left.order() != right.order() {
            return Err(Error::MixedSpaces);
        }
        Ok(SubspacePair { left, right })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleResult {
    /// `<A|B> / (|A| |B|)`, clamped to `[-1, 1]`.
    pub cosine: f64,
    /// In `[0, pi]`; depends on the orientation of the bases.
    pub angle_oriented: f64,
    /// In `[0, pi/2]`; a function of the subspaces alone.
    pub angle_unoriented: f64,
}

impl AngleResult {
    fn from_cosine(cos: f64) -> Result<Self> {
        if cos.is_nan() || cos.abs() > 1.0 + COSINE_SLACK {
            return Err(Error::CosineOutOfRange(cos));
        }
        let c = cos.clamp(-1.0, 1.0);
        Ok(AngleResult {
            cosine: c,
            angle_oriented: c.acos(),
            angle_unoriented: c.abs().acos(),
        })
    }

    /// Angle between two vectors of n-form coordinates. The sine comes from
    /// `|u|^2 |v|^2 - (u.v)^2 = sum_{I<J} (u_I v_J - u_J v_I)^2`, which keeps
    /// full precision near zero angle where `acos` does not.
    fn from_coordinates(u: &[f64], v: &[f64]) -> Result<Self> {
        let (nu, nv) = (norm(u), norm(v));
        if nu == 0.0 || nv == 0.0 {
            return Err(Error::DegenerateSubspace(0.0));
        }
        let denom = nu * nv;
        let cos = dot(u, v) / denom;
        let mut cross = 0.0;
        for i in 0..u.len() {
            for j in i + 1..u.len() {
                let t = u[i] * v[j] - u[j] * v[i];
                cross += t * t;
            }
        }
        let sine = cross.sqrt() / denom;
        Ok(AngleResult {
            cosine: cos.clamp(-1.0, 1.0),
            angle_oriented: sine.atan2(cos),
            angle_unoriented: sine.atan2(cos.abs()),
        })
    }
}

fn angle_between<F: NInnerProduct + ?Sized>(
    form: &F,
    a: &VectorTuple,
    b: &VectorTuple,
) -> Result<AngleResult> {
    if let (Some(u), Some(v)) = (form.wedge_coordinates(a), form.wedge_coordinates(b)) {
        return AngleResult::from_coordinates(&u?, &v?);
    }
    let (na, nb) = (n_norm(form, a)?, n_norm(form, b)?);
    for (t, nt) in [(a, na), (b, nb)] {
        if nt * nt <= 1e-12 * value_scale(form, t, t) {
            return Err(Error::DegenerateSubspace(nt * nt));
        }
    }
    AngleResult::from_cosine(n_inner(form, a, b)? / (na * nb))
}

fn check_form<F: NInnerProduct + ?Sized>(form: &F, s: &Subspace) -> Result<()> {
    if form.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: s.dim(),
        });
    }
    Ok(())
}

/// Angle between the two subspaces of `pair` measured by `form`.
pub fn subspace_angle<F: NInnerProduct + ?Sized>(
    form: &F,
    pair: &SubspacePair,
) -> Result<AngleResult> {
    check_form(form, &pair.left)?;
    angle_between(form, pair.left.basis(), pair.right.basis())
}

/// `arccos |cos|`: a pseudometric on the Grassmannian.
pub fn grassmann_distance<F: NInnerProduct + ?Sized>(form: &F, pair: &SubspacePair) -> Result<f64> {
    Ok(subspace_angle(form, pair)?.angle_unoriented)
}

/// Symmetric matrix of pairwise distances with zero diagonal.
pub fn distance_matrix<F: NInnerProduct + ?Sized>(
    form: &F,
    subspaces: &[Subspace],
) -> Result<Matrix> {
    let first = subspaces.first().ok_or(Error::EmptyInput)?;
    if subspaces
        .iter()
        .any(|s| s.dim() != first.dim() || s.order() != first.order())
    {
        return Err(Error::MixedSpaces);
    }
    check_form(form, first)?;
    let k = subspaces.len();
    let mut d = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i + 1..k {
            let angle = angle_between(form, subspaces[i].basis(), subspaces[j].basis())?;
            d[(i, j)] = angle.angle_unoriented;
            d[(j, i)] = angle.angle_unoriented;
        }
    }
    Ok(d)
}

/// Orthogonal complement with respect to the ambient inner product of `form`.
/// The returned basis is orthonormal for that inner product.
pub fn orthogonal_complement(form: &GramNForm, s: &Subspace) -> Result<Subspace> {
    check_form(form, s)?;
    if s.order() == s.dim() {
        return Err(Error::FullSpace);
    }
    let z = form.to_orthonormal_coords(s.basis())?;
    let ns = nullspace(z.as_matrix(), DEFAULT_RANK_TOL).ok_or(Error::FullSpace)?;
    Subspace::new(form.from_orthonormal_coords(&VectorTuple::from_matrix(ns))?)
}

/// `sum_{i_1<..<i_k} det(A_I) det(B_I)`: the standard k-inner product written
/// through generalized Kronecker deltas in an orthonormal basis.
pub fn dual_n_inner(a: &VectorTuple, b: &VectorTuple) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            expected: a.order(),
            found: b.order(),
        });
    }
    let pa = pluecker_coordinates(a)?;
    let pb = pluecker_coordinates(b)?;
    Ok(pa.iter().map(|(idx, x)| x * pb[idx]).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualAngleCheck {
    /// Unoriented angle between the subspaces.
    pub primal: f64,
    /// Unoriented angle between their complements under the dual product.
    pub dual: f64,
    pub gap: f64,
    pub primal_cosine: f64,
    pub dual_cosine: f64,
    /// `sgn det [U1; U1*] * sgn det [U2; U2*]` in orthonormal coordinates.
    pub orientation: f64,
}

impl DualAngleCheck {
    /// Whether the oriented cosines agree once the orientation sign is applied.
    pub fn signed_cosine_gap(&self) -> f64 {
        (self.primal_cosine - self.orientation * self.dual_cosine).abs()
    }
}

fn completed_orientation(u: &Matrix, c: &Matrix) -> Result<f64> {
    let mut rows = u.to_rows();
    rows.extend(c.to_rows());
    Ok(determinant(&Matrix::from_rows(&rows)?)?.signum())
}

/// Compares the angle between two subspaces with the angle between their
/// orthogonal complements, both measured in orthonormal coordinates of the
/// ambient inner product.
pub fn dual_angle_check(form: &GramNForm, pair: &SubspacePair) -> Result<DualAngleCheck> {
    let primal = subspace_angle(form, pair)?;
    let mut coords = Vec::with_capacity(2);
    for s in [&pair.left, &pair.right] {
        let comp = orthogonal_complement(form, s)?;
        let u = orthonormalize(form.to_orthonormal_coords(s.basis())?.as_matrix())?;
        let c = form.to_orthonormal_coords(comp.basis())?;
        let sign = completed_orientation(&u, c.as_matrix())?;
        coords.push((c, sign));
    }
    let (c1, s1) = &coords[0];
    let (c2, s2) = &coords[1];
    let w1: Vec<f64> = pluecker_coordinates(c1)?.into_values().collect();
    let w2: Vec<f64> = pluecker_coordinates(c2)?.into_values().collect();
    let dual = AngleResult::from_coordinates(&w1, &w2)?;
    let dual_cosine =
        dual_n_inner(c1, c2)? / (dual_n_inner(c1, c1)? * dual_n_inner(c2, c2)?).sqrt();
    Ok(DualAngleCheck {
        primal: primal.angle_unoriented,
        dual: dual.angle_unoriented,
        gap: (primal.angle_unoriented - dual.angle_unoriented).abs(),
        primal_cosine: primal.cosine,
        dual_cosine: dual_cosine.clamp(-1.0, 1.0),
        orientation: s1 * s2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplementaryMinor {
    /// Minor on the first `n` rows and columns `I`.
    pub minor: f64,
    /// Minor on the remaining rows and the complementary columns.
    pub cominor: f64,
    /// `sgn(det A) * (-1)^(n(n+1)/2 + sum I)` with 1-based column indices.
    pub sign: f64,
    pub residual: f64,
}

fn check_orthogonal(a: &Matrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let defect = a.orthonormality_defect();
    if defect > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal(defect));
    }
    Ok(())
}

fn split_order(a: &Matrix, n: usize) -> Result<()> {
    if n == 0 || n >= a.nrows() {
        return Err(Error::OrderExceedsDimension {
            order: n,
            dim: a.nrows(),
        });
    }
    Ok(())
}

fn laplace_sign(n: usize, idx: &IndexTuple) -> f64 {
    let exponent = n * (n + 1) / 2 + idx.as_slice().iter().map(|i| i + 1).sum::<usize>();
    if exponent.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn minor_pair(a: &Matrix, idx: &IndexTuple) -> Result<(f64, f64)> {
    let (m, n) = (a.nrows(), idx.len());
    let top: Vec<usize> = (0..n).collect();
    let bottom: Vec<usize> = (n..m).collect();
    let minor = determinant(&submatrix(a, &top, idx.as_slice())?)?;
    let cominor = determinant(&submatrix(a, &bottom, &idx.complement(m))?)?;
    Ok((minor, cominor))
}

/// For orthogonal `A`, the minor on rows `1..n` and columns `I` equals the
/// signed complementary minor on rows `n+1..m` and the other columns.
pub fn complementary_minor(a: &Matrix, idx: &IndexTuple) -> Result<ComplementaryMinor> {
    check_orthogonal(a)?;
    split_order(a, idx.len())?;
    if let Some(&last) = idx.as_slice().last() {
        if last >= a.ncols() {
            return Err(Error::IndexOutOfRange {
                index: last,
                len: a.ncols(),
            });
        }
    }
    let (minor, cominor) = minor_pair(a, idx)?;
    let sign = determinant(a)?.signum() * laplace_sign(idx.len(), idx);
    let residual = (minor - sign * cominor).abs();
    if residual > MINOR_TOL {
        return Err(Error::MinorIdentityViolated {
            idx: idx.to_one_based(),
            residual,
        });
    }
    Ok(ComplementaryMinor {
        minor,
        cominor,
        sign,
        residual,
    })
}

/// `|det A - sum_I (-1)^(n(n+1)/2 + sum I) det A_I det A*_I|` for any square `A`.
pub fn laplace_identity_check(a: &Matrix, n: usize) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    split_order(a, n)?;
    let mut expansion = 0.0;
    for idx in increasing_tuples(a.nrows(), n) {
        let (minor, cominor) = minor_pair(a, &idx)?;
        expansion += laplace_sign(n, &idx) * minor * cominor;
    }
    Ok((determinant(a)? - expansion).abs())
}

/// `sum_I det(A_I)^2` over the column subsets of an `n x m` matrix with
/// orthonormal rows; equals 1.
pub fn pluecker_norm(a: &Matrix) -> Result<f64> {
    let defect = a.orthonormality_defect();
    if defect > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthonormal(defect));
    }
    let p = pluecker_coordinates(&VectorTuple::from_matrix(a.clone()))?;
    Ok(p.values().map(|x| x * x).sum())
}
