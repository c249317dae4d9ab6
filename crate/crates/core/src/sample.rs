//! Seeded random inputs: tuples, SPD ambients, orthogonal and invertible matrices.
//!
//! All generators take the RNG by `&mut` so callers control determinism.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{determinant, numerical_rank, orthonormalize, Matrix};
use crate::ninner::VectorTuple;

pub type SampleRng = ChaCha8Rng;

/// Deterministic generator for `seed`, on an independent `stream`.
pub fn rng(seed: u64, stream: u64) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Entries uniform on `[-1, 1]`.
pub fn uniform_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..=1.0))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn uniform_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

pub fn uniform_tuple<R: Rng + ?Sized>(rng: &mut R, order: usize, dim: usize) -> VectorTuple {
    VectorTuple::from_matrix(uniform_matrix(rng, order, dim))
}

/// Rejection-samples a uniform tuple until its numerical rank is `order`.
pub fn independent_tuple<R: Rng + ?Sized>(
    rng: &mut R,
    order: usize,
    dim: usize,
    rank_tol: f64,
    max_attempts: usize,
) -> Option<VectorTuple> {
    (0..max_attempts)
        .map(|_| uniform_tuple(rng, order, dim))
        .find(|t| numerical_rank(t.as_matrix(), rank_tol) == order)
}

/// A tuple with slot `k` replaced by a random combination of the other slots.
/// For `order == 1` the single vector is zero.
pub fn dependent_tuple<R: Rng + ?Sized>(rng: &mut R, order: usize, dim: usize) -> VectorTuple {
    let base = uniform_tuple(rng, order, dim);
    let k = rng.random_range(0..order);
    let mut combo = vec![0.0; dim];
    for (i, v) in base.iter().enumerate() {
        if i != k {
            let c: f64 = rng.random_range(-1.0..=1.0);
            for (x, y) in combo.iter_mut().zip(v) {
                *x += c * y;
            }
        }
    }
    base.with_vector(k, &combo).expect("same shape")
}

/// `M^T M / m + I / 2` for Gaussian `M`: symmetric positive definite and well conditioned.
pub fn random_spd<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix {
    let g = gaussian_matrix(rng, dim, dim);
    let mut s = g.transpose().matmul(&g).expect("square");
    for i in 0..dim {
        for j in 0..dim {
            s[(i, j)] /= dim as f64;
        }
        s[(i, i)] += 0.5;
    }
    // exact symmetry
    for i in 0..dim {
        for j in 0..i {
            let avg = 0.5 * (s[(i, j)] + s[(j, i)]);
            s[(i, j)] = avg;
            s[(j, i)] = avg;
        }
    }
    s
}

/// Orthonormalized Gaussian square matrix, with the last row's sign flipped as
/// needed so `det` has the sign of `det_sign`.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, dim: usize, det_sign: f64) -> Matrix {
    loop {
        let Ok(mut q) = orthonormalize(&gaussian_matrix(rng, dim, dim)) else {
            continue;
        };
        let d = determinant(&q).expect("square");
        if d * det_sign < 0.0 {
            for j in 0..dim {
                q[(dim - 1, j)] = -q[(dim - 1, j)];
            }
        }
        return q;
    }
}

/// Uniform `[-1,1]` square matrix whose Hadamard ratio `|det| / prod |row_i|`
/// is at least 1/4, so it is comfortably invertible.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix {
    loop {
        let p = uniform_matrix(rng, dim, dim);
        let rows: f64 = p.row_iter().map(crate::linalg::norm).product();
        let d = determinant(&p).expect("square");
        if rows > 0.0 && d.abs() >= 0.25 * rows {
            return p;
        }
    }
}

/// Basis of a Haar-random `order`-dimensional subspace of R^dim, re-based by a
/// random invertible matrix so the basis itself is not orthonormal.
pub fn random_subspace_basis<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    order: usize,
) -> VectorTuple {
    let q = loop {
        if let Ok(q) = orthonormalize(&gaussian_matrix(rng, order, dim)) {
            break q;
        }
    };
    let p = random_invertible(rng, order);
    VectorTuple::from_matrix(p.matmul(&q).expect("shapes agree"))
}

/// Uniformly random permutation of `0..n`.
pub fn permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Sign of a permutation given as an image list.
pub fn permutation_sign(p: &[usize]) -> f64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1.0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}
