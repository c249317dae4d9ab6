#![allow(dead_code)]

use grassmetric_core::linalg::{determinant_oracle, Matrix};
use grassmetric_core::VectorTuple;
use proptest::prelude::*;

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-1.0..1.0f64, rows * cols)
        .prop_map(move |d| Matrix::new(rows, cols, d).unwrap())
}

pub fn square(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max).prop_flat_map(|k| matrix(k, k))
}

pub fn tuple(n: usize, m: usize) -> impl Strategy<Value = VectorTuple> {
    matrix(n, m).prop_map(VectorTuple::from_matrix)
}

/// `(m, n)` with `1 <= n <= m <= max_m`.
pub fn shape(max_m: usize) -> impl Strategy<Value = (usize, usize)> {
    (1..=max_m).prop_flat_map(|m| (Just(m), 1..=m))
}

pub fn pair(max_m: usize) -> impl Strategy<Value = (VectorTuple, VectorTuple)> {
    shape(max_m).prop_flat_map(|(m, n)| (tuple(n, m), tuple(n, m)))
}

/// Gram determinant `det(a_i^T G b_j)` through the permutation-sum oracle.
pub fn gram_oracle(g: &Matrix, a: &VectorTuple, b: &VectorTuple) -> f64 {
    let n = a.order();
    let m = a.dim();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..m {
                for l in 0..m {
                    s += a.vector(i)[k] * g[(k, l)] * b.vector(j)[l];
                }
            }
            entries.push(s);
        }
    }
    determinant_oracle(&Matrix::new(n, n, entries).unwrap()).unwrap()
}

/// All increasing `n`-subsets of `0..m`, built by counting.
pub fn subsets(m: usize, n: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << m))
        .filter(|mask| mask.count_ones() as usize == n)
        .map(|mask| (0..m).filter(|i| mask & (1 << i) != 0).collect())
        .collect()
}

/// `det` of the columns `cols` of the tuple's row matrix, via the oracle.
pub fn minor_oracle(a: &VectorTuple, cols: &[usize]) -> f64 {
    let n = a.order();
    let entries: Vec<f64> = (0..n)
        .flat_map(|i| cols.iter().map(move |&c| (i, c)))
        .map(|(i, c)| a.vector(i)[c])
        .collect();
    determinant_oracle(&Matrix::new(n, n, entries).unwrap()).unwrap()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
