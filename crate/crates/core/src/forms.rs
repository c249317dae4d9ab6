//! Sparse n-forms over a fixed basis of R^m, the generalized Kronecker delta,
//! and the inner product an n-inner product induces on the space of n-forms.
//!
//! Indices are 0-based in the Rust API. The JSON wire format uses 1-based
//! indices, matching the usual mathematical notation.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ninner::{pluecker_coordinates, sqrt_clamped, NInnerProduct, VectorTuple};

/// Coefficients below this magnitude are not stored.
pub const PRUNE_BELOW: f64 = 1e-14;

/// A strictly increasing list of basis indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyInput);
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing(indices));
        }
        Ok(IndexTuple(indices))
    }

    /// As [`IndexTuple::new`], additionally requiring every index `< dim`.
    pub fn within(indices: Vec<usize>, dim: usize) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: dim,
            });
        }
        Self::new(indices)
    }

    /// Sorts arbitrary indices, returning the tuple and the sign of the
    /// sorting permutation; `None` if an index repeats.
    pub fn sorted(indices: &[usize]) -> Option<(Self, f64)> {
        let mut v = indices.to_vec();
        let mut sign = 1.0;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.is_empty() || v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((IndexTuple(v), sign))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices in `0..dim` not in this tuple, increasing.
    pub fn complement(&self, dim: usize) -> Vec<usize> {
        (0..dim)
            .filter(|i| self.0.binary_search(i).is_err())
            .collect()
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn from_one_based(indices: &[usize], dim: usize) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::IndexOutOfRange { index: 0, len: dim });
        }
        Self::within(indices.iter().map(|i| i - 1).collect(), dim)
    }
}

/// All strictly increasing `order`-tuples drawn from `0..dim`, in lexicographic order.
pub fn increasing_tuples(dim: usize, order: usize) -> impl Iterator<Item = IndexTuple> {
    (0..dim).combinations(order).map(IndexTuple)
}

/// Generalized Kronecker delta: the sign of the permutation carrying `j` onto
/// `i` when both list the same distinct indices, and 0 otherwise.
pub fn generalized_delta(i: &[usize], j: &[usize]) -> i8 {
    if i.len() != j.len() {
        return 0;
    }
    match (IndexTuple::sorted(i), IndexTuple::sorted(j)) {
        (Some((si, a)), Some((sj, b))) if si == sj => (a * b) as i8,
        _ => 0,
    }
}

/// Element of the n-th exterior power of R^m, stored sparsely over increasing index tuples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NFormWire", into = "NFormWire")]
pub struct NForm {
    dim: usize,
    order: usize,
    coefficients: BTreeMap<IndexTuple, f64>,
}

impl NForm {
    pub fn zero(dim: usize, order: usize) -> Result<Self> {
        if order == 0 || dim == 0 {
            return Err(Error::EmptyInput);
        }
        if order > dim {
            return Err(Error::OrderExceedsDimension { order, dim });
        }
        Ok(NForm {
            dim,
            order,
            coefficients: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Adds `c * e_{i1} ^ ... ^ e_{in}`. Indices may be unsorted; the sign of
    /// the sorting permutation is applied. Repeated indices contribute nothing.
    pub fn add_term(&mut self, indices: &[usize], c: f64) -> Result<()> {
        if indices.len() != self.order {
            return Err(Error::OrderMismatch {
                expected: self.order,
                found: indices.len(),
            });
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.dim) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: self.dim,
            });
        }
        if !c.is_finite() {
            return Err(Error::NonFinite);
        }
        if let Some((idx, sign)) = IndexTuple::sorted(indices) {
            let value = self.get(&idx) + sign * c;
            if value.abs() < PRUNE_BELOW {
                self.coefficients.remove(&idx);
            } else {
                self.coefficients.insert(idx, value);
            }
        }
        Ok(())
    }

    pub fn get(&self, idx: &IndexTuple) -> f64 {
        self.coefficients.get(idx).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IndexTuple, f64)> + '_ {
        self.coefficients.iter().map(|(k, &v)| (k, v))
    }

    /// Number of stored (nonzero) coefficients.
    pub fn nnz(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn scaled(&self, s: f64) -> NForm {
        let mut out = NForm {
            dim: self.dim,
            order: self.order,
            coefficients: BTreeMap::new(),
        };
        for (k, v) in self.iter() {
            let c = s * v;
            if c.abs() >= PRUNE_BELOW {
                out.coefficients.insert(k.clone(), c);
            }
        }
        out
    }

    pub fn add(&self, other: &NForm) -> Result<NForm> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.add_term(k.as_slice(), v)?;
        }
        Ok(out)
    }

    fn check_shape(&self, other: &NForm) -> Result<()> {
        if self.dim != other.dim || self.order != other.order {
            return Err(Error::ShapeMismatch {
                expected: format!("(m={}, n={})", self.dim, self.order),
                found: format!("(m={}, n={})", other.dim, other.order),
            });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct NFormWire {
    m: usize,
    n: usize,
    entries: Vec<NFormEntry>,
}

#[derive(Serialize, Deserialize)]
struct NFormEntry {
    idx: Vec<usize>,
    c: f64,
}

impl TryFrom<NFormWire> for NForm {
    type Error = Error;
    fn try_from(w: NFormWire) -> Result<Self> {
        let mut form = NForm::zero(w.m, w.n)?;
        for e in w.entries {
            let idx = IndexTuple::from_one_based(&e.idx, w.m)?;
            if idx.len() != w.n {
                return Err(Error::OrderMismatch {
                    expected: w.n,
                    found: idx.len(),
                });
            }
            form.add_term(idx.as_slice(), e.c)?;
        }
        Ok(form)
    }
}

impl From<NForm> for NFormWire {
    fn from(f: NForm) -> Self {
        NFormWire {
            m: f.dim,
            n: f.order,
            entries: f
                .coefficients
                .iter()
                .map(|(k, &c)| NFormEntry {
                    idx: k.to_one_based(),
                    c,
                })
                .collect(),
        }
    }
}

/// The decomposable form `a_1 ^ ... ^ a_n`; its coefficients are the Plücker coordinates.
pub fn wedge_of_tuple(a: &VectorTuple) -> Result<NForm> {
    let mut form = NForm::zero(a.dim(), a.order())?;
    for (idx, c) in pluecker_coordinates(a)? {
        if c.abs() >= PRUNE_BELOW {
            form.coefficients.insert(idx, c);
        }
    }
    Ok(form)
}

/// `sum_{I,J} u_I v_J <e_I | e_J>` over the stored coefficients of `u` and `v`.
pub fn form_inner<F: NInnerProduct + ?Sized>(form: &F, u: &NForm, v: &NForm) -> Result<f64> {
    u.check_shape(v)?;
    if form.dim() != u.dim {
        return Err(Error::ShapeMismatch {
            expected: format!("m={}", form.dim()),
            found: format!("m={}", u.dim),
        });
    }
    if let Some(n) = form.order() {
        if n != u.order {
            return Err(Error::OrderMismatch {
                expected: n,
                found: u.order,
            });
        }
    }
    let mut total = 0.0;
    for (i, ui) in u.iter() {
        for (j, vj) in v.iter() {
            let b = form.basis_product(i, j)?;
            if b != 0.0 {
                total += ui * vj * b;
            }
        }
    }
    if !total.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(total)
}

pub fn form_norm<F: NInnerProduct + ?Sized>(form: &F, u: &NForm) -> Result<f64> {
    sqrt_clamped(form_inner(form, u, u)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ninner::{n_inner, GramNForm};

    fn e(i: usize, m: usize) -> Vec<f64> {
        let mut v = vec![0.0; m];
        v[i] = 1.0;
        v
    }

    #[test]
    fn delta_examples() {
        assert_eq!(generalized_delta(&[0, 1], &[0, 1]), 1);
        assert_eq!(generalized_delta(&[0, 1], &[1, 0]), -1);
        assert_eq!(generalized_delta(&[0, 1], &[0, 2]), 0);
        assert_eq!(generalized_delta(&[0, 0], &[0, 0]), 0);
        assert_eq!(generalized_delta(&[2, 0, 1], &[0, 1, 2]), 1);
        assert_eq!(generalized_delta(&[0], &[0, 1]), 0);
    }

    #[test]
    fn index_tuple_validation() {
        assert!(IndexTuple::new(vec![0, 2, 5]).is_ok());
        assert!(matches!(
            IndexTuple::new(vec![1, 1]),
            Err(Error::NotIncreasing(_))
        ));
        assert!(matches!(
            IndexTuple::within(vec![0, 3], 3),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        ));
        assert_eq!(
            IndexTuple::new(vec![1, 3]).unwrap().complement(5),
            vec![0, 2, 4]
        );
        let (t, s) = IndexTuple::sorted(&[3, 1, 2]).unwrap();
        assert_eq!(t.as_slice(), &[1, 2, 3]);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn wedge_examples() {
        let a = VectorTuple::new(&[e(0, 3), e(1, 3)]).unwrap();
        let w = wedge_of_tuple(&a).unwrap();
        assert_eq!(w.nnz(), 1);
        assert_eq!(w.get(&IndexTuple::new(vec![0, 1]).unwrap()), 1.0);

        let swapped = VectorTuple::new(&[e(1, 3), e(0, 3)]).unwrap();
        assert_eq!(
            wedge_of_tuple(&swapped)
                .unwrap()
                .get(&IndexTuple::new(vec![0, 1]).unwrap()),
            -1.0
        );

        // 2x2 minors of [[1,1,0],[0,1,1]]: cols(1,2)=1, cols(1,3)=1, cols(2,3)=1
        let b = VectorTuple::new(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]]).unwrap();
        let w = wedge_of_tuple(&b).unwrap();
        for idx in increasing_tuples(3, 2) {
            assert!((w.get(&idx) - 1.0).abs() < 1e-15, "{idx:?}");
        }
    }

    #[test]
    fn form_inner_two_term_example() {
        let g = GramNForm::standard(3);
        let mut u = NForm::zero(3, 2).unwrap();
        u.add_term(&[0, 1], 1.0).unwrap();
        assert_eq!(form_inner(&g, &u, &u).unwrap(), 1.0);
        assert_eq!(form_norm(&g, &u).unwrap(), 1.0);

        // w = p e1^e2 - q e1^e3 with p = 1, q = 2: p^2 + q^2 = 5
        let mut w = NForm::zero(3, 2).unwrap();
        w.add_term(&[0, 1], 1.0).unwrap();
        w.add_term(&[0, 2], -2.0).unwrap();
        assert!((form_inner(&g, &w, &w).unwrap() - 5.0).abs() < 1e-15);
        assert!((form_norm(&g, &w).unwrap() - 5f64.sqrt()).abs() < 1e-15);

        assert_eq!(form_norm(&g, &NForm::zero(3, 2).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn wedge_inner_matches_n_inner() {
        let g = GramNForm::standard(4);
        let a = VectorTuple::new(&[vec![1.0, 2.0, 0.5, -1.0], vec![0.0, 1.0, 3.0, 2.0]]).unwrap();
        let b = VectorTuple::new(&[vec![-1.0, 0.5, 0.25, 1.0], vec![2.0, 0.0, 1.0, 1.0]]).unwrap();
        let lhs = form_inner(
            &g,
            &wedge_of_tuple(&a).unwrap(),
            &wedge_of_tuple(&b).unwrap(),
        )
        .unwrap();
        let rhs = n_inner(&g, &a, &b).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn add_term_normalizes_order() {
        let mut f = NForm::zero(3, 2).unwrap();
        f.add_term(&[2, 0], 1.5).unwrap();
        assert_eq!(f.get(&IndexTuple::new(vec![0, 2]).unwrap()), -1.5);
        f.add_term(&[0, 2], 1.5).unwrap();
        assert!(f.is_zero());
        f.add_term(&[1, 1], 3.0).unwrap();
        assert!(f.is_zero());
        assert!(f.add_term(&[0, 3], 1.0).is_err());
    }

    #[test]
    fn json_uses_one_based_indices() {
        let mut f = NForm::zero(3, 2).unwrap();
        f.add_term(&[0, 2], 0.5).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"m":3,"n":2,"entries":[{"idx":[1,3],"c":0.5}]}"#);
        let back: NForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(
            serde_json::from_str::<NForm>(r#"{"m":3,"n":2,"entries":[{"idx":[3,1],"c":1}]}"#)
                .is_err()
        );
        assert!(
            serde_json::from_str::<NForm>(r#"{"m":3,"n":2,"entries":[{"idx":[0,1],"c":1}]}"#)
                .is_err()
        );
    }
}
