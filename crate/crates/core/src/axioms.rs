//! Randomized checks that a candidate form satisfies the n-inner product
//! axioms, both in the 2n-argument form `<A|B>` and in the reduced
//! (n+1)-argument form `(a, b | x_1, ..., x_{n-1})`.
//!
//! Every residual is divided by [`value_scale`] so one tolerance works across
//! ambient dimensions and input magnitudes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::IndexTuple;
use crate::linalg::nullspace;
use crate::ninner::{misiak_reduce, n_inner, value_scale, NInnerProduct, VectorTuple};
use crate::sample::{
    dependent_tuple, independent_tuple, permutation, permutation_sign, rng, uniform_tuple,
    uniform_vector, SampleRng,
};
use crate::subspace::{orthogonality_residuals, Subspace};

use rand::Rng;

const MAX_REJECTIONS: usize = 100;
const HOMOGENEITY_SCALARS: [f64; 4] = [-2.0, 0.0, 0.5, 3.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AxiomId {
    /// `<A|A> > 0` for independent `A`, `= 0` for dependent `A`.
    #[serde(rename = "D21-i′")]
    D21IPrime,
    /// `<A|B> = <B|A>`.
    #[serde(rename = "D21-ii")]
    D21Ii,
    /// `<l a_1, a_2..|B> = l <A|B>`.
    #[serde(rename = "D21-iii")]
    D21Iii,
    /// Alternating in the left slots, and `<A|B> = sgn(p) sgn(t) <pA|tB>`.
    #[serde(rename = "D21-iv")]
    D21Iv,
    /// Additive in the first slot.
    #[serde(rename = "D21-v")]
    D21V,
    /// `a_1` orthogonal to `span B` forces `<a_1, a_2..|B> = 0`.
    #[serde(rename = "D21-vi")]
    D21Vi,
    #[serde(rename = "D11-i")]
    D11I,
    #[serde(rename = "D11-ii")]
    D11Ii,
    #[serde(rename = "D11-iii")]
    D11Iii,
    #[serde(rename = "D11-iv")]
    D11Iv,
    #[serde(rename = "D11-v")]
    D11V,
}

impl AxiomId {
    pub const ALL: [AxiomId; 11] = [
        AxiomId::D21IPrime,
        AxiomId::D21Ii,
        AxiomId::D21Iii,
        AxiomId::D21Iv,
        AxiomId::D21V,
        AxiomId::D21Vi,
        AxiomId::D11I,
        AxiomId::D11Ii,
        AxiomId::D11Iii,
        AxiomId::D11Iv,
        AxiomId::D11V,
    ];

    pub fn code(self) -> &'static str {
        match self {
            AxiomId::D21IPrime => "D21-i′",
            AxiomId::D21Ii => "D21-ii",
            AxiomId::D21Iii => "D21-iii",
            AxiomId::D21Iv => "D21-iv",
            AxiomId::D21V => "D21-v",
            AxiomId::D21Vi => "D21-vi",
            AxiomId::D11I => "D11-i",
            AxiomId::D11Ii => "D11-ii",
            AxiomId::D11Iii => "D11-iii",
            AxiomId::D11Iv => "D11-iv",
            AxiomId::D11V => "D11-v",
        }
    }

    fn stream(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
}

/// Inputs and values of the worst failing trial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub tuples: BTreeMap<String, Vec<Vec<f64>>>,
    pub values: BTreeMap<String, f64>,
}

impl Witness {
    fn tuple(mut self, name: &str, t: &VectorTuple) -> Self {
        self.tuples.insert(name.to_string(), t.to_vecs());
        self
    }

    fn vector(mut self, name: &str, v: &[f64]) -> Self {
        self.tuples.insert(name.to_string(), vec![v.to_vec()]);
        self
    }

    fn rows(mut self, name: &str, rows: &[Vec<f64>]) -> Self {
        self.tuples.insert(name.to_string(), rows.to_vec());
        self
    }

    fn value(mut self, name: &str, v: f64) -> Self {
        self.values.insert(name.to_string(), v);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub verdict: Verdict,
    /// Trials that reached a decision.
    pub trials: usize,
    pub max_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub seed: u64,
    pub trials: usize,
    /// Ambient dimension.
    pub m: usize,
    /// Order of the form.
    pub n: usize,
    pub tol: f64,
    pub rank_tol: f64,
}

impl SampleConfig {
    pub fn new(m: usize, n: usize, seed: u64) -> Self {
        SampleConfig {
            seed,
            trials: 200,
            m,
            n,
            tol: 1e-8,
            rank_tol: 1e-10,
        }
    }

    pub fn validate<F: NInnerProduct + ?Sized>(&self, form: &F) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n == 0 {
            return bad("order n must be at least 1".into());
        }
        if self.n > self.m {
            return Err(Error::OrderExceedsDimension {
                order: self.n,
                dim: self.m,
            });
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tolerance must be positive, got {}", self.tol));
        }
        if !(self.rank_tol > 0.0 && self.rank_tol < 1.0) {
            return bad(format!(
                "rank tolerance must lie in (0, 1), got {}",
                self.rank_tol
            ));
        }
        if form.dim() != self.m {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                found: self.m,
            });
        }
        if let Some(k) = form.order() {
            if k != self.n {
                return Err(Error::OrderMismatch {
                    expected: k,
                    found: self.n,
                });
            }
        }
        Ok(())
    }
}

struct Tally {
    axiom: AxiomId,
    tol: f64,
    trials: usize,
    max_residual: f64,
    violated: bool,
    witness: Option<Witness>,
    skipped: usize,
    note: Option<String>,
}

impl Tally {
    fn new(axiom: AxiomId, cfg: &SampleConfig) -> Self {
        Tally {
            axiom,
            tol: cfg.tol,
            trials: 0,
            max_residual: 0.0,
            violated: false,
            witness: None,
            skipped: 0,
            note: None,
        }
    }

    fn record(&mut self, residual: f64, witness: impl FnOnce() -> Witness) {
        self.trials += 1;
        let residual = if residual.is_nan() {
            f64::MAX
        } else {
            residual
        };
        if residual > self.max_residual {
            self.max_residual = residual;
            if residual > self.tol {
                self.witness = Some(witness().value("residual", residual));
            }
        }
    }

    /// A violation that is not measured by the residual, such as `<A|A> <= 0`.
    fn record_violation(&mut self, residual: f64, witness: impl FnOnce() -> Witness) {
        self.trials += 1;
        self.max_residual = self.max_residual.max(residual);
        if !self.violated {
            self.witness = Some(witness());
        }
        self.violated = true;
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }

    fn vacuous(mut self, why: &str) -> AxiomReport {
        self.note = Some(why.to_string());
        self.finish()
    }

    fn finish(self) -> AxiomReport {
        let failed = self.violated || self.max_residual > self.tol;
        let verdict = if failed {
            Verdict::Fail
        } else if self.trials == 0 && self.note.is_none() {
            Verdict::Undecided
        } else {
            Verdict::Pass
        };
        let mut note = self.note;
        if self.skipped > 0 {
            let msg = format!("{} trials skipped without a decision", self.skipped);
            note = Some(match note {
                Some(n) => format!("{n}; {msg}"),
                None => msg,
            });
        }
        AxiomReport {
            axiom: self.axiom,
            verdict,
            trials: self.trials,
            max_residual: self.max_residual,
            witness: if failed { self.witness } else { None },
            note,
        }
    }
}

fn undecided(axiom: AxiomId, e: &Error) -> AxiomReport {
    AxiomReport {
        axiom,
        verdict: Verdict::Undecided,
        trials: 0,
        max_residual: 0.0,
        witness: None,
        note: Some(e.to_string()),
    }
}

fn run<F, C>(form: &F, cfg: &SampleConfig, axiom: AxiomId, check: C) -> AxiomReport
where
    F: NInnerProduct + ?Sized,
    C: FnOnce(&F, &SampleConfig, &mut SampleRng, Tally) -> Result<AxiomReport>,
{
    if let Err(e) = cfg.validate(form) {
        return undecided(axiom, &e);
    }
    let mut r = rng(cfg.seed, axiom.stream());
    check(form, cfg, &mut r, Tally::new(axiom, cfg)).unwrap_or_else(|e| undecided(axiom, &e))
}

fn relative(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff.abs() / scale
    } else {
        diff.abs()
    }
}

fn add_vectors(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `<A|A> > 0` on independent tuples and `<A|A> = 0` on dependent ones.
pub fn check_axiom_positivity<F: NInnerProduct + ?Sized>(
    form: &F,
    cfg: &SampleConfig,
) -> AxiomReport {
    run(form, cfg, AxiomId::D21IPrime, |form, cfg, r, mut t| {
        for trial in 0..cfg.trials {
            if trial % 2 == 0 {
                let Some(a) = independent_tuple(r, cfg.n, cfg.m, cfg.rank_tol, MAX_REJECTIONS)
                else {
                    t.skip();
                    continue;
                };
                let v = n_inner(form, &a, &a)?;
                if v > 0.0 {
                    t.record(0.0, Witness::default);
                } else {
                    let residual = relative(v, value_scale(form, &a, &a));
                    t.record_violation(residual, || {
                        Witness::default().tuple("A", &a).value("<A|A>", v)
                    });
                }
            } else {
                let a = dependent_tuple(r, cfg.n, cfg.m);
                let v = n_inner(form, &a, &a)?;
                let residual = relative(v, value_scale(form, &a, &a));
                t.record(residual, || {
                    Witness::default().tuple("A", &a).value("<A|A>", v)
                });
            }
        }
        Ok(t.finish())
    })
}

/// `<A|B> = <B|A>`.
pub fn check_axiom_symmetry<F: NInnerProduct + ?Sized>(
    form: &F,
    cfg: &SampleConfig,
) -> AxiomReport {
    run(form, cfg, AxiomId::D21Ii, |form, cfg, r, mut t| {
        for _ in 0..cfg.trials {
            let a = uniform_tuple(r, cfg.n, cfg.m);
            let b = uniform_tuple(r, cfg.n, cfg.m);
            let ab = n_inner(form, &a, &b)?;
            let ba = n_inner(form, &b, &a)?;
            t.record(relative(ab - ba, value_scale(form, &a, &b)), || {
                Witness::default()
                    .tuple("A", &a)
                    .tuple("B", &b)
                    .value("<A|B>", ab)
                    .value("<B|A>", ba)
            });
        }
        Ok(t.finish())
    })
}

/// `<l a_1, a_2..|B> = l <A|B>`.
pub fn check_axiom_homogeneity<F: NInnerProduct + ?Sized>(
    form: &F,
    cfg: &SampleConfig,
) -> AxiomReport {
    run(form, cfg, AxiomId::D21Iii, |form, cfg, r, mut t| {
        for trial in 0..cfg.trials {
            let lambda = match HOMOGENEITY_SCALARS.get(trial % 5) {
                Some(&l) => l,
                None => r.random_range(-3.0..=3.0),
            };
            let a = uniform_tuple(r, cfg.n, cfg.m);
            let b = uniform_tuple(r, cfg.n, cfg.m);
            let scaled: Vec<f64> = a.vector(0).iter().map(|x| lambda * x).collect();
            let la = a.with_vector(0, &scaled)?;
            let lhs = n_inner(form, &la, &b)?;
            let rhs = lambda * n_inner(form, &a, &b)?;
            let scale = value_scale(form, &a, &b) * lambda.abs().max(1.0);
            t.record(relative(lhs - rhs, scale), || {
                Witness::default()
                    .tuple("A", &a)
                    .tuple("B", &b)
                    .value("lambda", lambda)
                    .value("lhs", lhs)
                    .value("rhs", rhs)
            });
        }
        Ok(t.finish())
    })
}

/// Sign change under a transposition of left slots, and invariance of
/// `sgn(p) sgn(t) <pA|tB>` under independent permutations of both sides.
pub fn check_axiom_alternating<F: NInnerProduct + ?Sized>(
    form: &F,
    cfg: &SampleConfig,
) -> AxiomReport {
    run(form, cfg, AxiomId::D21Iv, |form, cfg, r, mut t| {
        if cfg.n == 1 {
            return Ok(t.vacuous("a single slot admits no transposition"));
        }
        for trial in 0..cfg.trials {
            let a = uniform_tuple(r, cfg.n, cfg.m);
            let b = uniform_tuple(r, cfg.n, cfg.m);
            let ab = n_inner(form, &a, &b)?;
            let scale = value_scale(form, &a, &b);
            if trial % 2 == 0 {
                let i = r.random_range(0..cfg.n);
                let j = (i + r.random_range(1..cfg.n)) % cfg.n;
                let swapped = n_inner(form, &a.swapped(i, j), &b)?;
                t.record(relative(swapped + ab, scale), || {
                    Witness::default()
                        .tuple("A", &a)
                        .tuple("B", &b)
                        .value("i", i as f64)
                        .value("j", j as f64)
                        .value("<A|B>", ab)
                        .value("<A swapped|B>", swapped)
                });
            } else {
                let p = permutation(r, cfg.n);
                let q = permutation(r, cfg.n);
                let sign = permutation_sign(&p) * permutation_sign(&q);
                let permuted = n_inner(form, &a.permuted(&p), &b.permuted(&q))?;
                t.record(relative(ab - sign * permuted, scale), || {
                    Witness::default()
                        .tuple("A", &a)
                        .tuple("B", &b)
                        .tuple(
                            "perms",
                            &VectorTuple::new(&[to_f64(&p), to_f64(&q)]).expect("same length"),
                        )
                        .value("<A|B>", ab)
                        .value("<pA|qB>", permuted)
                });
            }
        }
        Ok(t.finish())
    })
}

fn to_f64(p: &[usize]) -> Vec<f64> {
    p.iter().map(|&x| x as f64).collect()
}

/// `<a_1 + c, a_2..|B> = <A|B> + <c, a_2..|B>`.
pub fn check_axiom_additivity<F: NInnerProduct + ?Sized>(
    form: &F,
    cfg: &SampleConfig,
) -> AxiomReport {
    run(form, cfg, AxiomId::D21V, |form, cfg, r, mut t| {
        for _ in 0..cfg.trials {
            let a = uniform_tuple(r, cfg.n, cfg.m);
            let b = uniform_tuple(r, cfg.n, cfg.m);
            let c = uniform_vector(r, cfg.m);
            let ac = a.with_vector(0, &c)?;
            let sum = a.with_vector(0, &add_vectors(a.vector(0), &c))?;
            let lhs = n_inner(form, &sum, &b)?;
            let rhs = n_inner(form, &a, &b)? + n_inner(form, &ac, &b)?;
            let scale = value_scale(form, &a, &b) + value_scale(form, &ac, &b);
            t.record(relative(lhs - rhs, scale), || {
                Witness::default()
                    .tuple("A", &a)
                    .tuple("B", &b)
                    .vector("c", &c)
                    .value("lhs", lhs)
                    .value("rhs", rhs)
            });
        }
        Ok(t.finish())
    })
}

/// If `<a_1, b_1..^b_i..b_n | B> = 0` for every `i`, then `<a_1, a_2..|B> = 0`
/// for arbitrary `a_2..a_n`.
///
/// `a_1` is drawn from the null space of the linear constraints the premise
/// imposes; trials where the drawn vector does not meet the premise within
/// tolerance are skipped.
pub fn check_axiom_vi<F: NInnerProduct + ?Sized>(form: &F, cfg: &SampleConfig) -> AxiomReport {
    run(form, cfg, AxiomId::D21Vi, |form, cfg, r, mut t| {
        if cfg.n == cfg.m {
            return Ok(
                t.vacuous("the subspace is the whole space, so only a_1 = 0 meets the premise")
            );
        }
        for _ in 0..cfg.trials {
            let Some(b) = independent_tuple(r, cfg.n, cfg.m, cfg.rank_tol, MAX_REJECTIONS) else {
                t.skip();
                continue;
            };
            let s = Subspace::with_rank_tol(b.clone(), cfg.rank_tol)?;
            let Some(a1) = premise_vector(form, &s, cfg, r)? else {
                t.skip();
                continue;
            };
            let premise = orthogonality_residuals(form, &a1, &s)?
                .into_iter()
                .fold(0.0, f64::max);
            if premise > cfg.tol {
                t.skip();
                continue;
            }
            let a = uniform_tuple(r, cfg.n, cfg.m).with_vector(0, &a1)?;
            let v = n_inner(form, &a, &b)?;
            t.record(relative(v, value_scale(form, &a, &b)), || {
                Witness::default()
                    .tuple("A", &a)
                    .tuple("B", &b)
                    .value("premise_residual", premise)
                    .value("<A|B>", v)
            });
        }
        Ok(t.finish())
    })
}

/// Unit vector from the null space of `k -> <e_k, b_1..^b_i..b_n | B>`, one row per `i`.
fn premise_vector<F: NInnerProduct + ?Sized>(
    form: &F,
    s: &Subspace,
    cfg: &SampleConfig,
    r: &mut SampleRng,
) -> Result<Option<Vec<f64>>> {
    let b = s.basis();
    let mut rows = Vec::with_capacity(cfg.n);
    for i in 0..cfg.n {
        let others: Vec<&[f64]> = (0..cfg.n)
            .filter(|&j| j != i)
            .map(|j| b.vector(j))
            .collect();
        let row = (0..cfg.m)
            .map(|k| {
                let mut e = vec![0.0; cfg.m];
                e[k] = 1.0;
                let mut left: Vec<&[f64]> = vec![&e];
                left.extend(&others);
                n_inner(form, &VectorTuple::new(&left)?, b)
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let constraints = crate::linalg::Matrix::from_rows(&rows)?;
    let Some(ns) = nullspace(&constraints, cfg.rank_tol) else {
        return Ok(None);
    };
    let mut v = vec![0.0; cfg.m];
    for row in ns.row_iter() {
        let c: f64 = r.random_range(-1.0..=1.0);
        for (x, y) in v.iter_mut().zip(row) {
            *x += c * y;
        }
    }
    let len = crate::linalg::norm(&v);
    if len < 1e-8 {
        return Ok(None);
    }
    Ok(Some(v.iter().map(|x| x / len).collect()))
}

fn reduced_scale<F: NInnerProduct + ?Sized>(
    form: &F,
    a: &[f64],
    b: &[f64],
    x: &[Vec<f64>],
) -> Result<f64> {
    Ok(value_scale(form, &prepend(a, x)?, &prepend(b, x)?))
}

fn prepend(v: &[f64], x: &[Vec<f64>]) -> Result<VectorTuple> {
    let mut rows: Vec<&[f64]> = vec![v];
    rows.extend(x.iter().map(Vec::as_slice));
    VectorTuple::new(&rows)
}

/// The `n - 1` shared vectors of the reduced product; empty when `n = 1`.
fn shared_vectors(r: &mut SampleRng, cfg: &SampleConfig) -> Vec<Vec<f64>> {
    (1..cfg.n).map(|_| uniform_vector(r, cfg.m)).collect()
}

fn reduced_positivity<F: NInnerProduct + ?Sized>(form: &F, cfg: &SampleConfig) -> AxiomReport {
    run(form, cfg, AxiomId::D11I, |form, cfg, r, mut t| {
        for trial in 0..cfg.trials {
            let independent = trial % 2 == 0;
            let x = if independent {
                match independent_tuple(r, cfg.n, cfg.m, cfg.rank_tol, MAX_REJECTIONS) {
                    Some(x) => x,
                    None => {
                        t.skip();
                        continue;
                    }
                }
            } else {
                dependent_tuple(r, cfg.n, cfg.m)
            };
            let rest = x.to_vecs()[1..].to_vec();
            let v = misiak_reduce(form, x.vector(0), x.vector(0), &rest)?;
            let witness = || Witness::default().tuple("X", &x).value("(x1,x1|x2..xn)", v);
            if independent {
                if v > 0.0 {
                    t.record(0.0, Witness::default);
                } else {
                    t.record_violation(relative(v, value_scale(form, &x, &x)), witness);
                }
            } else {
                t.record(relative(v, value_scale(form, &x, &x)), witness);
            }
        }
        Ok(t.finish())
    })
}

fn reduced_symmetry<F: NInnerProduct + ?Sized>(form: &F, cfg: &SampleConfig) -> AxiomReport {
    run(form, cfg, AxiomId::D11Ii, |form, cfg, r, mut t| {
        for trial in 0..cfg.trials {
            let a = uniform_vector(r, cfg.m);
            let b = uniform_vector(r, cfg.m);
            let x = shared_vectors(r, cfg);
            let p = permutation(r, cfg.n - 1);
            let px: Vec<&Vec<f64>> = p.iter().map(|&k| &x[k]).collect();
            let base = misiak_reduce(form, &a, &b, &x)?;
            let moved = if trial % 2 == 0 {
                misiak_reduce(form, &b, &a, &px)?
            } else {
                misiak_reduce(form, &a, &b, &px)?
            };
            let scale = reduced_scale(form, &a, &b, &x)?;
            t.record(relative(base - moved, scale), || {
                Witness::default()
                    .vector("a", &a)
                    .vector("b", &b)
                    .rows("X", &x)
                    .value("before", base)
                    .value("after", moved)
            });
        }
        Ok(t.finish())
    })
}

fn reduced_exchange<F: NInnerProduct + ?Sized>(form: &F, cfg: &SampleConfig) -> AxiomReport {
    run(form, cfg, AxiomId::D11Iii, |form, cfg, r, mut t| {
        if cfg.n == 1 {
            return Ok(t.vacuous("no second vector to exchange"));
        }
        for _ in 0..cfg.trials {
            let x = uniform_tuple(r, cfg.n, cfg.m);
            let rows = x.to_vecs();
            let first = misiak_reduce(form, &rows[0], &rows[0], &rows[1..])?;
            let mut rest = vec![rows[0].clone()];
            rest.extend_from_slice(&rows[2..]);
            let second = misiak_reduce(form, &rows[1], &rows[1], &rest)?;
            t.record(relative(first - second, value_scale(form, &x, &x)), || {
                Witness::default()
                    .tuple("X", &x)
                    .value("(x1,x1|x2..)", first)
                    .value("(x2,x2|x1..)", second)
            });
        }
        Ok(t.finish())
    })
}

fn reduced_homogeneity<F: NInnerProduct + ?Sized>(form: &F, cfg: &SampleConfig) -> AxiomReport {
    run(form, cfg, AxiomId::D11Iv, |form, cfg, r, mut t| {
        for trial in 0..cfg.trials {
            let alpha = match HOMOGENEITY_SCALARS.get(trial % 5) {
                Some(&l) => l,
                None => r.random_range(-3.0..=3.0),
            };
            let a = uniform_vector(r, cfg.m);
            let b = uniform_vector(r, cfg.m);
            let x = shared_vectors(r, cfg);
            let scaled: Vec<f64> = a.iter().map(|v| alpha * v).collect();
            let lhs = misiak_reduce(form, &scaled, &b, &x)?;
            let rhs = alpha * misiak_reduce(form, &a, &b, &x)?;
            let scale = reduced_scale(form, &a, &b, &x)? * alpha.abs().max(1.0);
            t.record(relative(lhs - rhs, scale), || {
                Witness::default()
                    .vector("a", &a)
                    .vector("b", &b)
                    .rows("X", &x)
                    .value("alpha", alpha)
                    .value("lhs", lhs)
                    .value("rhs", rhs)
            });
        }
        Ok(t.finish())
    })
}

fn reduced_additivity<F: NInnerProduct + ?Sized>(form: &F, cfg: &SampleConfig) -> AxiomReport {
    run(form, cfg, AxiomId::D11V, |form, cfg, r, mut t| {
        for _ in 0..cfg.trials {
            let a = uniform_vector(r, cfg.m);
            let a1 = uniform_vector(r, cfg.m);
            let b = uniform_vector(r, cfg.m);
            let x = shared_vectors(r, cfg);
            let lhs = misiak_reduce(form, &add_vectors(&a, &a1), &b, &x)?;
            let rhs = misiak_reduce(form, &a, &b, &x)? + misiak_reduce(form, &a1, &b, &x)?;
            let scale = reduced_scale(form, &a, &b, &x)? + reduced_scale(form, &a1, &b, &x)?;
            t.record(relative(lhs - rhs, scale), || {
                Witness::default()
                    .vector("a", &a)
                    .vector("a1", &a1)
                    .vector("b", &b)
                    .rows("X", &x)
                    .value("lhs", lhs)
                    .value("rhs", rhs)
            });
        }
        Ok(t.finish())
    })
}

/// The five axioms of the reduced product `(a, b | x_1, ..., x_{n-1})`.
pub fn check_definition_1_1<F: NInnerProduct + ?Sized>(
    form: &F,
    cfg: &SampleConfig,
) -> Vec<AxiomReport> {
    vec![
        reduced_positivity(form, cfg),
        reduced_symmetry(form, cfg),
        reduced_exchange(form, cfg),
        reduced_homogeneity(form, cfg),
        reduced_additivity(form, cfg),
    ]
}

/// All eleven checks, ordered by axiom.
pub fn check_all<F: NInnerProduct + ?Sized>(form: &F, cfg: &SampleConfig) -> Vec<AxiomReport> {
    let mut reports = vec![
        check_axiom_positivity(form, cfg),
        check_axiom_symmetry(form, cfg),
        check_axiom_homogeneity(form, cfg),
        check_axiom_alternating(form, cfg),
        check_axiom_additivity(form, cfg),
        check_axiom_vi(form, cfg),
    ];
    reports.extend(check_definition_1_1(form, cfg));
    reports.sort_by_key(|r| r.axiom);
    reports
}

/// `fail` if any report fails, else `undecided` if any is undecided, else `pass`.
pub fn overall_verdict(reports: &[AxiomReport]) -> Verdict {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if reports.iter().any(|r| r.verdict == Verdict::Undecided) {
        Verdict::Undecided
    } else {
        Verdict::Pass
    }
}

/// A conforming form shifted by a constant: `<A|B> + bias`. Breaks
/// positivity on dependent tuples, homogeneity and additivity.
#[derive(Clone, Debug, PartialEq)]
pub struct BiasedForm<F> {
    pub inner: F,
    pub bias: f64,
}

impl<F: NInnerProduct> NInnerProduct for BiasedForm<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn order(&self) -> Option<usize> {
        self.inner.order()
    }

    fn evaluate(&self, a: &VectorTuple, b: &VectorTuple) -> Result<f64> {
        Ok(self.inner.evaluate(a, b)? + self.bias)
    }

    fn magnitude_bound(&self, order: usize) -> f64 {
        self.inner.magnitude_bound(order)
    }

    fn basis_product(&self, i: &IndexTuple, j: &IndexTuple) -> Result<f64> {
        Ok(self.inner.basis_product(i, j)? + self.bias)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ninner::{DiagonalNForm, GramNForm};

    #[test]
    fn standard_form_passes_everything() {
        for (m, n) in [(3, 1), (3, 2), (4, 2), (4, 3), (3, 3)] {
            let mut cfg = SampleConfig::new(m, n, 11);
            cfg.trials = 60;
            let reports = check_all(&GramNForm::standard(m), &cfg);
            assert_eq!(reports.len(), 11);
            for r in &reports {
                assert_eq!(r.verdict, Verdict::Pass, "{m} {n} {r:?}");
                assert!(r.max_residual <= cfg.tol);
            }
        }
    }

    #[test]
    fn biased_form_fails() {
        let form = BiasedForm {
            inner: GramNForm::standard(3),
            bias: 0.1,
        };
        let cfg = SampleConfig::new(3, 2, 0);
        let reports = check_all(&form, &cfg);
        assert_eq!(overall_verdict(&reports), Verdict::Fail);
        let pos = reports
            .iter()
            .find(|r| r.axiom == AxiomId::D21IPrime)
            .unwrap();
        assert_eq!(pos.verdict, Verdict::Fail);
        assert!(pos.witness.is_some());
    }

    #[test]
    fn unequal_diagonal_passes_linear_axioms() {
        let mut c = BTreeMap::new();
        c.insert(IndexTuple::new(vec![0, 1]).unwrap(), 2.0);
        let form = DiagonalNForm::new(3, 2, c).unwrap();
        let mut cfg = SampleConfig::new(3, 2, 4);
        cfg.trials = 60;
        for r in check_all(&form, &cfg) {
            if r.axiom != AxiomId::D21Vi {
                assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SampleConfig::new(4, 2, 99);
        let g = GramNForm::standard(4);
        assert_eq!(check_all(&g, &cfg), check_all(&g, &cfg));
    }

    #[test]
    fn invalid_config_is_undecided() {
        let cfg = SampleConfig::new(3, 4, 0);
        let r = check_axiom_symmetry(&GramNForm::standard(3), &cfg);
        assert_eq!(r.verdict, Verdict::Undecided);
    }

    #[test]
    fn axiom_codes_serialize() {
        let s = serde_json::to_string(&AxiomId::D21IPrime).unwrap();
        assert_eq!(s, "\"D21-i′\"");
        let v = serde_json::to_string(&Verdict::Undecided).unwrap();
        assert_eq!(v, "\"undecided\"");
    }
}
