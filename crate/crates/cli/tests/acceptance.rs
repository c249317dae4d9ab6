//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use grassmetric_core::axioms::{check_all, SampleConfig, Verdict};
use grassmetric_core::forms::increasing_tuples;
use grassmetric_core::linalg::{
    approx_eq, determinant_oracle, orthonormalize, Matrix, DEFAULT_RANK_TOL,
};
use grassmetric_core::sample::{
    dependent_tuple, gaussian_matrix, independent_tuple, random_invertible, random_orthogonal,
    random_spd, random_subspace_basis, rng, uniform_matrix, uniform_tuple, uniform_vector,
    SampleRng,
};
use grassmetric_core::{
    cauchy_schwarz, complementary_minor, decompose, determinant, dual_angle_check, form_inner,
    generalized_delta, grassmann_distance, is_orthogonal_to_subspace, laplace_identity_check,
    misiak_reduce, n_inner, pluecker_norm, wedge_of_tuple, DiagonalNForm, EqualityCase, GramNForm,
    NInnerForm, Subspace, SubspacePair,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn axiom_soundness() -> Check {
    let shapes = [(2, 1), (3, 2), (4, 2), (4, 3), (5, 3)];
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for (m, n) in shapes {
        for k in 0..10u64 {
            let g =
                GramNForm::new(random_spd(&mut rng(k, (100 * m + n) as u64), m)).map_err(err)?;
            let mut cfg = SampleConfig::new(m, n, k);
            cfg.trials = 200;
            cfg.tol = 1e-8;
            for r in check_all(&g, &cfg) {
                ensure(r.verdict == Verdict::Pass && r.max_residual <= 1e-8, || {
                    format!(
                        "m={m} n={n} ambient #{k}: {} {:?} residual {:e}",
                        r.axiom, r.verdict, r.max_residual
                    )
                })?;
                worst = worst.max(r.max_residual);
            }
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} ambients x 11 axioms x 200 trials, max residual {worst:.1e}"
    ))
}

fn cauchy_schwarz_suite() -> Check {
    let shapes = [(3, 2), (4, 2), (4, 3), (5, 3)];
    let mut pairs = 0;
    for (m, n) in shapes {
        let mut r = rng(2, (10 * m + n) as u64);
        let forms: Vec<NInnerForm> = vec![
            GramNForm::standard(m).into(),
            GramNForm::new(random_spd(&mut r, m)).map_err(err)?.into(),
            DiagonalNForm::uniform(m, n, 1.5).map_err(err)?.into(),
        ];
        for f in &forms {
            for _ in 0..1000 {
                let a = uniform_tuple(&mut r, n, m);
                let b = uniform_tuple(&mut r, n, m);
                cauchy_schwarz(f, &a, &b, 1e-9).map_err(err)?;
                pairs += 1;
            }
        }
        let g = GramNForm::standard(m);
        for _ in 0..100 {
            let a = uniform_tuple(&mut r, n, m);
            let d = dependent_tuple(&mut r, n, m);
            let s = independent_tuple(&mut r, n, m, DEFAULT_RANK_TOL, 100)
                .ok_or("no independent tuple")?;
            let same = s.transformed(&random_invertible(&mut r, n)).map_err(err)?;
            let cases = [
                (
                    cauchy_schwarz(&g, &d, &a, 1e-9).map_err(err)?,
                    EqualityCase::ADependent,
                ),
                (
                    cauchy_schwarz(&g, &a, &d, 1e-9).map_err(err)?,
                    EqualityCase::BDependent,
                ),
                (
                    cauchy_schwarz(&g, &s, &same, 1e-9).map_err(err)?,
                    EqualityCase::SameSubspace,
                ),
            ];
            for (v, want) in cases {
                ensure(v.case == want && v.equality, || {
                    format!("m={m} n={n}: expected {want:?}, got {v:?}")
                })?;
            }
        }
    }
    Ok(format!(
        "{pairs} random pairs within bound; 3 x 100 x 4 equality cases classified"
    ))
}

/// Least-squares projection from the normal equations, solved by Cramer's rule.
fn least_squares_projection(b: &Matrix, x: &[f64]) -> Vec<f64> {
    let n = b.nrows();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
    let normal = Matrix::new(
        n,
        n,
        (0..n * n)
            .map(|k| dot(b.row(k / n), b.row(k % n)))
            .collect(),
    )
    .unwrap();
    let rhs: Vec<f64> = (0..n).map(|i| dot(b.row(i), x)).collect();
    let d = determinant_oracle(&normal).unwrap();
    let lambda: Vec<f64> = (0..n)
        .map(|j| {
            let mut mj = normal.clone();
            for i in 0..n {
                mj[(i, j)] = rhs[i];
            }
            determinant_oracle(&mj).unwrap() / d
        })
        .collect();
    (0..b.ncols())
        .map(|c| (0..n).map(|i| lambda[i] * b[(i, c)]).sum())
        .collect()
}

fn decomposition_suite() -> Check {
    let shapes = [(3, 1), (3, 2), (4, 2), (5, 3), (6, 3)];
    let mut r = rng(3, 0);
    let mut worst: f64 = 0.0;
    for k in 0..500 {
        let (m, n) = shapes[k % shapes.len()];
        let s = Subspace::new(random_subspace_basis(&mut r, m, n)).map_err(err)?;
        let x = uniform_vector(&mut r, m);
        let g = GramNForm::standard(m);
        let d = decompose(&g, &x, &s).map_err(err)?;
        ensure(
            is_orthogonal_to_subspace(&g, &d.residual, &s, 1e-8).map_err(err)?,
            || format!("residual not orthogonal at trial {k}"),
        )?;
        let want = least_squares_projection(s.basis().as_matrix(), &x);
        for (p, q) in d.projection().iter().zip(&want) {
            worst = worst.max((p - q).abs());
        }
        ensure(worst <= 1e-8, || {
            format!("projection off by {worst:e} at trial {k}")
        })?;
    }
    Ok(format!(
        "500 decompositions orthogonal; max deviation from least squares {worst:.1e}"
    ))
}

fn determinant_suite() -> Check {
    let mut r = rng(4, 0);
    for k in 0..1000 {
        let size = 1 + k % 5;
        let a = uniform_matrix(&mut r, size, size);
        let lu = determinant(&a).map_err(err)?;
        let oracle = determinant_oracle(&a).map_err(err)?;
        ensure(approx_eq(lu, oracle, 1e-9, 1e-12), || {
            format!("{size}x{size}: {lu} vs {oracle}")
        })?;
    }
    Ok("1000 matrices, k <= 5, LU agrees with permutation sum".into())
}

fn random_subspace(r: &mut SampleRng, m: usize, n: usize) -> Result<Subspace, String> {
    Subspace::new(random_subspace_basis(r, m, n)).map_err(err)
}

fn grassmann_suite() -> Check {
    let mut worst_sym: f64 = 0.0;
    let mut worst_tri: f64 = f64::NEG_INFINITY;
    let mut worst_rebase: f64 = 0.0;
    for (m, n) in [(4, 2), (5, 2), (5, 3)] {
        let g = GramNForm::standard(m);
        let mut r = rng(5, (10 * m + n) as u64);
        let d = |a: &Subspace, b: &Subspace| -> Result<f64, String> {
            grassmann_distance(&g, &SubspacePair::new(a.clone(), b.clone()).map_err(err)?)
                .map_err(err)
        };
        for _ in 0..500 {
            let s = [
                random_subspace(&mut r, m, n)?,
                random_subspace(&mut r, m, n)?,
                random_subspace(&mut r, m, n)?,
            ];
            let d01 = d(&s[0], &s[1])?;
            worst_sym = worst_sym.max((d01 - d(&s[1], &s[0])?).abs());
            let (d12, d02) = (d(&s[1], &s[2])?, d(&s[0], &s[2])?);
            worst_tri = worst_tri
                .max(d02 - d01 - d12)
                .max(d01 - d02 - d12)
                .max(d12 - d01 - d02);
            let moved = s[0].rebased(&random_invertible(&mut r, n)).map_err(err)?;
            let moved2 = s[1].rebased(&random_invertible(&mut r, n)).map_err(err)?;
            worst_rebase = worst_rebase.max((d(&moved, &moved2)? - d01).abs());
        }
    }
    ensure(worst_sym <= 1e-12, || format!("symmetry gap {worst_sym:e}"))?;
    ensure(worst_tri <= 1e-9, || {
        format!("triangle excess {worst_tri:e}")
    })?;
    ensure(worst_rebase <= 1e-9, || {
        format!("re-basing changed distance by {worst_rebase:e}")
    })?;
    Ok(format!(
        "1500 triples: symmetry {worst_sym:.1e}, triangle excess {worst_tri:.1e}, re-basing {worst_rebase:.1e}"
    ))
}

fn duality_suite() -> Check {
    let mut worst: f64 = 0.0;
    for (m, n) in [(4, 2), (5, 2), (5, 3), (6, 3)] {
        let g = GramNForm::standard(m);
        let mut r = rng(6, (10 * m + n) as u64);
        for _ in 0..500 {
            let pair = SubspacePair::new(
                random_subspace(&mut r, m, n)?,
                random_subspace(&mut r, m, n)?,
            )
            .map_err(err)?;
            let c = dual_angle_check(&g, &pair).map_err(err)?;
            worst = worst.max(c.gap);
        }
    }
    ensure(worst < 1e-7, || format!("gap {worst:e}"))?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let pair = SubspacePair::new(
        Subspace::from_rows(&[[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]]).map_err(err)?,
        Subspace::from_rows(&[[h, 0.0, h, 0.0], [0.0, 1.0, 0.0, 0.0]]).map_err(err)?,
    )
    .map_err(err)?;
    let c = dual_angle_check(&GramNForm::standard(4), &pair).map_err(err)?;
    ensure(
        (c.primal_cosine.abs() - h).abs() <= 1e-12 && (c.dual_cosine.abs() - h).abs() <= 1e-12,
        || format!("hand example: {c:?}"),
    )?;
    Ok(format!(
        "2000 random pairs, max gap {worst:.1e}; R^4 example |cos| = 1/sqrt2 on both sides"
    ))
}

fn minor_suite() -> Check {
    let mut r = rng(7, 0);
    let mut checked = 0;
    for m in 2..=6 {
        for sign in [1.0, -1.0] {
            for _ in 0..100 {
                let a = random_orthogonal(&mut r, m, sign);
                for n in 1..m {
                    for idx in increasing_tuples(m, n) {
                        complementary_minor(&a, &idx).map_err(err)?;
                        checked += 1;
                    }
                }
            }
        }
    }
    for k in 0..200 {
        let m = 2 + k % 5;
        let a = uniform_matrix(&mut r, m, m);
        for n in 1..m {
            let res = laplace_identity_check(&a, n).map_err(err)?;
            ensure(res <= 1e-8, || {
                format!("Laplace residual {res:e} at m={m} n={n}")
            })?;
        }
    }
    for k in 0..200 {
        let m = 2 + k % 5;
        let n = 1 + k % (m - 1);
        let q = orthonormalize(&gaussian_matrix(&mut r, n, m)).map_err(err)?;
        let p = pluecker_norm(&q).map_err(err)?;
        ensure((p - 1.0).abs() <= 1e-8, || format!("Pluecker norm {p}"))?;
    }
    Ok(format!(
        "{checked} minor identities; 200 Laplace expansions; 200 Pluecker norms"
    ))
}

fn incidence_det(i: &[usize], j: &[usize]) -> f64 {
    let n = i.len();
    let entries = (0..n * n)
        .map(|k| if i[k / n] == j[k % n] { 1.0 } else { 0.0 })
        .collect();
    determinant_oracle(&Matrix::new(n, n, entries).unwrap()).unwrap()
}

/// Every ordered `n`-tuple of distinct indices below `m`.
fn ordered_tuples(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for t in &out {
            for i in (0..m).filter(|i| !t.contains(i)) {
                let mut longer = t.clone();
                longer.push(i);
                next.push(longer);
            }
        }
        out = next;
    }
    out
}

fn exterior_suite() -> Check {
    let mut r = rng(8, 0);
    for k in 0..500 {
        let m = 1 + k % 5;
        let n = 1 + (k / 5) % m;
        let g = GramNForm::new(random_spd(&mut r, m)).map_err(err)?;
        let a = uniform_tuple(&mut r, n, m);
        let b = uniform_tuple(&mut r, n, m);
        let via_forms = form_inner(
            &g,
            &wedge_of_tuple(&a).map_err(err)?,
            &wedge_of_tuple(&b).map_err(err)?,
        )
        .map_err(err)?;
        let direct = n_inner(&g, &a, &b).map_err(err)?;
        ensure(approx_eq(via_forms, direct, 1e-9, 1e-12), || {
            format!("m={m} n={n}: {via_forms} vs {direct}")
        })?;
    }
    let mut pairs = 0;
    for m in 1..=5 {
        for n in 1..=3.min(m) {
            let tuples = ordered_tuples(m, n);
            for i in &tuples {
                for j in &tuples {
                    ensure(
                        f64::from(generalized_delta(i, j)) == incidence_det(i, j),
                        || format!("delta {i:?} {j:?}"),
                    )?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!(
        "500 wedge pairs agree; {pairs} delta pairs match the incidence determinant"
    ))
}

fn reduction_suite() -> Check {
    let mut r = rng(9, 0);
    let none: [&[f64]; 0] = [];
    for k in 0..100 {
        let m = 1 + k % 6;
        let g = if k % 2 == 0 {
            GramNForm::standard(m)
        } else {
            GramNForm::new(random_spd(&mut r, m)).map_err(err)?
        };
        let a = uniform_vector(&mut r, m);
        let b = uniform_vector(&mut r, m);
        let reduced = misiak_reduce(&g, &a, &b, &none).map_err(err)?;
        let ambient = g.ambient_inner(&a, &b);
        ensure((reduced - ambient).abs() <= 1e-15, || {
            format!("{reduced} vs {ambient}")
        })?;
    }
    Ok("100 vector pairs: (a, b | ) equals the ambient inner product".into())
}

fn cli_suite() -> Check {
    let dir = std::env::temp_dir().join(format!("grassmetric-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let result = cli_checks(&dir);
    let _ = std::fs::remove_dir_all(&dir);
    result
}

fn cli_checks(dir: &Path) -> Check {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let write = |name: &str, text: &str| -> Result<String, String> {
        let p = dir.join(name);
        std::fs::write(&p, text).map_err(err)?;
        Ok(p.to_string_lossy().into_owned())
    };
    let a = write("a.csv", "1,0,0\n0,1,0\n")?;
    let b = write("b.csv", "1,0,0\n0,1,0\n")?;
    let s2 = write("s2.csv", &format!("1,0,0\n0,{h},{h}\n"))?;
    let bad = write("bad.csv", "1,2\n3\n")?;
    let invocations: [Vec<&str>; 3] = [
        vec![
            "inner",
            "--form",
            "gram:standard",
            "--left",
            &a,
            "--right",
            &b,
        ],
        vec![
            "check-axioms",
            "--form",
            "gram:standard",
            "--m",
            "4",
            "--n",
            "2",
            "--seed",
            "7",
            "--trials",
            "200",
        ],
        vec!["angle", "--left", &a, "--right", &s2],
    ];
    let exe = env!("CARGO_BIN_EXE_grassmetric");
    for args in &invocations {
        let first = Command::new(exe)
            .args(args)
            .env_remove("GRASSMETRIC_TOL")
            .output()
            .map_err(err)?;
        let second = Command::new(exe)
            .args(args)
            .env_remove("GRASSMETRIC_TOL")
            .output()
            .map_err(err)?;
        ensure(first.status.success(), || {
            format!("{args:?} exited {:?}", first.status.code())
        })?;
        ensure(first.stdout == second.stdout, || {
            format!("{args:?} output differs between runs")
        })?;
    }
    let out = Command::new(exe)
        .args(["norm", "--input", &bad])
        .output()
        .map_err(err)?;
    ensure(out.status.code() == Some(2), || {
        format!("malformed CSV exited {:?}", out.status.code())
    })?;
    Ok("3 documented invocations byte-identical across runs; malformed CSV exits 2".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("axiom soundness", axiom_soundness),
        ("Cauchy-Schwarz", cauchy_schwarz_suite),
        ("decomposition", decomposition_suite),
        ("determinant oracle", determinant_suite),
        ("Grassmann metric", grassmann_suite),
        ("complement duality", duality_suite),
        ("minor identities", minor_suite),
        ("exterior consistency", exterior_suite),
        ("reduction at n = 1", reduction_suite),
        ("CLI determinism", cli_suite),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail} ({secs:.2}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {detail} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
