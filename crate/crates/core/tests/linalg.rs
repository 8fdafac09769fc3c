use lincg::io::{builtin_problem, BuiltinFamily, BuiltinProblemSpec, RhsMode};
use lincg::linalg::{
    condition_estimate, dot, generate_spd, random_orthogonal, spd_validate, Cholesky, Distribution, SpdCertificate,
    SpdMatrix, SpectrumSpec, SymMatrix,
};
use lincg::par::Execution;
use lincg::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn oracle_eigenvalues(a: &SymMatrix) -> Vec<f64> {
    let n = a.order();
    let m = DMatrix::from_row_slice(n, n, &a.to_dense());
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn sparse_spd(n: usize, seed: u64) -> SymMatrix {
    // banded, diagonally dominant
    let mut t = Vec::new();
    for i in 0..n {
        let mut off = 0.0;
        for w in 1..=3 {
            if i + w < n {
                let v = (((i * 31 + w * 7) as u64 ^ seed) % 97) as f64 / 97.0 - 0.5;
                t.push((i, i + w, v));
                t.push((i + w, i, v));
                off += v.abs();
            }
            if i >= w {
                let v = ((((i - w) * 31 + w * 7) as u64 ^ seed) % 97) as f64 / 97.0 - 0.5;
                off += v.abs();
            }
        }
        t.push((i, i, off + 1.0));
    }
    SymMatrix::from_triplets(n, &t).unwrap()
}

fn vector(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e3f64..1e3, len)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn matvec_is_symmetric(
        (n, seed, u, v) in (1usize..=80, any::<u64>()).prop_flat_map(|(n, s)| (Just(n), Just(s), vector(n), vector(n)))
    ) {
        let a = generate_spd(n, &SpectrumSpec::with_condition(100.0), seed).unwrap();
        let uav = dot(&u, &a.matvec(&v).unwrap()).unwrap();
        let vau = dot(&v, &a.matvec(&u).unwrap()).unwrap();
        let scale = lincg::linalg::norm(&u) * lincg::linalg::norm(&v) * a.frobenius_norm();
        prop_assert!((uav - vau).abs() <= 1e-12 * scale);
    }

    #[test]
    fn dense_and_sparse_matvec_agree(
        (n, seed, v) in (1usize..=120, any::<u64>()).prop_flat_map(|(n, s)| (Just(n), Just(s), vector(n)))
    ) {
        let sparse = sparse_spd(n, seed);
        let dense = sparse.densified();
        prop_assert!(sparse.is_sparse() && !dense.is_sparse());
        let ys = sparse.matvec(&v).unwrap();
        let yd = dense.matvec(&v).unwrap();
        for (a, b) in ys.iter().zip(&yd) {
            prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(b.abs()));
        }
        for exec in [Execution::Sequential, Execution::Parallel] {
            prop_assert_eq!(&sparse.matvec_with(&v, exec).unwrap(), &ys);
            prop_assert_eq!(&dense.matvec_with(&v, exec).unwrap(), &yd);
        }
    }

    #[test]
    fn generated_spectrum_is_planted(
        n in 1usize..=60,
        log_kappa in 0.0f64..4.0,
        distribution in prop_oneof![
            Just(Distribution::LogUniform),
            Just(Distribution::Linear),
            Just(Distribution::Clustered)
        ],
        seed in any::<u64>(),
    ) {
        let spec = SpectrumSpec::Range { min: 1.0, max: 10f64.powf(log_kappa), distribution };
        let planted = spec.eigenvalues(n).unwrap();
        let a = generate_spd(n, &spec, seed).unwrap();
        let sum: f64 = planted.iter().sum();
        prop_assert!((a.trace() - sum).abs() <= 1e-10 * sum);
        prop_assert!(spd_validate(&a).is_ok());
        let oracle = oracle_eigenvalues(&a);
        let lmax = planted.iter().copied().fold(0.0, f64::max);
        for (o, p) in oracle.iter().zip(&planted) {
            prop_assert!((o - p).abs() <= 1e-10 * lmax, "oracle {o} planted {p}");
        }
    }

    #[test]
    fn cholesky_solves(n in 1usize..=50, seed in any::<u64>()) {
        let a = generate_spd(n, &SpectrumSpec::with_condition(50.0), seed).unwrap();
        let chol = a.cholesky().unwrap();
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).cos()).collect();
        let b = a.matvec(&x).unwrap();
        let y = chol.solve(&b).unwrap();
        let err: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        prop_assert!(lincg::linalg::norm(&err) <= 1e-12 * 50.0 * lincg::linalg::norm(&x));
    }
}

#[test]
fn orthogonal_factor_is_orthogonal() {
    for n in [1, 2, 17, 150] {
        let q = random_orthogonal(n, 42);
        let m = DMatrix::from_row_slice(n, n, &q);
        let defect = (m.transpose() * &m - DMatrix::<f64>::identity(n, n)).amax();
        assert!(defect <= 1e-14, "n={n}: {defect:e}");
    }
}

#[test]
fn explicit_spectrum_is_reproduced() {
    let eigs = vec![1.0, 2.0, 2.0, 9.0, 30.0];
    let a = generate_spd(5, &SpectrumSpec::Explicit(eigs.clone()), 3).unwrap();
    for (o, p) in oracle_eigenvalues(&a).iter().zip(&eigs) {
        assert!((o - p).abs() <= 1e-12 * 30.0);
    }
    let kappa = condition_estimate(&a).unwrap();
    assert!((kappa - 30.0).abs() <= 1e-6 * 30.0, "{kappa}");
}

#[test]
fn generation_is_seed_deterministic() {
    let spec = SpectrumSpec::with_condition(80.0);
    let a = generate_spd(300, &spec, 9).unwrap();
    let b = generate_spd(300, &spec, 9).unwrap();
    assert_eq!(a.to_dense(), b.to_dense());
    let c = generate_spd(300, &spec, 10).unwrap();
    assert_ne!(a.to_dense(), c.to_dense());
}

#[test]
fn hilbert_condition_grows_with_order() {
    let mut previous = 0.0;
    for n in 1..=12 {
        let p = builtin_problem(&BuiltinProblemSpec::new(BuiltinFamily::Hilbert, n, RhsMode::Ones)).unwrap();
        let ev = oracle_eigenvalues(p.matrix());
        let kappa = ev[n - 1] / ev[0];
        assert!(kappa > previous, "n={n}: {kappa:e} after {previous:e}");
        previous = kappa;
    }
    assert!(previous > 1e15);
}

#[test]
fn condition_estimate_tracks_oracle() {
    for (n, kappa) in [(10, 3.0), (40, 100.0), (100, 1e4)] {
        let a = generate_spd(n, &SpectrumSpec::with_condition(kappa), 1).unwrap();
        let est = condition_estimate(&a).unwrap();
        let ev = oracle_eigenvalues(&a);
        let truth = ev[n - 1] / ev[0];
        assert!(
            (est - truth).abs() <= 1e-3 * truth,
            "n={n}: est {est:e} oracle {truth:e}"
        );
    }
}

#[test]
fn validation_rejects_non_spd() {
    let indefinite = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    assert!(matches!(
        SpdMatrix::new(indefinite),
        Err(Error::NotPositiveDefinite { .. })
    ));
    let singular = SymMatrix::diagonal(&[1.0, 0.0]).unwrap();
    assert!(matches!(
        SpdMatrix::new(singular),
        Err(Error::NotPositiveDefinite { .. })
    ));
    assert!(matches!(
        SymMatrix::from_rows(&[vec![1.0, 0.5], vec![0.4, 1.0]]),
        Err(Error::Asymmetric { .. })
    ));
    assert!(matches!(
        SymMatrix::from_rows(&[vec![1.0, f64::NAN], vec![f64::NAN, 1.0]]),
        Err(Error::NonFinite { .. })
    ));
}

#[test]
fn small_matrices_are_certified_by_factorization() {
    let a = sparse_spd(100, 5);
    assert_eq!(spd_validate(&a).unwrap(), SpdCertificate::Factorized);
    let big = sparse_spd(lincg::linalg::DENSIFY_LIMIT + 1, 5);
    assert!(matches!(spd_validate(&big).unwrap(), SpdCertificate::Probable { .. }));
}

#[test]
fn cholesky_determinant() {
    let chol = Cholesky::factor(2, &[4.0, 2.0, 2.0, 3.0]).unwrap();
    assert!((chol.determinant() - 8.0).abs() <= 1e-14);
}
