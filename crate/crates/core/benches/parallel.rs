//! Sequential against rayon execution on the hot paths. Without the
//! `parallel` feature both arms run the sequential code.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use lincg::batch::{verify_batch, RandomEnsemble};
use lincg::cg::{solve, SolverConfig};
use lincg::linalg::{generate_spd, Distribution, SpectrumSpec};
use lincg::par::Execution;
use lincg::verify::{TolerancePolicy, Verifier};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn matvec(c: &mut Criterion) {
    let mut group = c.benchmark_group("matvec_dense");
    for n in [500, 2000] {
        let a = generate_spd(n, &SpectrumSpec::with_condition(100.0), 1).unwrap();
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| a.matvec_with(black_box(&x), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn gradient_conjugacy(c: &mut Criterion) {
    let mut group = c.benchmark_group("gradient_conjugacy_check");
    group.sample_size(20);
    let n = 400;
    let problem = lincg::io::builtin_problem(&lincg::io::BuiltinProblemSpec::new(
        lincg::io::BuiltinFamily::RandomSpd {
            spectrum: SpectrumSpec::with_condition(100.0),
            seed: 2,
        },
        n,
        lincg::io::RhsMode::Random { seed: 2 },
    ))
    .unwrap();
    let trace = solve(&problem, &vec![0.0; n], &SolverConfig::traced()).unwrap().trace;
    for (name, exec) in MODES {
        let verifier = Verifier::new(TolerancePolicy::strict()).with_execution(exec);
        group.bench_function(name, |b| {
            b.iter(|| {
                verifier
                    .gradient_conjugacy(black_box(&trace), problem.matrix())
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn ensemble(c: &mut Criterion) {
    let mut group = c.benchmark_group("ensemble_verify");
    group.sample_size(10);
    let spec = RandomEnsemble {
        count: 24,
        orders: vec![50, 200],
        min_condition: 2.0,
        max_condition: 100.0,
        distribution: Distribution::LogUniform,
        base_seed: 7,
    };
    let problems = spec.build(Execution::Parallel).unwrap();
    let config = SolverConfig::traced();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| verify_batch(black_box(&problems), &config, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, matvec, gradient_conjugacy, ensemble);
criterion_main!(benches);
