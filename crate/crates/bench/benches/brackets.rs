use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rotvec_bench::{half_dq1, profile_hamiltonian};
use rotvec_core::{bracket, pb_upper_bound, sup_norm, NelderMeadOptions, PbOptions, PbProblem, PhaseSpace};

fn pointwise(c: &mut Criterion) {
    let space = PhaseSpace::standard_torus(1);
    let f = profile_hamiltonian(12);
    let alpha = half_dq1();
    c.bench_function("bracket_profile12", |b| {
        b.iter(|| bracket(&f, &alpha, &space, black_box(&[0.3, 0.7]), 0.0).unwrap())
    });
}

fn certified(c: &mut Criterion) {
    let space = PhaseSpace::standard_torus(1);
    let alpha = half_dq1();
    let mut group = c.benchmark_group("certified_sup");
    for modes in [4usize, 12, 16] {
        let f = profile_hamiltonian(modes);
        for res in [512usize, 4096] {
            group.bench_with_input(BenchmarkId::new(format!("modes{modes}"), res), &res, |b, &r| {
                b.iter(|| sup_norm(&f, &alpha, &space, r, true).unwrap())
            });
        }
    }
    group.finish();
}

fn small_pb(c: &mut Criterion) {
    let problem = PbProblem::lagrangian_pair(1, 4, 16).unwrap();
    let opts = PbOptions {
        restarts: 2,
        nelder_mead: NelderMeadOptions {
            max_evals: 100,
            ..NelderMeadOptions::default()
        },
        grid_res: 512,
        ..PbOptions::default()
    };
    let mut group = c.benchmark_group("pb");
    group.sample_size(10);
    group.bench_function("lagrangian_pair_modes4", |b| b.iter(|| pb_upper_bound(&problem, &opts).unwrap()));
    group.finish();
}

criterion_group!(benches, pointwise, certified, small_pb);
criterion_main!(benches);
