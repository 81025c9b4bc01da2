use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rotvec_bench::{coupled_field, sin_squared_field, twisted_field};
use rotvec_core::suspension::suspension_flow;
use rotvec_core::{
    integrate, ExtendedPoint, HamiltonianSpec, IntegrationOptions, Method, PhaseSpace,
    SuspendedHamiltonian,
};

fn integrators(c: &mut Criterion) {
    let mut group = c.benchmark_group("integrate_t100");
    let cases = [
        ("sin_squared", sin_squared_field()),
        ("twisted", twisted_field()),
        ("coupled", coupled_field()),
    ];
    for (name, (field, x0)) in &cases {
        for method in [Method::ImplicitMidpoint, Method::Rk4] {
            let opts = IntegrationOptions {
                method,
                ..IntegrationOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(*name, format!("{method:?}")), &opts, |b, o| {
                b.iter(|| integrate(field, x0, black_box(100.0), *o).unwrap())
            });
        }
    }
    group.finish();
}

fn suspension(c: &mut Criterion) {
    let space = PhaseSpace::standard_torus(1);
    let h = SuspendedHamiltonian::new(HamiltonianSpec::forced_sin_squared(2, 0, 0.2));
    let z0 = ExtendedPoint::new(rotvec_core::wrap(&[0.2, 0.1], &space).unwrap(), 0.0, 0.0);
    c.bench_function("suspension_flow_t100", |b| {
        b.iter(|| suspension_flow(&h, &space, &z0, black_box(100.0), IntegrationOptions::default()).unwrap())
    });
}

criterion_group!(benches, integrators, suspension);
criterion_main!(benches);
