use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lca_core::conformal::check_jacobi;
use lca_core::families::{make_cl2, make_scl2};
use lca_core::{Execution, ParamPoly, Scalar};

fn jacobi(c: &mut Criterion) {
    let (b, s) = (ParamPoly::param("b"), ParamPoly::param("s"));
    let cases = [
        ("CL2", make_cl2(&b, &s, -6..=6).unwrap()),
        ("SCL2", make_scl2(&Scalar::new(1, 2), &s, -6..=6).unwrap()),
    ];
    let mut group = c.benchmark_group("check_jacobi");
    group.sample_size(10);
    for (name, alg) in &cases {
        for exec in [Execution::Sequential, Execution::Parallel] {
            group.bench_with_input(
                BenchmarkId::new(*name, format!("{exec:?}")),
                alg,
                |bch, a| bch.iter(|| check_jacobi(a, exec)),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, jacobi);
criterion_main!(benches);
