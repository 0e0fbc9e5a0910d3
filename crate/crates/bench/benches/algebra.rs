use std::hint::black_box;

use bilv_core::integrals::{deformed_casimir, k_b_expansion};
use bilv_core::lax::{char_poly_lax, lax_residual};
use bilv_core::poisson::{Bracket, BracketKind, ConstantStructure};
use bilv_core::indexsets::enumerate_s;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn index_sets(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_s");
    for k in [3usize, 5, 7] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| (0..=k).map(|l| enumerate_s(black_box(k), l).len()).sum::<usize>())
        });
    }
    g.finish();
}

fn integrals(c: &mut Criterion) {
    let mut g = c.benchmark_group("k_b_expansion");
    for k in 1..=4 {
        let b = ConstantStructure::symbolic(k);
        g.bench_with_input(BenchmarkId::from_parameter(k), &b, |bn, b| bn.iter(|| k_b_expansion(black_box(b))));
    }
    g.finish();
}

fn casimir_bracket(c: &mut Criterion) {
    let b = ConstantStructure::symbolic(3);
    let cas = deformed_casimir(&b);
    let br = Bracket::new(&BracketKind::Deformed(b));
    c.bench_function("casimir_bracket_k3", |bn| {
        bn.iter(|| (1..=7).all(|i| br.apply(&bilv_core::Poly::x(i), black_box(&cas)).unwrap().is_zero()))
    });
}

fn lax(c: &mut Criterion) {
    let mut g = c.benchmark_group("lax");
    g.sample_size(10);
    for k in 1..=3 {
        let b = ConstantStructure::symbolic(k);
        g.bench_with_input(BenchmarkId::new("residual", k), &b, |bn, b| bn.iter(|| lax_residual(black_box(b))));
        g.bench_with_input(BenchmarkId::new("char_poly", k), &b, |bn, b| bn.iter(|| char_poly_lax(black_box(b))));
    }
    g.finish();
}

criterion_group!(benches, index_sets, integrals, casimir_bracket, lax);
criterion_main!(benches);
