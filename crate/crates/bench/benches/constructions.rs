use std::hint::black_box;
use std::sync::Arc;

use cohepow_core::clocked::{interpret, ClockedFunction, Numbering};
use cohepow_core::cohesive::{default_cohesive, CohesiveApprox};
use cohepow_core::order::{naturals, predecessor_census, rational_code, rationals};
use cohepow_core::power::{power_compare, successor_witness_search, PowerContext, PowerElement};
use cohepow_core::staged::{build_colored_dense, build_successor_breaker};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn breaker(c: &mut Criterion) {
    let mut g = c.benchmark_group("successor_breaker");
    g.sample_size(10);
    for stages in [500u64, 2000] {
        g.bench_with_input(BenchmarkId::from_parameter(stages), &stages, |b, &s| {
            b.iter(|| build_successor_breaker(Numbering::Interpreter, |x| x % 2 == 1, black_box(s)))
        });
    }
    let o = build_successor_breaker(Numbering::Interpreter, |x| x % 2 == 1, 2000);
    g.bench_function("census_0_to_30", |b| {
        b.iter(|| {
            (0..=30)
                .map(|z| predecessor_census(&o, z, u64::MAX, 2000))
                .sum::<u64>()
        })
    });
    g.finish();
}

fn colored(c: &mut Criterion) {
    let w = default_cohesive(&[]).unwrap().complement().clone();
    let gap = || {
        Numbering::Overlay(vec![
            ClockedFunction::rule("4n", |n| 4 * n),
            ClockedFunction::rule("8n", |n| 8 * n),
        ])
    };
    let mut g = c.benchmark_group("colored_dense");
    g.sample_size(10);
    g.bench_function("400_stages", |b| {
        b.iter(|| build_colored_dense(gap(), &w, black_box(400)).unwrap())
    });
    g.finish();
}

fn interpreter(c: &mut Criterion) {
    c.bench_function("interpret_first_64_programs", |b| {
        b.iter(|| {
            (0u64..64)
                .filter(|&e| interpret(&e.into(), black_box(3), 1000).value().is_some())
                .count()
        })
    });
}

fn power(c: &mut Criterion) {
    let window = Arc::new(default_cohesive(&[]).unwrap());
    let ctx = PowerContext::new(naturals(), window, 2000);
    let x = PowerElement::new(&ctx, ClockedFunction::rule("n²", |n| n * n)).unwrap();
    let y = PowerElement::new(&ctx, ClockedFunction::rule("n²+n", |n| n * n + n)).unwrap();
    c.bench_function("power_compare_default_window", |b| {
        b.iter(|| power_compare(black_box(&x), black_box(&y)).unwrap())
    });

    let small = Arc::new(CohesiveApprox::injected((1..=64).collect(), 64, "bench").unwrap());
    let q = PowerContext::new(rationals(), small, 2000);
    let lo =
        PowerElement::new(&q, ClockedFunction::constant(rational_code(0, 1).unwrap())).unwrap();
    let hi = PowerElement::new(
        &q,
        ClockedFunction::rule("1/(n+2)", |n| rational_code(1, n as i64 + 2).unwrap()),
    )
    .unwrap();
    c.bench_function("rational_between_search", |b| {
        b.iter(|| successor_witness_search(black_box(&lo), black_box(&hi)).unwrap())
    });
}

criterion_group!(benches, breaker, colored, interpreter, power);
criterion_main!(benches);
