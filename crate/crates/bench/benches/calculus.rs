use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use smoothlab_bench::{dense, gaussian, operator};
use smoothlab_core::evolution::{smoothness_probe, DEFAULT_H_LADDER};
use smoothlab_core::forge::{forge, select_witnesses};
use smoothlab_core::region::criterion_check;
use smoothlab_core::spectral::{apply_symbol, domain_test, DEFAULT_CAP};
use smoothlab_core::{BorelSymbol, FamilyKind, RegionParams};

fn calculus(c: &mut Criterion) {
    let a = operator(FamilyKind::LogStrip { c: 1.0, p: 1.0 });
    let mut g = c.benchmark_group("apply_exp");
    for n in [100, 1_000, 10_000] {
        let f = dense(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| apply_symbol(&BorelSymbol::exp(0.5), &a, black_box(f), n).unwrap())
        });
    }
    g.finish();

    let f = gaussian();
    c.bench_function("domain_test_power_gaussian", |b| {
        b.iter(|| domain_test(&BorelSymbol::power(3), &a, black_box(&f), 10_000, DEFAULT_CAP).unwrap())
    });
    c.bench_function("smoothness_probe_order4", |b| {
        b.iter(|| smoothness_probe(&a, black_box(&f), 0.0, 4, &DEFAULT_H_LADDER, 10_000).unwrap())
    });
}

fn region(c: &mut Criterion) {
    let spec = operator(FamilyKind::LogStrip { c: 1.0, p: 1.0 }).spectrum().clone();
    let grid = RegionParams::default_grid();
    c.bench_function("criterion_check_log_strip_1000", |b| {
        b.iter(|| criterion_check(black_box(&spec), &grid, 1000).unwrap())
    });
}

fn witnesses(c: &mut Criterion) {
    let spec = operator(FamilyKind::ImaginaryExponential { r: 2.0 }).spectrum().clone();
    c.bench_function("select_witnesses_imaginary_exponential", |b| {
        b.iter(|| select_witnesses(black_box(&spec), 8, 10_000).unwrap())
    });
    c.bench_function("forge_imaginary_exponential", |b| {
        b.iter(|| {
            forge(
                black_box(&spec),
                8,
                10_000,
                &[-2.0, -1.0, 1.0, 2.0],
                10_000,
                DEFAULT_CAP,
            )
            .unwrap()
        })
    });
}

criterion_group!(benches, calculus, region, witnesses);
criterion_main!(benches);
