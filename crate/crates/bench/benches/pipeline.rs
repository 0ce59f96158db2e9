use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use torsion_atlas::{
    classify_surface, classify_torsion, construct_lift, enumerate_kummer_zetas, generate_tables,
    partitions,
};
use torsion_atlas_bench::{deep_nilpotent, weil, SURFACES};

fn lifts(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct_lift");
    for d in [2usize, 4, 6] {
        let q = deep_nilpotent(3, d, 2 * d as u32 + 2);
        let all = partitions(d as u32);
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| {
                for p in &all {
                    black_box(construct_lift(&q, p).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn classification(c: &mut Criterion) {
    let f = weil(SURFACES[0].0, SURFACES[0].1);
    c.bench_function("classify_torsion/quartic", |b| {
        b.iter(|| classify_torsion(black_box(&f), 5).unwrap())
    });
    let mut group = c.benchmark_group("classify_surface");
    for (coeffs, q, ell) in SURFACES {
        let f = weil(coeffs, q);
        let name = format!("{coeffs:?}@{ell}");
        group.bench_function(name, |b| {
            b.iter(|| classify_surface(black_box(&f), ell).unwrap())
        });
    }
    group.finish();
}

fn kummer(c: &mut Criterion) {
    let f = weil(&[1, 0, 1, 0, 9], 3);
    c.bench_function("enumerate_kummer_zetas", |b| {
        b.iter(|| enumerate_kummer_zetas(black_box(&f)).unwrap())
    });
    c.bench_function("generate_tables", |b| b.iter(|| generate_tables().unwrap()));
}

criterion_group!(benches, lifts, classification, kummer);
criterion_main!(benches);
