use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;

use hyperpart::chambers::enumerate_chambers;
use hyperpart::homology::{dual_basis_check_all, PairingMatrix};
use hyperpart::partition::{classify, PointSampler};
use hyperpart::stratify::Stratification;
use hyperpart::IntersectionPoset;
use hyperpart_bench::{analysis, arrangement};

const SHAPES: [(usize, usize); 3] = [(2, 6), (3, 6), (4, 8)];

fn chambers(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_chambers");
    for (dim, n) in SHAPES {
        let arr = arrangement(dim, n);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{dim}d_{n}")), &arr, |b, arr| {
            b.iter(|| enumerate_chambers(arr).unwrap())
        });
    }
    group.finish();
}

fn poset(c: &mut Criterion) {
    let mut group = c.benchmark_group("intersection_poset");
    for (dim, n) in SHAPES {
        let arr = arrangement(dim, n);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{dim}d_{n}")), &arr, |b, arr| {
            b.iter(|| IntersectionPoset::build(arr))
        });
    }
    group.finish();
}

fn stratify(c: &mut Criterion) {
    let mut group = c.benchmark_group("stratify");
    group.sample_size(10);
    for (dim, n) in SHAPES {
        let an = analysis(dim, n);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{dim}d_{n}")), &an, |b, an| {
            b.iter(|| Stratification::build(&an.arrangement, &an.poset, &an.chambers, &an.flag).unwrap())
        });
    }
    group.finish();
}

fn classify_points(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify_100_points");
    group.sample_size(10);
    for (dim, n) in SHAPES {
        let an = analysis(dim, n);
        let sampler = PointSampler::new(&an.arrangement, &an.poset);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let points: Vec<_> = (0..100).map(|_| sampler.sample(&mut rng)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{dim}d_{n}")), &points, |b, points| {
            b.iter(|| points.iter().map(|p| classify(&an, p).unwrap().chamber).sum::<usize>())
        });
    }
    group.finish();
}

fn homology(c: &mut Criterion) {
    let mut group = c.benchmark_group("homology");
    group.sample_size(10);
    let an = analysis(3, 6);
    group.bench_function("pairing_matrices_3d_6", |b| {
        b.iter(|| (0..=3).map(|q| PairingMatrix::build(&an, q).unwrap().len()).sum::<usize>())
    });
    group.bench_function("dual_checks_3d_6", |b| b.iter(|| dual_basis_check_all(&an).unwrap().0));
    group.finish();
}

criterion_group!(benches, chambers, poset, stratify, classify_points, homology);
criterion_main!(benches);
