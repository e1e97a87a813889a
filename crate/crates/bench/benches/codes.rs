use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use grscrack::schemes::random_error;
use grscrack::vector;
use grscrack_bench::{field, grs, random_code, rng};
use std::hint::black_box;

fn square_dim(c: &mut Criterion) {
    let mut group = c.benchmark_group("square_dim");
    for (q, n, k) in [(64u64, 40usize, 10usize), (251, 200, 15), (128, 148, 79)] {
        let code = random_code(q, n, k, 1);
        group.bench_with_input(BenchmarkId::from_parameter(format!("q{q}_n{n}_k{k}")), &code, |b, code| {
            b.iter(|| black_box(code.square_dim()))
        });
    }
    group.finish();
}

fn grs_decode(c: &mut Criterion) {
    let mut group = c.benchmark_group("grs_decode");
    for (q, n, k) in [(64u64, 40usize, 12usize), (256, 255, 127)] {
        let spec = grs(q, n, k, 2);
        let f = field(q);
        let mut g = rng(3);
        let cw = spec.encode(&f.random_vec(k, &mut g));
        let received = vector::add(&f, &cw, &random_error(&f, n, spec.capacity(), &mut g));
        group.bench_with_input(BenchmarkId::from_parameter(format!("q{q}_n{n}_k{k}")), &received, |b, r| {
            b.iter(|| black_box(spec.decode(r).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, square_dim, grs_decode);
criterion_main!(benches);
