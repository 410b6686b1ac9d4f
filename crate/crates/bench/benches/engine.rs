use std::hint::black_box;

use cherednik_bench::{sample_polys, SWEEP_GRID};
use cherednik_core::{
    compute_hilbert, is_in_kernel, parse_poly, DunklContext, FastEval, GradedKernel, HilbertRequest,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

/// The grid run cell by cell, without a cache.
fn sweep(t: u8) -> usize {
    SWEEP_GRID
        .iter()
        .map(|&(p, n)| compute_hilbert(&HilbertRequest::new(p, n, t)).unwrap().dims_l.len())
        .sum()
}

fn dunkl(c: &mut Criterion) {
    let mut g = c.benchmark_group("dunkl_difference");
    for n in [4, 6, 8] {
        let ctx = DunklContext::generic(3, n).unwrap();
        let fs = sample_polys(&ctx, 4, 8, n as u64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &fs, |b, fs| {
            b.iter(|| {
                for f in fs {
                    black_box(ctx.dunkl_difference(f, 0, n - 1).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel_run");
    g.sample_size(10);
    for (p, n) in [(2u64, 7usize), (3, 7), (5, 6)] {
        g.bench_function(format!("t0_p{p}_n{n}"), |b| {
            b.iter(|| {
                let mut k = GradedKernel::new(DunklContext::rational(p, n).unwrap());
                black_box(k.run(n + 10, 2).unwrap())
            })
        });
    }
    for n in [3usize, 5] {
        g.bench_function(format!("t1_p2_n{n}"), |b| {
            b.iter(|| {
                let mut k = GradedKernel::new(DunklContext::generic(2, n).unwrap());
                black_box(k.run(n + 10, 2).unwrap())
            })
        });
    }
    g.bench_function("t1_p2_n5_fast_eval", |b| {
        let mut req = HilbertRequest::new(2, 5, 1);
        req.fast_eval = Some(FastEval { trials: 1, seed: 3 });
        b.iter(|| black_box(compute_hilbert(&req).unwrap()))
    });
    g.finish();
}

fn membership(c: &mut Criterion) {
    let ctx = DunklContext::generic(2, 7).unwrap();
    let f = parse_poly("x1^4*x2^4", 6, ctx.ring()).unwrap();
    c.bench_function("is_in_kernel_x1^4x2^4_n7", |b| b.iter(|| black_box(is_in_kernel(&ctx, &f).unwrap())));
}

fn grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("t0_grid", |b| b.iter(|| black_box(sweep(0))));
    g.finish();
}

criterion_group!(benches, dunkl, kernel, membership, grid);
criterion_main!(benches);
