use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use orderinv_bench::{group, small_catalog, LABELS};
use orderinv_core::matcher::find_divisibility_matching;
use orderinv_core::stats::{r_functional, t_functional};
use orderinv_core::structure::enumerate_subgroups;
use orderinv_core::sweep::{run_sweep, SweepOptions};
use orderinv_core::{ExactScalar, OrderProfile};

fn functionals(c: &mut Criterion) {
    let mut g = c.benchmark_group("functionals");
    let (r, s) = (ExactScalar::from_integer(-2), ExactScalar::from_integer(1));
    for label in LABELS {
        let grp = group(label);
        let n = grp.order() as u64;
        g.bench_with_input(BenchmarkId::new("profile+R", label), &grp, |b, grp| {
            b.iter(|| {
                let p = OrderProfile::of_group(black_box(grp));
                r_functional(&p, n, &r, &s).unwrap()
            })
        });
        let p = OrderProfile::of_group(&grp);
        g.bench_with_input(BenchmarkId::new("T", label), &p, |b, p| b.iter(|| t_functional(black_box(p), n, &r, &s).unwrap()));
    }
    g.finish();
}

fn subgroups(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_subgroups");
    g.sample_size(20);
    for label in ["S4", "E2^4", "Q8xC3", "D32"] {
        let grp = group(label);
        g.bench_with_input(BenchmarkId::from_parameter(label), &grp, |b, grp| {
            b.iter(|| enumerate_subgroups(black_box(grp)).unwrap().len())
        });
    }
    g.finish();
}

fn matching(c: &mut Criterion) {
    let mut g = c.benchmark_group("divisibility_matching");
    for label in ["A5", "S5", "E2^6", "C15:C4"] {
        let p = OrderProfile::of_group(&group(label));
        g.bench_with_input(BenchmarkId::from_parameter(label), &p, |b, p| b.iter(|| find_divisibility_matching(black_box(p))));
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let catalog = small_catalog();
    let opts = SweepOptions { workers: Some(1), ..Default::default() };
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("small_catalog", |b| b.iter(|| run_sweep(black_box(&catalog), &opts)));
    g.finish();
}

criterion_group!(benches, functionals, subgroups, matching, sweep);
criterion_main!(benches);
