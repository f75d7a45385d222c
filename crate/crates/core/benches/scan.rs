//! Sequential against rayon-parallel execution of the two data-parallel
//! kernels: the energy scan of a shooting spectrum and real-root isolation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qes_core::bdpoly::{bd_second, isolate_real_roots_with};
use qes_core::params::SexticProblem;
use qes_core::rational::{q, qi};
use qes_core::shoot::{spectrum_sextic, BvpSpec};

fn scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("sextic_spectrum");
    group.sample_size(10);
    let p = SexticProblem::new(qi(0), qi(0));
    for parallel in [false, true] {
        let spec = BvpSpec {
            parallel,
            ..BvpSpec::default()
        };
        let label = if parallel { "parallel" } else { "sequential" };
        group.bench_with_input(BenchmarkId::new(label, 5), &spec, |b, spec| {
            b.iter(|| spectrum_sextic(&p, 5, spec).unwrap())
        });
    }
    group.finish();
}

fn roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("root_isolation");
    group.sample_size(10);
    // P_24 at α = 0, l = 1/3: degree 24, all roots real
    let poly = bd_second(&qi(0), &q(1, 3), 24);
    for parallel in [false, true] {
        let label = if parallel { "parallel" } else { "sequential" };
        group.bench_function(BenchmarkId::new(label, 24), |b| b.iter(|| isolate_real_roots_with(&poly, 256, parallel)));
    }
    group.finish();
}

criterion_group!(benches, scan, roots);
criterion_main!(benches);
