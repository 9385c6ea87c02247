//! Benchmarks for the data-parallel kernels. Run with the default features
//! for the rayon build and with `--no-default-features` for the sequential
//! fallback; benchmark names carry the mode so both sets can be compared.

use criterion::{criterion_group, criterion_main, Criterion};

use potgraph_core::graph::families;
use potgraph_core::seq::{enumerate_graphic, GraphicSequence};
use potgraph_core::{bmdt_embed, Oracle};

const MODE: &str = if cfg!(feature = "parallel") {
    "parallel"
} else {
    "sequential"
};

fn bench_sigma_exact(c: &mut Criterion) {
    let oracle = Oracle::new(10);
    let k3 = families::complete(3);
    c.bench_function(&format!("sigma_exact_k3_n8/{MODE}"), |b| {
        b.iter(|| oracle.sigma_exact(&k3, 8).unwrap().sigma)
    });
}

fn bench_nonpotential_scan(c: &mut Criterion) {
    let oracle = Oracle::new(10);
    let k4 = families::complete(4);
    c.bench_function(&format!("nonpotential_scan_k4_n10_s30/{MODE}"), |b| {
        b.iter(|| oracle.nonpotential_at_sum(&k4, 10, 30).unwrap().len())
    });
}

fn bench_enumeration(c: &mut Criterion) {
    c.bench_function(&format!("enumerate_graphic_n10/{MODE}"), |b| {
        b.iter(|| enumerate_graphic(10, None).count())
    });
}

fn bench_bmdt_embed(c: &mut Criterion) {
    let seq = GraphicSequence::from_unsorted(vec![4; 80]);
    let k3 = families::complete(3);
    c.bench_function(&format!("bmdt_embed_4regular_n80/{MODE}"), |b| {
        b.iter(|| bmdt_embed(&seq, &k3).unwrap().order())
    });
}

criterion_group!(
    benches,
    bench_sigma_exact,
    bench_nonpotential_scan,
    bench_enumeration,
    bench_bmdt_embed
);
criterion_main!(benches);
