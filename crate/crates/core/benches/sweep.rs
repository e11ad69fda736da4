use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use swarmlink::analysis::enumerate::enumerate_all_with;
use swarmlink::analysis::flow::TransitionDiagram;
use swarmlink::analysis::DEFAULT_GUARD;
use swarmlink::codec::{build_fixed_code, transmit_all, Scheme};
use swarmlink::{Exec, GridGraph};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn codeword_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("codeword_sweep");
    group.sample_size(10);
    let g = GridGraph::strip(60).unwrap();
    for (scheme, k) in [(Scheme::Alg2, 12), (Scheme::Alg1, 19)] {
        let code = build_fixed_code(scheme, k, scheme.capacity(k).unwrap() as usize).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, format!("{scheme}-k{k}")), &code, |b, code| {
                b.iter(|| transmit_all(&g, code, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(10);
    let g = GridGraph::eight_grid(8, 8).unwrap();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "8x8-k5"), |b| {
            b.iter(|| enumerate_all_with(&g, 5, DEFAULT_GUARD, exec).unwrap())
        });
    }
    group.finish();
}

fn diagram(c: &mut Criterion) {
    let mut group = c.benchmark_group("transition_diagram");
    group.sample_size(10);
    let g = GridGraph::strip(10).unwrap();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "strip10-k6"), |b| {
            b.iter(|| TransitionDiagram::build(&g, 6, DEFAULT_GUARD, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, codeword_sweep, enumeration, diagram);
criterion_main!(benches);
