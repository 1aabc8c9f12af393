use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use symcc::approx::{approx_degree, trace_lower_bound, Precision};
use symcc::johnson::{eigenspace_oracle, hahn_table};
use symcc::matnorm::{approx_trace_norm_upper, trace_norm};
use symcc::predicate::comm_matrix;
use symcc::protosim::{acceptance_matrix, kremer_decompose, random_protocol, ProtocolDims, WeightMode};
use symcc::{InstanceFamily, SymmetricPredicate};

fn johnson(c: &mut Criterion) {
    let mut group = c.benchmark_group("johnson");
    for (n, k) in [(16, 4), (32, 8), (64, 16)] {
        group.bench_with_input(BenchmarkId::new("hahn_table", format!("{n}_{k}")), &(n, k), |b, &(n, k)| {
            b.iter(|| hahn_table(black_box(n), black_box(k)).unwrap())
        });
    }
    group.sample_size(10);
    group.bench_function("eigenspace_oracle_10_4", |b| b.iter(|| eigenspace_oracle(10, 4, 1).unwrap()));
    group.finish();
}

fn norms(c: &mut Criterion) {
    let mut group = c.benchmark_group("matnorm");
    let disj = SymmetricPredicate::disjointness(3);
    let m = comm_matrix(&InstanceFamily::new(9, 3, 1000).unwrap(), &disj).unwrap();
    group.bench_function("trace_norm_84", |b| b.iter(|| trace_norm(black_box(&m)).unwrap()));
    group.sample_size(10);
    group.bench_function("approx_trace_norm_84", |b| {
        b.iter(|| approx_trace_norm_upper(black_box(&m), 0.25).unwrap())
    });
    group.finish();
}

fn lp(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp");
    let thr = SymmetricPredicate::threshold(24, 4);
    group.bench_function("approx_degree_exact_24", |b| {
        b.iter(|| approx_degree(black_box(&thr), Precision::Exact).unwrap())
    });
    group.bench_function("approx_degree_float_24", |b| {
        b.iter(|| approx_degree(black_box(&thr), Precision::Float).unwrap())
    });
    let disj = SymmetricPredicate::disjointness(8);
    for prec in [Precision::Exact, Precision::Float] {
        group.bench_function(format!("phi_32_8_{prec:?}"), |b| {
            b.iter(|| trace_lower_bound(32, 8, black_box(&disj), 0.25, prec).unwrap())
        });
    }
    group.finish();
}

fn protocols(c: &mut Criterion) {
    let mut group = c.benchmark_group("protosim");
    group.sample_size(10);
    let spec = random_protocol(1, ProtocolDims::new(8, 2, 4), 4, WeightMode::Random).unwrap();
    group.bench_function("acceptance_matrix_8x8_c4", |b| b.iter(|| acceptance_matrix(black_box(&spec)).unwrap()));
    let small = random_protocol(2, ProtocolDims::new(4, 2, 2), 4, WeightMode::Uniform).unwrap();
    group.bench_function("kremer_decompose_c4", |b| b.iter(|| kremer_decompose(black_box(&small)).unwrap()));
    group.finish();
}

criterion_group!(benches, johnson, norms, lp, protocols);
criterion_main!(benches);
