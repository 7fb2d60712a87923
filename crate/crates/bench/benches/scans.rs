use collatz_matrix::criterion::RankCensus;
use collatz_matrix::matrices::{structure_bitmap, Window};
use collatz_matrix::mersenne::nc_histogram_bounded;
use collatz_matrix::symmetry::correlation_scan;
use collatz_matrix::{AlgoParam, ScanRecord};
use criterion::{criterion_group, criterion_main, Criterion};

fn scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("scans");
    g.sample_size(10);
    g.bench_function("rank census to 10^5", |b| {
        b.iter(|| RankCensus::build(100_000))
    });
    g.bench_function("correlation scan to 2001", |b| {
        b.iter(|| correlation_scan(2001))
    });
    g.bench_function("width histogram n <= 19 to 199999", |b| {
        b.iter(|| nc_histogram_bounded(19, 199_999))
    });
    g.bench_function("scan records 3..999", |b| {
        b.iter(|| {
            (3..=999u64)
                .step_by(2)
                .map(|a| ScanRecord::build(AlgoParam::new(a).unwrap()).unwrap())
                .collect::<Vec<_>>()
        })
    });
    g.bench_function("big bitmap a = 51", |b| {
        b.iter(|| structure_bitmap(AlgoParam::new(51).unwrap(), Window::Big))
    });
    g.finish();
}

criterion_group!(benches, scans);
criterion_main!(benches);
