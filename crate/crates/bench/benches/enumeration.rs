use criterion::{black_box, criterion_group, criterion_main, Criterion};
use doubling_core::census::enumerate_small_doubling;
use doubling_core::group::{parse_rational, GroupDescriptor};
use doubling_core::oracle::naive_small_doubling_count;

fn census_pruned_vs_naive(c: &mut Criterion) {
    let g = GroupDescriptor::integer_window(12).unwrap();
    let y = g.ground_set();
    let k = parse_rational("2").unwrap();
    let threshold = 8; // floor(2 * 4)

    let mut group = c.benchmark_group("census-n12-s4-k2");
    group.bench_function("pruned", |bench| {
        bench.iter(|| {
            let out = enumerate_small_doubling(&g, &y, 4, &k).unwrap();
            black_box(out.count)
        })
    });
    group.bench_function("naive", |bench| {
        bench.iter(|| black_box(naive_small_doubling_count(&g, &y, 4, threshold).unwrap()))
    });
    group.finish();
}

fn census_wide_window(c: &mut Criterion) {
    let g = GroupDescriptor::integer_window(18).unwrap();
    let y = g.ground_set();
    let k = parse_rational("5/2").unwrap();
    c.bench_function("census-n18-s4-k5/2-pruned", |bench| {
        bench.iter(|| {
            let out = enumerate_small_doubling(&g, &y, 4, &k).unwrap();
            black_box(out.count)
        })
    });
}

criterion_group!(benches, census_pruned_vs_naive, census_wide_window);
criterion_main!(benches);
