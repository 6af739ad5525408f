use criterion::{black_box, criterion_group, criterion_main, Criterion};
use doubling_core::container::{build_container, replay_container, ContainerParams};
use doubling_core::group::{
    parse_rational, rational_from_u64, sumset, ElementSet, GroupDescriptor,
};
use doubling_core::hypergraph::{minimal_degree_condition_r, IndependentPair};
use doubling_core::sumset::{build_container_family, build_sum_hypergraph, TreeParams};

fn container_build_replay(c: &mut Criterion) {
    let g = GroupDescriptor::integer_window(10).unwrap();
    let y = g.ground_set();
    let h = build_sum_hypergraph(&g, &y, &ElementSet::empty(), &y).unwrap();
    let j = ElementSet::ints([1, 2]);
    let i = sumset(&g, &j, &j).unwrap();
    let (b, m, q) = (2, i.len() as u64, 2);
    let big_r = minimal_degree_condition_r(&h, b, m, q)
        .unwrap()
        .max(rational_from_u64(1));
    let params = ContainerParams::new(1, 2, big_r, b, m, q).unwrap();
    let pair = IndependentPair::new(i, j);

    c.bench_function("container-build-h-empty-y10", |bench| {
        bench.iter(|| black_box(build_container(&h, &pair, &params).unwrap()))
    });
    let outcome = build_container(&h, &pair, &params).unwrap();
    c.bench_function("container-replay-h-empty-y10", |bench| {
        bench.iter(|| black_box(replay_container(&h, &outcome.fingerprint, &params).unwrap()))
    });
}

fn tree_family_small(c: &mut Criterion) {
    let g = GroupDescriptor::integer_window(10).unwrap();
    let y = g.ground_set();
    let eps = parse_rational("0.24").unwrap();
    let k = parse_rational("2").unwrap();
    let census = doubling_core::census::enumerate_small_doubling(&g, &y, 2, &k).unwrap();
    let witness_pairs: Vec<(ElementSet, ElementSet)> = census
        .sets
        .iter()
        .map(|j| (sumset(&g, j, j).unwrap(), j.clone()))
        .collect();
    c.bench_function("tree-family-n10-s2-k2", |bench| {
        bench.iter(|| {
            let params = TreeParams::new(10, census.threshold, eps.clone()).unwrap();
            let refs: Vec<(&ElementSet, &ElementSet)> =
                witness_pairs.iter().map(|(i, j)| (i, j)).collect();
            black_box(build_container_family(&g, &y, &params, refs).unwrap().1)
        })
    });
}

criterion_group!(benches, container_build_replay, tree_family_small);
criterion_main!(benches);
