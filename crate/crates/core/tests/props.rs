//! Property tests for the structural invariants: sumset algebra, codegree
//! queries against the tuple-scan oracle, census pruning admissibility, and
//! the binomial estimates the counting arguments lean on.

use num::bigint::BigUint;
use num::BigInt;
use proptest::prelude::*;

use doubling_core::census::{binomial, enumerate_small_doubling};
use doubling_core::group::{
    parse_rational, rational_from_u64, sumset, ElementSet, GroupDescriptor, Rational,
};
use doubling_core::hypergraph::{BoundedHypergraph, Edge, IndependentPair};
use doubling_core::oracle;
use doubling_core::supersat::{deficient_pair_count, deficient_self_count};

fn int_set(max: i64, size: usize) -> impl Strategy<Value = ElementSet> {
    proptest::collection::btree_set(1..=max, 0..=size)
        .prop_map(|s| ElementSet::ints(s.into_iter().collect::<Vec<_>>()))
}

proptest! {
    #[test]
    fn sumset_commutative_and_monotone(
        a in int_set(10, 5),
        b in int_set(10, 5),
        extra in 1i64..=10,
    ) {
        let g = GroupDescriptor::integer_window(10).unwrap();
        let ab = sumset(&g, &a, &b).unwrap();
        let ba = sumset(&g, &b, &a).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert!(ab.len() <= a.len() * b.len());
        // enlarging one operand only enlarges the sumset
        let mut bigger = a.clone();
        bigger.insert(doubling_core::Element::Int(extra));
        let bigger_sum = sumset(&g, &bigger, &b).unwrap();
        prop_assert!(ab.is_subset(&bigger_sum));
    }

    #[test]
    fn census_pruning_is_admissible(
        n in 4u32..=10,
        s in 1usize..=3,
        num in 2u64..=4,
        den in 1u64..=2,
    ) {
        let g = GroupDescriptor::integer_window(n).unwrap();
        let y = g.ground_set();
        let k = Rational::new(BigInt::from(num), BigInt::from(den));
        if k < rational_from_u64(1) {
            return Ok(());
        }
        let census = enumerate_small_doubling(&g, &y, s, &k).unwrap();
        let naive = oracle::naive_small_doubling_count(&g, &y, s, census.threshold).unwrap();
        prop_assert_eq!(census.count, naive);
    }

    #[test]
    fn deficient_pair_identities(a in int_set(12, 6), b in int_set(8, 5)) {
        let g = GroupDescriptor::integer_window(12).unwrap();
        let deficient = deficient_pair_count(&g, &a, &b).unwrap();
        let self_deficient = deficient_self_count(&g, &a, &b).unwrap();
        let mut covered = 0u64;
        for x in b.iter() {
            for y in b.iter() {
                if a.contains(&g.add(x, y).unwrap()) {
                    covered += 1;
                }
            }
        }
        prop_assert_eq!(deficient + covered, (b.len() * b.len()) as u64);
        // ordered count = 2 * unordered edges - diagonal
        prop_assert!(self_deficient <= deficient);
        prop_assert_eq!((deficient + self_deficient) % 2, 0);
    }
}

/// Random (1,2)-bounded hypergraphs on parts of at most 4 + 4 vertices.
fn small_hypergraph() -> impl Strategy<Value = BoundedHypergraph> {
    (
        1usize..=4,
        1usize..=4,
        proptest::collection::vec((0usize..=4, 0usize..=4, 0usize..=4), 0..=10),
    )
        .prop_map(|(v0n, v1n, raw_edges)| {
            let v0 = ElementSet::ints((1..=v0n as i64).map(|x| 100 + x));
            let v1 = ElementSet::ints(1..=v1n as i64);
            let v0e: Vec<_> = v0.iter().cloned().collect();
            let v1e: Vec<_> = v1.iter().cloned().collect();
            let edges = raw_edges
                .into_iter()
                .map(|(c, a, b)| {
                    let e0 = if c == 0 {
                        ElementSet::empty()
                    } else {
                        ElementSet::singleton(v0e[(c - 1) % v0e.len()].clone())
                    };
                    let mut e1 = Vec::new();
                    if a > 0 {
                        e1.push(v1e[(a - 1) % v1e.len()].clone());
                    }
                    if b > 0 {
                        e1.push(v1e[(b - 1) % v1e.len()].clone());
                    }
                    Edge::new(e0, ElementSet::from_vec(e1))
                })
                .collect();
            BoundedHypergraph::build(v0, v1, 1, 2, edges).unwrap()
        })
}

proptest! {
    #[test]
    fn max_codegree_edge_scan_equals_tuple_scan(h in small_hypergraph()) {
        for l0 in 0..=1usize {
            for l1 in 0..=2usize {
                if l0 == 0 && l1 == 0 {
                    continue;
                }
                let fast = h.max_codegree(l0, l1).unwrap() as u64;
                let slow = oracle::max_codegree_tuple_scan(&h, l0, l1);
                prop_assert_eq!(fast, slow, "at ({}, {})", l0, l1);
            }
        }
    }

    #[test]
    fn codegree_monotone_under_constraints(h in small_hypergraph()) {
        let e = h.edge_count();
        prop_assert_eq!(h.codegree(&ElementSet::empty(), &ElementSet::empty()), e);
        for v in h.v1().iter() {
            let single = h.codegree(&ElementSet::empty(), &ElementSet::singleton(v.clone()));
            prop_assert!(single <= e);
            for w in h.v1().iter() {
                if w <= v {
                    continue;
                }
                let pair = h.codegree(
                    &ElementSet::empty(),
                    &ElementSet::from_vec(vec![v.clone(), w.clone()]),
                );
                prop_assert!(pair <= single);
            }
        }
    }

    #[test]
    fn independence_survives_edge_removal(h in small_hypergraph(), keep in 0usize..=10) {
        let pair = IndependentPair::new(
            h.v0().subsets_of_size(h.v0().len() / 2).into_iter().next().unwrap_or_default(),
            h.v1().subsets_of_size(h.v1().len() / 2).into_iter().next().unwrap_or_default(),
        );
        if h.is_independent(&pair) {
            let kept = h.edges().iter().take(keep.min(h.edge_count())).cloned().collect();
            let sub = BoundedHypergraph::build(h.v0().clone(), h.v1().clone(), 1, 2, kept).unwrap();
            prop_assert!(sub.is_independent(&pair));
        }
    }
}

#[test]
fn window_doubling_lower_bound_exhaustive() {
    // |A+A| >= 2|A| - 1 for every nonempty A inside [8], equality iff AP
    let g = GroupDescriptor::integer_window(8).unwrap();
    let ground: Vec<_> = g.ground_set().iter().cloned().collect();
    for mask in 1u32..(1 << 8) {
        let a = ElementSet::from_vec(
            (0..8)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| ground[i].clone())
                .collect(),
        );
        let aa = sumset(&g, &a, &a).unwrap();
        assert!(aa.len() >= 2 * a.len() - 1, "A = {a}");
        let is_ap = {
            let pts: Vec<i64> = a
                .iter()
                .map(|e| match e {
                    doubling_core::Element::Int(x) => *x,
                    _ => unreachable!(),
                })
                .collect();
            pts.len() <= 2
                || pts
                    .windows(2)
                    .map(|w| w[1] - w[0])
                    .collect::<std::collections::BTreeSet<_>>()
                    .len()
                    == 1
        };
        assert_eq!(aa.len() == 2 * a.len() - 1, is_ap, "A = {a}");
    }
}

#[test]
fn binomial_growth_estimate_holds_on_grid() {
    // binom(cn, k) <= ((cn-k)/(n-k))^k binom(n, k) for integer c >= 1, k < n
    for n in 2u64..=24 {
        for c in 1u64..=3 {
            for k in 1..n {
                let lhs = binomial(c * n, k);
                let base = binomial(n, k);
                let ratio = Rational::new(BigInt::from(c * n - k), BigInt::from(n - k));
                let mut bound = Rational::from_integer(BigInt::from(1));
                for _ in 0..k {
                    bound *= &ratio;
                }
                let lhs_r = Rational::from_integer(BigInt::from(lhs.clone()));
                let rhs_r = Rational::from_integer(BigInt::from(base.clone())) * bound;
                assert!(lhs_r <= rhs_r, "n={n} c={c} k={k}");
            }
        }
    }
}

#[test]
fn binomial_product_estimate_holds_on_grid() {
    // binom(b,d) binom(a,c-d) >= (bc/(4ad))^d binom(a,c) for 4d <= c <= a
    // and d <= b (both sides vanish together outside that range)
    let mut checked = 0u64;
    for a in 4u64..=40 {
        for b in 1u64..=40 {
            for d in 1u64..=10 {
                if d > b {
                    continue;
                }
                for c in (4 * d)..=a.min(40) {
                    let lhs = binomial(b, d) * binomial(a, c - d);
                    let rhs_binom = binomial(a, c);
                    let coeff = Rational::new(BigInt::from(b * c), BigInt::from(4 * a * d));
                    let mut scale = Rational::from_integer(BigInt::from(1));
                    for _ in 0..d {
                        scale *= &coeff;
                    }
                    let lhs_r = Rational::from_integer(BigInt::from(lhs));
                    let rhs_r = Rational::from_integer(BigInt::from(rhs_binom)) * scale;
                    assert!(lhs_r >= rhs_r, "a={a} b={b} c={c} d={d}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn census_monotone_in_window_size() {
    let k = parse_rational("2").unwrap();
    let mut last = 0;
    for n in 3u32..=10 {
        let g = GroupDescriptor::integer_window(n).unwrap();
        let c = enumerate_small_doubling(&g, &g.ground_set(), 3, &k).unwrap();
        assert!(c.count >= last, "count dropped at n = {n}");
        last = c.count;
    }
}

#[test]
fn guaranteed_counts_are_exact_binomials() {
    assert_eq!(binomial(50, 2), BigUint::from(1225u64));
    assert_eq!(binomial(8, 6), BigUint::from(28u64));
    assert_eq!(binomial(6, 2), BigUint::from(15u64));
    assert_eq!(binomial(5, 9), BigUint::from(0u64));
}
