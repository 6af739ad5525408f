//! The verification suites. Each one checks a family of statements the
//! library relies on, exhaustively or over a seeded sample, returns a
//! structured report, and is shared by the `verify` CLI command and the
//! acceptance test target.

use num::bigint::BigUint;
use num::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::census::{
    binomial, enumerate_small_doubling, group_tightness_family, lower_bound_family,
};
use crate::container::{
    build_container, codegree_indices, delta_explicit, delta_table, replay_container,
    ContainerParams,
};
use crate::error::{Error, Result};
use crate::group::{
    parse_rational, rational_from_u64, sumset, Element, ElementSet, GroupDescriptor, Rational,
};
use crate::hypergraph::{minimal_degree_condition_r, BoundedHypergraph, Edge, IndependentPair};
use crate::oracle;
use crate::sumset::{build_container_family, build_sum_hypergraph, verify_family, TreeParams};
use crate::supersat::{
    check_pollard_with_orders, classify_dichotomy, finite_subgroup_orders, DichotomyVerdict,
};

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl SuiteReport {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        SuiteReport {
            name,
            passed,
            detail,
        }
    }
}

/// Canonical factor lists for every abelian group of order 2..=cap, one per
/// isomorphism class.
pub fn abelian_groups_up_to(cap: u32) -> Vec<GroupDescriptor> {
    fn partitions_into_prime_powers(n: u32) -> Vec<Vec<u32>> {
        // factor n, then for each prime independently partition the exponent
        let mut n_left = n;
        let mut primes: Vec<(u32, u32)> = Vec::new();
        let mut p = 2;
        while p * p <= n_left {
            if n_left.is_multiple_of(p) {
                let mut e = 0;
                while n_left.is_multiple_of(p) {
                    n_left /= p;
                    e += 1;
                }
                primes.push((p, e));
            }
            p += 1;
        }
        if n_left > 1 {
            primes.push((n_left, 1));
        }
        fn exponent_partitions(e: u32) -> Vec<Vec<u32>> {
            fn rec(e: u32, max: u32) -> Vec<Vec<u32>> {
                if e == 0 {
                    return vec![vec![]];
                }
                let mut out = Vec::new();
                for first in (1..=e.min(max)).rev() {
                    for rest in rec(e - first, first) {
                        let mut v = vec![first];
                        v.extend(rest);
                        out.push(v);
                    }
                }
                out
            }
            rec(e, e)
        }
        let mut shapes: Vec<Vec<u32>> = vec![vec![]];
        for (p, e) in primes {
            let mut next = Vec::new();
            for part in exponent_partitions(e) {
                let factors: Vec<u32> = part.iter().map(|&k| p.pow(k)).collect();
                for s in &shapes {
                    let mut v = s.clone();
                    v.extend(factors.iter().copied());
                    next.push(v);
                }
            }
            shapes = next;
        }
        shapes
    }
    let mut out = Vec::new();
    for n in 2..=cap {
        for mut factors in partitions_into_prime_powers(n) {
            factors.sort_unstable_by(|a, b| b.cmp(a));
            out.push(GroupDescriptor::finite_abelian(factors).expect("factors >= 2"));
        }
    }
    out
}

/// Criterion 1: the generalized Pollard inequality, exhaustively over
/// U,V inside `[9]` in the integer window and over every abelian group of
/// order <= 12 with |U|,|V| <= 4, for all t <= |V| <= |U|.
pub fn pollard_exhaustive_suite() -> Result<SuiteReport> {
    let mut checked = 0u64;
    let mut failures: Vec<String> = Vec::new();

    // integer window [9]
    let g = GroupDescriptor::integer_window(9)?;
    let ground: Vec<Element> = g.ground_set().iter().cloned().collect();
    let orders = finite_subgroup_orders(&g)?;
    let n = ground.len();
    let window_results: Vec<(u64, Vec<String>)> = (1u32..(1 << n))
        .into_par_iter()
        .map(|u_mask| {
            let u_set = ElementSet::from_vec(
                (0..n)
                    .filter(|i| u_mask >> i & 1 == 1)
                    .map(|i| ground[i].clone())
                    .collect(),
            );
            let mut local_checked = 0u64;
            let mut local_failures = Vec::new();
            for v_mask in 1u32..(1 << n) {
                let v_len = v_mask.count_ones() as usize;
                if v_len > u_set.len() {
                    continue;
                }
                let v_set = ElementSet::from_vec(
                    (0..n)
                        .filter(|i| v_mask >> i & 1 == 1)
                        .map(|i| ground[i].clone())
                        .collect(),
                );
                for t in 1..=v_len as u64 {
                    let rep = check_pollard_with_orders(&g, &u_set, &v_set, t, &orders)
                        .expect("preconditions hold");
                    local_checked += 1;
                    if !rep.holds {
                        local_failures.push(format!(
                            "z:9 U={u_set} V={v_set} t={t}: {} < {}",
                            rep.lhs, rep.rhs
                        ));
                    }
                }
            }
            (local_checked, local_failures)
        })
        .collect();
    for (c, f) in window_results {
        checked += c;
        failures.extend(f);
    }

    // all abelian groups of order <= 12
    for g in abelian_groups_up_to(12) {
        let orders = finite_subgroup_orders(&g)?;
        let elems = ElementSet::from_vec(g.all_elements());
        let max_size = 4.min(elems.len());
        let mut subsets: Vec<ElementSet> = Vec::new();
        for size in 1..=max_size {
            subsets.extend(elems.subsets_of_size(size));
        }
        let group_results: Vec<(u64, Vec<String>)> = subsets
            .par_iter()
            .map(|u_set| {
                let mut local_checked = 0u64;
                let mut local_failures = Vec::new();
                for v_set in &subsets {
                    if v_set.len() > u_set.len() {
                        continue;
                    }
                    for t in 1..=v_set.len() as u64 {
                        let rep = check_pollard_with_orders(&g, u_set, v_set, t, &orders)
                            .expect("preconditions hold");
                        local_checked += 1;
                        if !rep.holds {
                            local_failures.push(format!(
                                "{g} U={u_set} V={v_set} t={t}: {} < {}",
                                rep.lhs, rep.rhs
                            ));
                        }
                    }
                }
                (local_checked, local_failures)
            })
            .collect();
        for (c, f) in group_results {
            checked += c;
            failures.extend(f);
        }
    }

    Ok(SuiteReport::new(
        "pollard-exhaustive",
        failures.is_empty(),
        format!(
            "{checked} inequalities checked, {} failures",
            failures.len()
        ) + &preview(&failures),
    ))
}

/// Criterion 2: subgroup-formula alpha equals brute-force-over-subsets alpha
/// on every abelian group of order <= 12 with |V| <= 4 (and any |U| up to
/// the group order).
pub fn alpha_oracle_suite() -> Result<SuiteReport> {
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for g in abelian_groups_up_to(12) {
        let orders = finite_subgroup_orders(&g)?;
        let order = g.order().expect("finite") as usize;
        for u_len in 1..=order {
            for v_len in 1..=4.min(order) {
                let formula = crate::supersat::alpha_with_orders(&orders, u_len, v_len);
                let brute = oracle::alpha_brute(&g, u_len, v_len)?;
                checked += 1;
                if formula != brute {
                    failures.push(format!(
                        "{g} |U|={u_len} |V|={v_len}: formula {formula} != brute {brute}"
                    ));
                }
            }
        }
    }
    // the set-level entry point agrees with the size-level formula
    let g = GroupDescriptor::finite_abelian(vec![4, 3])?;
    let orders = finite_subgroup_orders(&g)?;
    let elems = ElementSet::from_vec(g.all_elements());
    for u in elems.subsets_of_size(3).into_iter().take(5) {
        for v in elems.subsets_of_size(2).into_iter().take(5) {
            let by_set = crate::supersat::alpha(&g, &u, &v)?;
            let by_len = crate::supersat::alpha_with_orders(&orders, u.len(), v.len());
            checked += 1;
            if by_set != by_len {
                failures.push(format!("{g} alpha set/size disagreement"));
            }
        }
    }
    Ok(SuiteReport::new(
        "alpha-oracle-equivalence",
        failures.is_empty(),
        format!(
            "{checked} size pairs checked, {} mismatches",
            failures.len()
        ) + &preview(&failures),
    ))
}

/// Statistics shared by the container-contract, replay and round-invariant
/// suites.
#[derive(Debug, Default)]
pub struct ContainerTraceStats {
    pub traces: u64,
    pub rounds: u64,
    pub trichotomy_rounds: u64,
    pub replay_mismatches: u64,
    pub violations: Vec<String>,
}

fn random_bounded_hypergraph(rng: &mut ChaCha8Rng) -> BoundedHypergraph {
    let v0_len = rng.gen_range(1..=12usize);
    let v1_len = rng.gen_range(1..=12usize);
    let v0 = ElementSet::ints((1..=v0_len as i64).map(|x| 100 + x));
    let v1 = ElementSet::ints(1..=v1_len as i64);
    let v0_elems: Vec<Element> = v0.iter().cloned().collect();
    let v1_elems: Vec<Element> = v1.iter().cloned().collect();
    let edge_count = rng.gen_range(1..=40usize);
    let mut edges = Vec::with_capacity(edge_count);
    for _ in 0..edge_count {
        // edges always carry at least one part-1 vertex; part-0 may be empty
        let e1_len = if rng.gen_bool(0.75) { 2.min(v1_len) } else { 1 };
        let mut e1: Vec<Element> = Vec::new();
        while e1.len() < e1_len {
            let cand = v1_elems[rng.gen_range(0..v1_elems.len())].clone();
            if !e1.contains(&cand) {
                e1.push(cand);
            }
        }
        let e0 = if rng.gen_bool(0.9) {
            ElementSet::singleton(v0_elems[rng.gen_range(0..v0_elems.len())].clone())
        } else {
            ElementSet::empty()
        };
        edges.push(Edge::new(e0, ElementSet::from_vec(e1)));
    }
    BoundedHypergraph::build(v0, v1, 1, 2, edges).expect("edges in bounds")
}

/// A random independent pair (I, J) for `h`, built by sampling J and then
/// hitting every constraint forced by it.
fn random_independent_pair(rng: &mut ChaCha8Rng, h: &BoundedHypergraph) -> IndependentPair {
    let v1: Vec<Element> = h.v1().iter().cloned().collect();
    let mut j: ElementSet = v1.iter().filter(|_| rng.gen_bool(0.35)).cloned().collect();
    // constraints with empty part-0 cannot be hit by I: shrink J until none
    // is violated
    loop {
        let mut changed = false;
        for e in h.edges() {
            if e.e0.is_empty() && e.e1.is_subset(&j) && !e.e1.is_empty() {
                let drop = e.e1.iter().next().expect("nonempty").clone();
                j = j.difference(&ElementSet::singleton(drop));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut i_set = ElementSet::empty();
    for e in h.edges() {
        if e.e1.is_subset(&j) && !e.e0.is_empty() {
            i_set.insert(e.e0.iter().next().expect("nonempty").clone());
        }
    }
    // occasional extra elements keep I from being minimal every time
    for v in h.v0().iter() {
        if rng.gen_bool(0.1) {
            i_set.insert(v.clone());
        }
    }
    IndependentPair::new(i_set, j)
}

fn trace_one(
    h: &BoundedHypergraph,
    pair: &IndependentPair,
    params: &ContainerParams,
    stats: &mut ContainerTraceStats,
) {
    stats.traces += 1;
    match build_container(h, pair, params) {
        Ok(outcome) => {
            stats.rounds += outcome.trace.rounds.len() as u64;
            stats.trichotomy_rounds += outcome
                .trace
                .rounds
                .iter()
                .filter(|r| r.trichotomy_checked)
                .count() as u64;
            match replay_container(h, &outcome.fingerprint, params) {
                Ok(replayed) => {
                    if replayed != outcome.container {
                        stats.replay_mismatches += 1;
                        stats
                            .violations
                            .push(format!("replay mismatch on {}", h.to_debug_text()));
                    }
                }
                Err(e) => {
                    stats.replay_mismatches += 1;
                    stats.violations.push(format!("replay error: {e}"));
                }
            }
        }
        Err(Error::Verification(msg)) => {
            stats
                .violations
                .push(format!("{msg}\n{}", h.to_debug_text()));
        }
        Err(e) => {
            stats
                .violations
                .push(format!("unexpected error: {e}\n{}", h.to_debug_text()));
        }
    }
}

fn suite_params_for(h: &BoundedHypergraph, rng: &mut ChaCha8Rng) -> Result<ContainerParams> {
    let v0_len = h.v0().len() as u64;
    let v1_len = h.v1().len() as u64;
    let m = (v0_len.max(1)).min(rng.gen_range(1..=v0_len.max(1) + 3));
    let b = rng.gen_range(1..=m.min(v1_len));
    let q = rng.gen_range(1..=m);
    let minimal = minimal_degree_condition_r(h, b, m, q)?;
    let bump = rational_from_u64(rng.gen_range(1..=3));
    let big_r = (minimal * bump).max(rational_from_u64(1));
    ContainerParams::new(1, 2, big_r, b, m, q)
}

/// Runs container builds and replays over all H(empty, Y) for Y inside `[10]`
/// and over `random_instances` seeded random hypergraphs, recording every
/// contract or invariant violation.
pub fn container_trace_stats(seed: u64, random_instances: usize) -> Result<ContainerTraceStats> {
    let mut stats = ContainerTraceStats::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // every sum hypergraph H(empty, Y), Y inside [10], with witnesses
    // J <= Y of size at most 2 and I = J+J
    let g = GroupDescriptor::integer_window(10)?;
    let full: Vec<Element> = g.ground_set().iter().cloned().collect();
    for y_mask in 1u32..(1 << 10) {
        let y = ElementSet::from_vec(
            (0..10)
                .filter(|i| y_mask >> i & 1 == 1)
                .map(|i| full[i].clone())
                .collect(),
        );
        let h = build_sum_hypergraph(&g, &y, &ElementSet::empty(), &y)?;
        if h.edge_count() == 0 {
            continue;
        }
        let mut witnesses: Vec<ElementSet> = vec![ElementSet::empty()];
        witnesses.extend(y.subsets_of_size(1));
        witnesses.extend(y.subsets_of_size(2));
        for j in witnesses {
            let i_set = if j.is_empty() {
                ElementSet::empty()
            } else {
                sumset(&g, &j, &j)?
            };
            let m = (i_set.len() as u64).max(1);
            let b = rng.gen_range(1..=m.min(y.len() as u64).min(3));
            let q = rng.gen_range(1..=m);
            let minimal = minimal_degree_condition_r(&h, b, m, q)?;
            let big_r = minimal.max(rational_from_u64(1));
            let params = ContainerParams::new(1, 2, big_r, b, m, q)?;
            let pair = IndependentPair::new(i_set, j);
            trace_one(&h, &pair, &params, &mut stats);
        }
    }

    for _ in 0..random_instances {
        let h = random_bounded_hypergraph(&mut rng);
        let pair = random_independent_pair(&mut rng, &h);
        // parameters must admit the pair: m at least |I|
        let mut params = suite_params_for(&h, &mut rng)?;
        let i_len = pair.w0.intersection(h.v0()).len() as u64;
        if params.m < i_len {
            params.m = i_len;
            let minimal = minimal_degree_condition_r(&h, params.b, params.m, params.q)?;
            params.big_r = minimal.max(rational_from_u64(1));
        }
        trace_one(&h, &pair, &params, &mut stats);
    }
    Ok(stats)
}

/// Criteria 3-5 packaged as three reports from one instrumented run.
pub fn container_suites(seed: u64, random_instances: usize) -> Result<[SuiteReport; 3]> {
    let stats = container_trace_stats(seed, random_instances)?;
    let contract_violations: Vec<&String> = stats
        .violations
        .iter()
        .filter(|v| {
            v.contains("container violates")
                || v.contains("container size")
                || v.contains("fingerprint")
                || v.contains("unexpected")
        })
        .collect();
    let round_violations: Vec<&String> = stats
        .violations
        .iter()
        .filter(|v| {
            v.contains("independence")
                || v.contains("degree propagation")
                || v.contains("trichotomy")
                || v.contains("without stopping")
        })
        .collect();
    let contract = SuiteReport::new(
        "container-contract",
        contract_violations.is_empty() && round_violations.is_empty(),
        format!(
            "{} pairs traced, {} contract violations",
            stats.traces,
            contract_violations.len()
        ) + &preview_refs(&contract_violations),
    );
    let replay = SuiteReport::new(
        "replay-determinism",
        stats.replay_mismatches == 0,
        format!(
            "{} fingerprints replayed, {} mismatches",
            stats.traces, stats.replay_mismatches
        ),
    );
    let rounds = SuiteReport::new(
        "round-invariants",
        round_violations.is_empty(),
        format!(
            "{} rounds instrumented ({} with trichotomy hypotheses), {} violations",
            stats.rounds,
            stats.trichotomy_rounds,
            round_violations.len()
        ) + &preview_refs(&round_violations),
    );
    Ok([contract, replay, rounds])
}

/// Criterion 6: recursion-built delta tables equal the closed form on the
/// full index set, for seeded random parameterizations.
pub fn delta_cross_check_suite(seed: u64, iterations: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes = [
        (1, 2),
        (1, 1),
        (2, 1),
        (2, 2),
        (3, 1),
        (0, 2),
        (2, 0),
        (1, 3),
    ];
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for _ in 0..iterations {
        let (r0, r1) = shapes[rng.gen_range(0..shapes.len())];
        let m = rng.gen_range(1..=12u64);
        let v1 = rng.gen_range(1..=12u64);
        let b = rng.gen_range(1..=m.min(v1));
        let params = ContainerParams::new(
            r0,
            r1,
            rational_from_u64(rng.gen_range(1..=9)),
            b,
            m,
            rng.gen_range(1..=m),
        )?;
        let mut base = std::collections::BTreeMap::new();
        for (l0, l1) in codegree_indices(r0, r1) {
            base.insert((l0, l1), rng.gen_range(0..=20u64));
        }
        let table = delta_table(&base, &params, v1)?;
        for &(i0, i1, l0, l1) in table.indices() {
            let explicit = delta_explicit(&base, &params, v1, i0, i1, l0, l1)?;
            checked += 1;
            if table.get(i0, i1, l0, l1) != Some(&explicit) {
                failures.push(format!(
                    "({r0},{r1}) b={b} m={m} v1={v1} at ({i0},{i1},{l0},{l1})"
                ));
            }
        }
    }
    Ok(SuiteReport::new(
        "delta-table-cross-check",
        failures.is_empty(),
        format!("{checked} entries compared, {} mismatches", failures.len()) + &preview(&failures),
    ))
}

/// Criterion 7: the sumset container tree covers every census set and its
/// leaves satisfy the family conditions, over the desk-scale grid.
pub fn sumset_tree_suite() -> Result<SuiteReport> {
    let eps = parse_rational("0.24")?;
    let mut failures = Vec::new();
    let mut configs = 0;
    let mut witnesses_total = 0usize;
    for n in [8u32, 10, 12] {
        for s in [2usize, 3] {
            for k in [2u64, 3] {
                configs += 1;
                let g = GroupDescriptor::integer_window(n)?;
                let y = g.ground_set();
                let k_rat = rational_from_u64(k);
                let census = enumerate_small_doubling(&g, &y, s, &k_rat)?;
                let m = census.threshold;
                let params = TreeParams::new(n as usize, m, eps.clone())?;
                let witness_pairs: Vec<(ElementSet, ElementSet)> = census
                    .sets
                    .iter()
                    .map(|j| Ok((sumset(&g, j, j)?, j.clone())))
                    .collect::<Result<_>>()?;
                witnesses_total += witness_pairs.len();
                let refs: Vec<(&ElementSet, &ElementSet)> =
                    witness_pairs.iter().map(|(i, j)| (i, j)).collect();
                let (mut tree, report) = match build_container_family(&g, &y, &params, refs) {
                    Ok(x) => x,
                    Err(e) => {
                        failures.push(format!("n={n} s={s} K={k}: build failed: {e}"));
                        continue;
                    }
                };
                match verify_family(&mut tree, &census.sets) {
                    Ok(v) if v.clean() => {
                        if (report.max_depth as f64) > params.depth_bound {
                            failures.push(format!("n={n} s={s} K={k}: depth exceeds bound"));
                        }
                        // the counting step: census fits inside the family
                        // times the largest container's subset count
                        let max_b = tree
                            .family()
                            .iter()
                            .map(|(_, b)| b.len())
                            .max()
                            .unwrap_or(0);
                        let cap = binomial(max_b as u64, s as u64)
                            * BigUint::from(tree.family().len() as u64);
                        if BigUint::from(census.count) > cap {
                            failures.push(format!(
                                "n={n} s={s} K={k}: census {} exceeds family cap {cap}",
                                census.count
                            ));
                        }
                    }
                    Ok(v) => {
                        failures.push(format!(
                            "n={n} s={s} K={k}: coverage={:?} leaves={:?} depth={:?} children={:?} size={:?}",
                            v.coverage_failures,
                            v.leaf_condition_failures,
                            v.depth_failures,
                            v.child_count_failures,
                            v.family_size_failures
                        ));
                    }
                    Err(e) => failures.push(format!("n={n} s={s} K={k}: verify failed: {e}")),
                }
            }
        }
    }
    Ok(SuiteReport::new(
        "sumset-container-coverage",
        failures.is_empty(),
        format!(
            "{configs} configurations, {witnesses_total} witnesses traced, {} failures",
            failures.len()
        ) + &preview(&failures),
    ))
}

/// Criterion 8: pruned census equals the naive filter everywhere on the
/// small grid, plus pinned spot values.
pub fn census_exactness_suite() -> Result<SuiteReport> {
    let ks = [
        parse_rational("2")?,
        parse_rational("5/2")?,
        parse_rational("3")?,
    ];
    let grid: Vec<(u32, usize)> = (1..=12u32)
        .flat_map(|n| (1..=4usize.min(n as usize)).map(move |s| (n, s)))
        .collect();
    let results: Vec<Vec<String>> = grid
        .par_iter()
        .map(|&(n, s)| {
            let mut local = Vec::new();
            let g = GroupDescriptor::integer_window(n).expect("n >= 1");
            let y = g.ground_set();
            for k in &ks {
                let pruned = enumerate_small_doubling(&g, &y, s, k).expect("within cap");
                let naive = oracle::naive_small_doubling_count(&g, &y, s, pruned.threshold)
                    .expect("within cap");
                if pruned.count != naive {
                    local.push(format!(
                        "n={n} s={s} K={k}: pruned {} != naive {naive}",
                        pruned.count
                    ));
                }
            }
            local
        })
        .collect();
    let mut failures: Vec<String> = results.into_iter().flatten().collect();

    let spot = [(4u32, 2usize, "2", 6u64), (5, 3, "2", 10), (5, 3, "5/3", 4)];
    for (n, s, k, expect) in spot {
        let g = GroupDescriptor::integer_window(n)?;
        let c = enumerate_small_doubling(&g, &g.ground_set(), s, &parse_rational(k)?)?;
        if c.count != expect {
            failures.push(format!("spot n={n} s={s} K={k}: {} != {expect}", c.count));
        }
    }
    // monotonicity in K and n
    let g = GroupDescriptor::integer_window(10)?;
    let mut last = 0;
    for k in ["2", "5/2", "3"] {
        let c = enumerate_small_doubling(&g, &g.ground_set(), 3, &parse_rational(k)?)?;
        if c.count < last {
            failures.push(format!("count not monotone in K at {k}"));
        }
        last = c.count;
    }
    Ok(SuiteReport::new(
        "census-exactness",
        failures.is_empty(),
        format!(
            "{} grid cells + {} spot values, {} failures",
            grid.len() * ks.len(),
            spot.len(),
            failures.len()
        ) + &preview(&failures),
    ))
}

/// Criterion 9: the lower-bound family generators produce verified sets in
/// at least the guaranteed numbers.
pub fn lower_bound_suite(seed: u64) -> Result<SuiteReport> {
    let mut failures = Vec::new();

    // progression-plus-sparse family at (n=100, s=8, K=8), 500 sampled members
    let fam = lower_bound_family(100, 8, &parse_rational("8")?)?;
    if fam.ks_threshold != 64 {
        failures.push("threshold at (100,8,8) is not 64".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for j in fam.sample(&mut rng, 500) {
        if j.len() != 8 || !fam.verify_member(&j)? {
            failures.push(format!("sampled member failed: {j}"));
        }
    }
    if fam.guaranteed_count != binomial(50, 2) * binomial(8, 6) {
        failures.push("guaranteed count formula mismatch at (100,8,8)".into());
    }

    // full expansion at (n=20, s=5, K=4)
    let fam = lower_bound_family(20, 5, &parse_rational("4")?)?;
    let all = fam.expand_all(1_000_000)?;
    let distinct: std::collections::BTreeSet<_> = all.iter().cloned().collect();
    if BigUint::from(distinct.len() as u64) < fam.guaranteed_count {
        failures.push(format!(
            "(20,5,4): {} distinct sets < guaranteed {}",
            distinct.len(),
            fam.guaranteed_count
        ));
    }
    for j in &all {
        if !fam.verify_member(j)? {
            failures.push(format!("(20,5,4) member failed: {j}"));
        }
    }

    // subgroup-plus-progression family on Z9 with m = 9
    let g = GroupDescriptor::finite_abelian(vec![9])?;
    let fam = group_tightness_family(&g, 9, 2)?;
    let members = fam.members(2);
    if BigUint::from(members.len() as u64) != fam.guaranteed_count(2) || members.len() != 15 {
        failures.push(format!(
            "Z9 family has {} members, expected binom(6,2)=15",
            members.len()
        ));
    }
    for j in members {
        let (size, _) = crate::census::doubling_stats(&g, &j)?;
        if size > 9 {
            failures.push(format!("Z9 member {j} has |J+J| = {size} > 9"));
        }
    }

    Ok(SuiteReport::new(
        "lower-bound-families",
        failures.is_empty(),
        format!("3 generators exercised, {} failures", failures.len()) + &preview(&failures),
    ))
}

/// Criterion 10: minimum AP-cover length matches unrestricted brute force on
/// all B inside `[12]` with |B| <= 6 and outlier budgets up to 2.
pub fn ap_cover_optimality_suite() -> Result<SuiteReport> {
    let g = GroupDescriptor::integer_window(12)?;
    let ground: Vec<Element> = g.ground_set().iter().cloned().collect();
    let masks: Vec<u32> = (1u32..(1 << 12)).filter(|m| m.count_ones() <= 6).collect();
    let results: Vec<Vec<String>> = masks
        .par_iter()
        .map(|&mask| {
            let b = ElementSet::from_vec(
                (0..12)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| ground[i].clone())
                    .collect(),
            );
            let mut local = Vec::new();
            for k in 0..=2usize {
                let fast = crate::supersat::find_ap_cover(&g, &b, k).expect("within cap");
                let brute = oracle::ap_cover_brute_min_length(&b, k).expect("ints");
                if fast.length != brute {
                    local.push(format!("B={b} k={k}: {} != brute {brute}", fast.length));
                }
                if fast.outliers.len() > k {
                    local.push(format!("B={b} k={k}: outlier budget exceeded"));
                }
            }
            local
        })
        .collect();
    let failures: Vec<String> = results.into_iter().flatten().collect();
    Ok(SuiteReport::new(
        "ap-cover-optimality",
        failures.is_empty(),
        format!(
            "{} sets x 3 budgets compared, {} mismatches",
            masks.len(),
            failures.len()
        ) + &preview(&failures),
    ))
}

/// Criterion 11: the classification dichotomy never reaches the
/// neither-branch state on a generated precondition-satisfying grid.
pub fn dichotomy_totality_suite() -> Result<SuiteReport> {
    let g = GroupDescriptor::integer_window(1000)?;
    let mut instances = 0u64;
    let mut failures = Vec::new();
    let eps_values = [
        Rational::new(BigInt::from(1), BigInt::from(2048)),
        Rational::new(BigInt::from(1), BigInt::from(4096)),
        Rational::new(BigInt::from(1), BigInt::from(8192)),
    ];
    let shapes: Vec<(u64, u64)> = [
        (2u64, 8u64),
        (2, 10),
        (2, 12),
        (2, 14),
        (2, 16),
        (2, 18),
        (2, 20),
        (2, 22),
        (3, 6),
        (3, 8),
        (3, 10),
        (3, 12),
        (3, 14),
        (4, 4),
        (4, 6),
        (4, 8),
        (4, 10),
    ]
    .to_vec();
    for (k, s) in shapes {
        let k_rat = rational_from_u64(k);
        let b_len = (k * s / 2) as usize;
        let b_ap = ElementSet::ints(1..=b_len as i64);
        let bb = sumset(&g, &b_ap, &b_ap)?;
        for eps in &eps_values {
            // (A = B+B): zero deficient pairs, expect the AP branch
            instances += 1;
            match classify_dichotomy(&g, &bb, &b_ap, &k_rat, s, eps) {
                Ok(DichotomyVerdict::APStructure { cover }) => {
                    if cover.outliers.len() as f64
                        > crate::group::rational_to_f64(eps) * 8.0 * (k * s) as f64
                    {
                        failures.push(format!("K={k} s={s} eps={eps}: outliers over budget"));
                    }
                }
                Ok(DichotomyVerdict::SupersatHolds { .. }) => {
                    failures.push(format!("K={k} s={s} eps={eps}: AP case took branch (a)"));
                }
                Err(e) => failures.push(format!("K={k} s={s} eps={eps} A=B+B: {e}")),
            }

            // (A misses one realized sum): at least one deficient pair,
            // which exceeds the tiny branch-(a) threshold
            instances += 1;
            let gap = bb.iter().next().expect("nonempty").clone();
            let a_gapped = bb.difference(&ElementSet::singleton(gap));
            match classify_dichotomy(&g, &a_gapped, &b_ap, &k_rat, s, eps) {
                Ok(DichotomyVerdict::SupersatHolds { deficient_pairs }) => {
                    if deficient_pairs == 0 {
                        failures.push(format!("K={k} s={s}: zero pairs in branch (a)"));
                    }
                }
                Ok(DichotomyVerdict::APStructure { .. }) => {}
                Err(e) => failures.push(format!("K={k} s={s} eps={eps} gapped: {e}")),
            }

            // (A empty): every pair deficient
            instances += 1;
            match classify_dichotomy(&g, &ElementSet::empty(), &b_ap, &k_rat, s, eps) {
                Ok(DichotomyVerdict::SupersatHolds { deficient_pairs }) => {
                    if deficient_pairs != (b_len * b_len) as u64 {
                        failures.push(format!("K={k} s={s}: wrong count for empty A"));
                    }
                }
                Ok(_) => failures.push(format!("K={k} s={s}: empty A not branch (a)")),
                Err(e) => failures.push(format!("K={k} s={s} empty A: {e}")),
            }

            // (B with a distant outlier, A covering only the bulk sums)
            instances += 1;
            let core_len = b_len - 1;
            let mut b_out = ElementSet::ints(1..=core_len as i64);
            b_out.insert(Element::Int(600));
            let core = ElementSet::ints(1..=core_len as i64);
            let a_core = sumset(&g, &core, &core)?;
            if rational_from_u64(a_core.len() as u64) <= &k_rat * rational_from_u64(s) {
                match classify_dichotomy(&g, &a_core, &b_out, &k_rat, s, eps) {
                    Ok(DichotomyVerdict::SupersatHolds { .. }) => {}
                    Ok(DichotomyVerdict::APStructure { cover }) => {
                        if cover.length as usize > b_len + 1 {
                            failures.push(format!("K={k} s={s}: outlier case found a long AP"));
                        }
                    }
                    Err(e) => failures.push(format!("K={k} s={s} outlier: {e}")),
                }
            }
        }
    }

    // the worked example: K=4, s=10, eps=2^-11, B = AP(1..18) + {100, 200},
    // A = the first 40 sums
    instances += 1;
    let mut b = ElementSet::ints(1..=18);
    b.insert(Element::Int(100));
    b.insert(Element::Int(200));
    let bb = sumset(&g, &b, &b)?;
    let a: ElementSet = bb.iter().take(40).cloned().collect();
    let eps = Rational::new(BigInt::from(1), BigInt::from(2048));
    match classify_dichotomy(&g, &a, &b, &rational_from_u64(4), 10, &eps) {
        Ok(DichotomyVerdict::SupersatHolds { deficient_pairs }) => {
            let threshold = &eps * &eps * rational_from_u64(4 * 4 * 4 * 100);
            if rational_from_u64(deficient_pairs) < threshold {
                failures.push("worked example below branch (a) threshold".into());
            }
        }
        other => failures.push(format!("worked example verdict unexpected: {other:?}")),
    }

    Ok(SuiteReport::new(
        "dichotomy-totality",
        failures.is_empty() && instances >= 200,
        format!(
            "{instances} instances classified, {} failures",
            failures.len()
        ) + &preview(&failures),
    ))
}

fn preview(failures: &[String]) -> String {
    match failures.first() {
        Some(f) => format!("; first: {f}"),
        None => String::new(),
    }
}

fn preview_refs(failures: &[&String]) -> String {
    match failures.first() {
        Some(f) => format!("; first: {f}"),
        None => String::new(),
    }
}

/// Every suite in acceptance order.
pub fn run_all(seed: u64) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    out.push(pollard_exhaustive_suite()?);
    out.push(alpha_oracle_suite()?);
    let [contract, replay, rounds] = container_suites(seed, 1000)?;
    out.push(contract);
    out.push(replay);
    out.push(rounds);
    out.push(delta_cross_check_suite(seed ^ 0x5eed, 200)?);
    out.push(sumset_tree_suite()?);
    out.push(census_exactness_suite()?);
    out.push(lower_bound_suite(seed ^ 0xfa111e)?);
    out.push(ap_cover_optimality_suite()?);
    out.push(dichotomy_totality_suite()?);
    Ok(out)
}
