use std::time::Instant;

use anyhow::{anyhow, Result};
use doubling_core::census::{
    conjecture_bound, doubling_stats, enumerate_small_doubling, lower_bound_family, theorem_bound,
    typicality_report, CensusRecord, BOUND_FORMULA_VERSION,
};
use doubling_core::group::{parse_rational, ElementSet, GroupDescriptor};
use doubling_core::oracle;
use doubling_core::suite;
use doubling_core::sumset::{build_container_family, tree_dump, verify_family, TreeParams};
use doubling_core::supersat::find_ap_cover;

use crate::store;

fn now_iso() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Stdout shape for commands that emit one record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Jsonl,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = doubling_core::Error;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "jsonl" => Ok(OutputFormat::Jsonl),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(doubling_core::Error::usage(format!(
                "unknown format `{other}` (expected text, jsonl or csv)"
            ))),
        }
    }
}

pub fn census(
    group: &str,
    s: usize,
    k_text: &str,
    oracle_check: bool,
    bounds: bool,
    out: Option<&str>,
    format: OutputFormat,
) -> Result<i32> {
    let g = GroupDescriptor::parse(group)?;
    let k = parse_rational(k_text)?;
    let y = g.ground_set();
    let start = Instant::now();
    let census = enumerate_small_doubling(&g, &y, s, &k)?;
    let elapsed = start.elapsed();
    if format == OutputFormat::Text {
        println!(
            "census {group} s={s} K={k_text}: {} sets with |J+J| <= {} ({} ms)",
            census.count,
            census.threshold,
            elapsed.as_millis()
        );
    }

    let mut oracle_match = None;
    if oracle_check {
        let naive = oracle::naive_small_doubling_count(&g, &y, s, census.threshold)?;
        let matches = naive == census.count;
        oracle_match = Some(matches);
        if format == OutputFormat::Text {
            println!(
                "oracle: naive filter counts {naive} -> {}",
                if matches { "match" } else { "MISMATCH" }
            );
        }
        if !matches {
            return Err(anyhow!(doubling_core::Error::Verification(
                "pruned enumerator disagrees with the naive filter".into()
            )));
        }
    }

    let mut bound_conjecture = None;
    let mut bound_theorem = None;
    let mut bound_lower = None;
    if bounds {
        let quiet = format != OutputFormat::Text;
        let c = conjecture_bound(0.0, s as u64, &k)?;
        bound_conjecture = Some(format!("{c}"));
        if !quiet {
            println!("conjectured bound binom(Ks/2, s) = {c}");
        }
        match theorem_bound(&g, y.len() as u64, s as u64, &k) {
            Ok(rep) => {
                if !quiet {
                    println!(
                        "proven bound = {} (ln = {:.3}, lambda = {:.6}, beta = {}, small-K hypothesis met: {})",
                        rep.bound, rep.ln_bound, rep.lambda, rep.beta, rep.hypothesis_met
                    );
                }
                bound_theorem = Some(format!("{}", rep.bound));
            }
            Err(e) => {
                if !quiet {
                    println!("proven bound not evaluated: {e}");
                }
            }
        }
        if matches!(g, GroupDescriptor::IntegerWindow { .. }) {
            match lower_bound_family(y.len() as u64, s as u64, &k) {
                Ok(fam) => {
                    if !quiet {
                        println!(
                            "lower-bound family guarantees {} sets{}",
                            fam.guaranteed_count,
                            if fam.adjusted {
                                " (adjusted parameters)"
                            } else {
                                ""
                            }
                        );
                    }
                    bound_lower = Some(fam.guaranteed_count.to_string());
                }
                Err(e) => {
                    if !quiet {
                        println!("lower-bound family not applicable: {e}");
                    }
                }
            }
        }
    }

    let record = CensusRecord {
        ts: now_iso(),
        config_hash: store::config_hash(&["census", group, &s.to_string(), k_text]),
        bound_version: BOUND_FORMULA_VERSION.into(),
        group: group.into(),
        n: y.len() as u64,
        s: s as u64,
        k: k_text.into(),
        threshold: census.threshold,
        count: census.count.to_string(),
        elapsed_ms: elapsed.as_millis() as u64,
        bound_conjecture,
        bound_theorem,
        bound_lower,
        coverage: None,
        oracle_match,
    };
    match format {
        OutputFormat::Text => {}
        OutputFormat::Jsonl => println!("{}", serde_json::to_string(&record)?),
        OutputFormat::Csv => {
            println!("group,n,s,k,threshold,count,oracle_match");
            println!(
                "{},{},{},{},{},{},{}",
                record.group,
                record.n,
                record.s,
                record.k,
                record.threshold,
                record.count,
                record
                    .oracle_match
                    .map(|b| b.to_string())
                    .unwrap_or_default()
            );
        }
    }
    if let Some(path) = store::resolve_path(out) {
        store::persist(&path, &record)?;
        if format == OutputFormat::Text {
            println!("record appended to {path}");
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
pub fn containers(
    group: &str,
    s: usize,
    k_text: &str,
    epsilon_text: &str,
    m_override: Option<u64>,
    verify: bool,
    dump_tree: Option<&str>,
    trace: bool,
) -> Result<i32> {
    let g = GroupDescriptor::parse(group)?;
    let k = parse_rational(k_text)?;
    let epsilon = parse_rational(epsilon_text)?;
    let y = g.ground_set();
    let census = enumerate_small_doubling(&g, &y, s, &k)?;
    let m = m_override.unwrap_or(census.threshold);
    let params = TreeParams::new(y.len(), m, epsilon)?;
    if !params.hypothesis_met {
        println!(
            "note: m = {m} sits below (ln n)^2 = {:.3}; the tree is built anyway",
            (y.len() as f64).ln().powi(2)
        );
    }
    println!(
        "tree parameters: m={m} q={} b={} R={} depth bound {:.1}",
        params.q, params.b, params.big_r, params.depth_bound
    );

    let witness_pairs: Vec<(ElementSet, ElementSet)> = census
        .sets
        .iter()
        .map(|j| {
            let i = doubling_core::group::sumset(&g, j, j)?;
            Ok((i, j.clone()))
        })
        .collect::<doubling_core::Result<_>>()?;
    let refs: Vec<(&ElementSet, &ElementSet)> = witness_pairs.iter().map(|(i, j)| (i, j)).collect();
    let (mut tree, report) = build_container_family(&g, &y, &params, refs)?;
    println!(
        "family of {} containers over {} nodes, max depth {}",
        report.family_size, report.node_count, report.max_depth
    );
    if trace {
        if let Some(t) = &tree.last_trace {
            for round in &t.rounds {
                for it in &round.iters {
                    println!(
                        "  j={} c={} v={} {} e(A)={} e(G*)={}",
                        it.j,
                        it.c,
                        it.vertex,
                        if it.selected { "S" } else { "W" },
                        it.alive_before,
                        it.gstar_after
                    );
                }
            }
        }
    }

    if let Some(path) = dump_tree {
        std::fs::write(path, serde_json::to_string_pretty(&tree_dump(&tree))?)?;
        println!("tree dumped to {path}");
    }

    let mut coverage = None;
    if verify {
        let verification = verify_family(&mut tree, &census.sets)?;
        coverage = Some(verification.clean());
        if verification.clean() {
            println!(
                "verified: {} witnesses covered, leaves satisfy the family conditions",
                verification.checked_witnesses
            );
        } else {
            println!(
                "verification failures: coverage {:?}, leaves {:?}, depth {:?}, children {:?}, size {:?}",
                verification.coverage_failures,
                verification.leaf_condition_failures,
                verification.depth_failures,
                verification.child_count_failures,
                verification.family_size_failures
            );
        }
    }
    if let Some(path) = store::resolve_path(None) {
        let record = CensusRecord {
            ts: now_iso(),
            config_hash: store::config_hash(&[
                "containers",
                group,
                &s.to_string(),
                k_text,
                epsilon_text,
                &m.to_string(),
            ]),
            bound_version: BOUND_FORMULA_VERSION.into(),
            group: group.into(),
            n: y.len() as u64,
            s: s as u64,
            k: k_text.into(),
            threshold: census.threshold,
            count: census.count.to_string(),
            elapsed_ms: 0,
            bound_conjecture: None,
            bound_theorem: None,
            bound_lower: None,
            coverage,
            oracle_match: None,
        };
        store::persist(&path, &record)?;
        println!("record appended to {path}");
    }
    Ok(if coverage == Some(false) { 1 } else { 0 })
}

pub fn supersat(group: &str, max_set: usize, exhaustive: bool) -> Result<i32> {
    let g = GroupDescriptor::parse(group)?;
    if !exhaustive {
        println!("nothing to do: pass --exhaustive to sweep all (U, V, t)");
        return Ok(0);
    }
    let orders = doubling_core::supersat::finite_subgroup_orders(&g)?;
    let elems = g.ground_set();
    let cap = match g {
        GroupDescriptor::IntegerWindow { .. } => elems.len(),
        GroupDescriptor::FiniteAbelian { .. } => max_set.min(elems.len()),
    };
    let mut subsets: Vec<ElementSet> = Vec::new();
    for size in 1..=cap {
        subsets.extend(elems.subsets_of_size(size));
    }
    let mut checked = 0u64;
    let mut worst: Option<(i64, String)> = None;
    for u in &subsets {
        for v in &subsets {
            if v.len() > u.len() {
                continue;
            }
            for t in 1..=v.len() as u64 {
                let rep = doubling_core::supersat::check_pollard_with_orders(&g, u, v, t, &orders)?;
                checked += 1;
                if !rep.holds {
                    println!("FAIL U={u} V={v} t={t}: {} < {}", rep.lhs, rep.rhs);
                    return Ok(1);
                }
                let slack = rep.lhs as i64 - rep.rhs;
                if worst.as_ref().is_none_or(|(w, _)| slack < *w) {
                    worst = Some((slack, format!("U={u} V={v} t={t}")));
                }
            }
        }
    }
    let (slack, at) = worst.unwrap_or((0, "(none)".into()));
    println!("{checked} inequalities hold over {group}; tightest slack {slack} at {at}");
    Ok(0)
}

pub fn apcover(set_text: &str, outliers: usize) -> Result<i32> {
    // the window only scopes the ground set; any integer points are fine
    let g = GroupDescriptor::integer_window(1)?;
    let b = ElementSet::parse(set_text, &g)?;
    let cover = find_ap_cover(&g, &b, outliers)?;
    println!(
        "cover: start={} difference={} length={} outliers=[{}]",
        cover.start, cover.difference, cover.length, cover.outliers
    );
    Ok(0)
}

pub fn lowerbound(
    n: u64,
    s: u64,
    k_text: &str,
    verify_all: bool,
    sample: Option<usize>,
    seed: u64,
) -> Result<i32> {
    let k = parse_rational(k_text)?;
    let fam = lower_bound_family(n, s, &k)?;
    println!(
        "family: P = [1..{}], |J0| = {}, |J1| = {}, guaranteed count {}{}",
        fam.p_len,
        fam.j0_size,
        fam.j1_size,
        fam.guaranteed_count,
        if fam.adjusted {
            " (parameters adjusted to fit)"
        } else {
            ""
        }
    );
    if !fam.feasibility_met {
        println!("note: K exceeds min(s, sqrt(n)); the construction still verifies per-set");
    }
    if verify_all {
        let all = fam.expand_all(5_000_000)?;
        let mut ok = 0u64;
        for j in &all {
            if fam.verify_member(j)? {
                ok += 1;
            }
        }
        println!(
            "expanded {} distinct sets; {} verified with |J+J| <= {}",
            all.len(),
            ok,
            fam.ks_threshold
        );
        return Ok(if ok == all.len() as u64 { 0 } else { 1 });
    }
    if let Some(count) = sample {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut ok = 0;
        for j in fam.sample(&mut rng, count) {
            if fam.verify_member(&j)? {
                ok += 1;
            }
        }
        println!("sampled {count} members; {ok} verified");
        return Ok(if ok == count { 0 } else { 1 });
    }
    Ok(0)
}

pub fn typicality(n: u32, s: usize, k_text: &str, tmax: u64, pmax: u64) -> Result<i32> {
    let g = GroupDescriptor::integer_window(n)?;
    let k = parse_rational(k_text)?;
    let census = enumerate_small_doubling(&g, &g.ground_set(), s, &k)?;
    let rep = typicality_report(&g, &census.sets, tmax, pmax)?;
    println!(
        "{} of {} census sets admit an AP of length <= {pmax} covering all but <= {tmax} points (fraction {})",
        rep.structured_sets, rep.total_sets, rep.fraction
    );
    // quick sanity line about doubling in the census
    if let Some(j) = census.sets.first() {
        let (size, ratio) = doubling_stats(&g, j)?;
        println!("first census set {j}: |J+J| = {size}, doubling {ratio}");
    }
    Ok(0)
}

pub fn verify(seed: u64, instances: usize) -> Result<i32> {
    let start = Instant::now();
    let mut all_pass = true;
    let mut reports = Vec::new();
    reports.push(suite::pollard_exhaustive_suite()?);
    reports.push(suite::alpha_oracle_suite()?);
    let [contract, replay, rounds] = suite::container_suites(seed, instances)?;
    reports.push(contract);
    reports.push(replay);
    reports.push(rounds);
    reports.push(suite::delta_cross_check_suite(seed ^ 0x5eed, 200)?);
    reports.push(suite::sumset_tree_suite()?);
    reports.push(suite::census_exactness_suite()?);
    reports.push(suite::lower_bound_suite(seed ^ 0xfa111e)?);
    reports.push(suite::ap_cover_optimality_suite()?);
    reports.push(suite::dichotomy_totality_suite()?);
    for rep in &reports {
        println!(
            "{} {} — {}",
            if rep.passed { "PASS" } else { "FAIL" },
            rep.name,
            rep.detail
        );
        all_pass &= rep.passed;
    }
    println!(
        "{} suites in {:.1}s",
        reports.len(),
        start.elapsed().as_secs_f64()
    );
    Ok(if all_pass { 0 } else { 1 })
}
