//! Brute-force reference implementations used by the verification suites.
//! Everything here is deliberately naive and independent of the main code
//! paths it cross-checks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::{
    generated_subgroup, sumset, Element, ElementSet, GeneratedSubgroup, GroupDescriptor,
};
use crate::hypergraph::BoundedHypergraph;

/// Census by filtering every s-subset, no pruning.
pub fn naive_small_doubling_count(
    g: &GroupDescriptor,
    y: &ElementSet,
    s: usize,
    threshold: u64,
) -> Result<u64> {
    let mut count = 0;
    for j in y.subsets_of_size(s) {
        let jj = sumset(g, &j, &j)?;
        if jj.len() as u64 <= threshold {
            count += 1;
        }
    }
    Ok(count)
}

/// alpha by literal enumeration of witnesses: all V' inside G with
/// |V'| <= |V| and |<V'>| <= |U| + |V| - |V'|. Only feasible for small
/// finite groups; the integer window admits only subsets of {0}.
pub fn alpha_brute(g: &GroupDescriptor, u_len: usize, v_len: usize) -> Result<u64> {
    if u_len == 0 || v_len == 0 {
        return Err(Error::domain("alpha requires nonempty U and V"));
    }
    let candidates: Vec<Element> = match g {
        GroupDescriptor::IntegerWindow { .. } => vec![g.identity()],
        GroupDescriptor::FiniteAbelian { .. } => g.all_elements(),
    };
    let universe = ElementSet::from_vec(candidates);
    let total = u_len + v_len;
    let mut best = 0u64;
    for size in (1..=v_len.min(universe.len())).rev() {
        if size as u64 <= best {
            break;
        }
        for v_prime in universe.subsets_of_size(size) {
            let gen = match generated_subgroup(g, &v_prime)? {
                GeneratedSubgroup::Finite(sub) => sub.order() as usize,
                GeneratedSubgroup::Infinite => continue,
            };
            if gen + size <= total {
                best = best.max(size as u64);
                break;
            }
        }
    }
    Ok(best)
}

/// Minimum AP-cover length by scanning every (start, difference, length)
/// triple in range, no endpoint restriction.
pub fn ap_cover_brute_min_length(b: &ElementSet, max_outliers: usize) -> Result<u64> {
    let pts: Vec<i64> = b
        .iter()
        .map(|e| match e {
            Element::Int(x) => Ok(*x),
            _ => Err(Error::domain("AP cover oracle requires integer sets")),
        })
        .collect::<Result<Vec<_>>>()?;
    let need = pts.len().saturating_sub(max_outliers);
    if need == 0 {
        return Ok(0);
    }
    let lo = *pts.iter().min().expect("nonempty");
    let hi = *pts.iter().max().expect("nonempty");
    let max_d = (hi - lo).max(1);
    // length span+1 with difference 1 always covers, so the scan terminates
    for length in 1..=(hi - lo + 1) as u64 {
        for start in lo..=hi {
            for d in 1..=max_d {
                let covered = pts
                    .iter()
                    .filter(|&&p| {
                        p >= start && (p - start) % d == 0 && (p - start) / d < length as i64
                    })
                    .count();
                if covered >= need {
                    return Ok(length);
                }
            }
        }
    }
    unreachable!("difference-1 progression over the span covers everything")
}

/// Maximum codegree by the definition: scan all (L0, L1) vertex tuples of
/// the requested sizes.
pub fn max_codegree_tuple_scan(h: &BoundedHypergraph, l0: usize, l1: usize) -> u64 {
    let mut best = 0u64;
    for t0 in h.v0().subsets_of_size(l0) {
        for t1 in h.v1().subsets_of_size(l1) {
            best = best.max(h.codegree(&t0, &t1) as u64);
        }
    }
    best
}

/// Convolution by definition, used to double-check truncated sums.
pub fn truncated_sum_direct(
    g: &GroupDescriptor,
    u: &ElementSet,
    v: &ElementSet,
    t: u64,
) -> Result<u64> {
    let mut counts: BTreeMap<Element, u64> = BTreeMap::new();
    for x in u.iter() {
        for y in v.iter() {
            *counts.entry(g.add(x, y)?).or_insert(0) += 1;
        }
    }
    Ok(counts.values().map(|&c| c.min(t)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_rational;
    use crate::supersat::find_ap_cover;

    #[test]
    fn naive_census_matches_spot_values() {
        let g = GroupDescriptor::integer_window(5).unwrap();
        assert_eq!(
            naive_small_doubling_count(&g, &g.ground_set(), 3, 6).unwrap(),
            10
        );
        assert_eq!(
            naive_small_doubling_count(&g, &g.ground_set(), 3, 5).unwrap(),
            4
        );
        let _ = parse_rational("5/3").unwrap();
    }

    #[test]
    fn brute_alpha_on_z4() {
        let g = GroupDescriptor::finite_abelian(vec![4]).unwrap();
        assert_eq!(alpha_brute(&g, 2, 2).unwrap(), 2);
        assert_eq!(alpha_brute(&g, 1, 1).unwrap(), 1);
        let z = GroupDescriptor::integer_window(9).unwrap();
        assert_eq!(alpha_brute(&z, 3, 2).unwrap(), 1);
    }

    #[test]
    fn ap_cover_oracle_agrees_on_examples() {
        let g = GroupDescriptor::integer_window(24).unwrap();
        for (pts, k) in [
            (vec![1i64, 3, 5, 7], 0usize),
            (vec![1, 2, 3, 10], 1),
            (vec![4], 0),
            (vec![2, 5, 9, 11], 1),
        ] {
            let b = ElementSet::ints(pts);
            let fast = find_ap_cover(&g, &b, k).unwrap();
            let brute = ap_cover_brute_min_length(&b, k).unwrap();
            assert_eq!(fast.length, brute);
        }
    }
}
