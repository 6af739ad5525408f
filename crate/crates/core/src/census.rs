//! Exhaustive enumeration of small-doubling sets, closed-form bound
//! evaluators, lower-bound family generators and typical-structure
//! statistics.

use num::bigint::BigUint;
use num::BigInt;
use num::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::group::{
    enumerate_subgroups, rational_to_f64, sumset, Element, ElementSet, GroupDescriptor, Rational,
};
use crate::supersat::{find_ap_cover_capped, AP_COVER_CAP};

/// Version stamp embedded in every persisted record so recorded bounds stay
/// interpretable across releases.
pub const BOUND_FORMULA_VERSION: &str = "1";

/// Default cap on binom(|Y|, s) for the enumerator.
pub const CENSUS_WORK_CAP: u64 = 10_000_000;

/// |J+J| and the doubling ratio |J+J|/|J|.
pub fn doubling_stats(g: &GroupDescriptor, j: &ElementSet) -> Result<(u64, Rational)> {
    if j.is_empty() {
        return Err(Error::domain("doubling is undefined for the empty set"));
    }
    let jj = sumset(g, j, j)?;
    let size = jj.len() as u64;
    Ok((
        size,
        Rational::new(BigInt::from(size), BigInt::from(j.len() as u64)),
    ))
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

/// Real-valued binomial binom(x, s) = Gamma(x+1)/(Gamma(s+1) Gamma(x-s+1))
/// for x >= s, and 0 below.
pub fn real_binomial(x: f64, s: u64) -> f64 {
    ln_real_binomial(x, s).exp()
}

/// ln binom(x, s), with -inf below the support.
pub fn ln_real_binomial(x: f64, s: u64) -> f64 {
    let s_f = s as f64;
    if x < s_f {
        return f64::NEG_INFINITY;
    }
    ln_gamma(x + 1.0) - ln_gamma(s_f + 1.0) - ln_gamma(x - s_f + 1.0)
}

#[derive(Debug, Clone)]
pub struct SmallDoublingCensus {
    pub count: u64,
    pub threshold: u64,
    pub sets: Vec<ElementSet>,
}

/// Counts (and collects) the s-subsets J of Y with |J+J| <= floor(K s).
///
/// Lexicographic DFS with branch-and-bound pruning: the partial sumset only
/// grows when elements are added, so a partial set whose sumset already
/// exceeds the threshold cannot complete.
pub fn enumerate_small_doubling(
    g: &GroupDescriptor,
    y: &ElementSet,
    s: usize,
    k: &Rational,
) -> Result<SmallDoublingCensus> {
    enumerate_small_doubling_capped(g, y, s, k, CENSUS_WORK_CAP)
}

pub fn enumerate_small_doubling_capped(
    g: &GroupDescriptor,
    y: &ElementSet,
    s: usize,
    k: &Rational,
    cap: u64,
) -> Result<SmallDoublingCensus> {
    if s == 0 {
        return Err(Error::domain("census requires s >= 1"));
    }
    let work = binomial(y.len() as u64, s as u64);
    if work > BigUint::from(cap) {
        return Err(Error::resource(format!(
            "binom({}, {s}) exceeds the census work cap {cap}",
            y.len()
        )));
    }
    let threshold_big = (k * BigInt::from(s as u64)).floor().to_integer();
    let threshold = threshold_big
        .to_u64()
        .ok_or_else(|| Error::domain("threshold floor(Ks) out of range"))?;

    let universe: Vec<Element> = y.iter().cloned().collect();
    let k = universe.len();
    if k > 2048 {
        return Err(Error::resource(format!(
            "census ground set capped at 2048 elements, got {k}"
        )));
    }

    // all pairwise sums mapped to dense indices, so the hot loop works on a
    // bitset and an undo log instead of element sets
    let mut sum_index: std::collections::BTreeMap<Element, u32> = std::collections::BTreeMap::new();
    let mut sums: Vec<Vec<u32>> = vec![vec![0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let s_elem = g.add_unchecked(&universe[i], &universe[j]);
            let next = sum_index.len() as u32;
            let idx = *sum_index.entry(s_elem).or_insert(next);
            sums[i][j] = idx;
            sums[j][i] = idx;
        }
    }
    let words = sum_index.len().div_ceil(64);

    struct Search<'a> {
        universe: &'a [Element],
        sums: &'a [Vec<u32>],
        s: usize,
        threshold: u64,
        chosen: Vec<usize>,
        mask: Vec<u64>,
        popcount: u64,
        undo: Vec<u32>,
        sets: Vec<ElementSet>,
    }

    impl Search<'_> {
        fn dfs(&mut self, start: usize) {
            if self.chosen.len() == self.s {
                self.sets.push(ElementSet::from_sorted(
                    self.chosen
                        .iter()
                        .map(|&i| self.universe[i].clone())
                        .collect(),
                ));
                return;
            }
            let need = self.s - self.chosen.len();
            for idx in start..self.universe.len() {
                if self.universe.len() - idx < need {
                    break;
                }
                let undo_mark = self.undo.len();
                for pos in 0..=self.chosen.len() {
                    let other = if pos == self.chosen.len() {
                        idx
                    } else {
                        self.chosen[pos]
                    };
                    let bit = self.sums[idx][other];
                    let (w, b) = ((bit / 64) as usize, bit % 64);
                    if self.mask[w] >> b & 1 == 0 {
                        self.mask[w] |= 1 << b;
                        self.popcount += 1;
                        self.undo.push(bit);
                    }
                }
                if self.popcount <= self.threshold {
                    self.chosen.push(idx);
                    self.dfs(idx + 1);
                    self.chosen.pop();
                }
                while self.undo.len() > undo_mark {
                    let bit = self.undo.pop().expect("marked");
                    self.mask[(bit / 64) as usize] &= !(1 << (bit % 64));
                    self.popcount -= 1;
                }
            }
        }
    }

    let mut search = Search {
        universe: &universe,
        sums: &sums,
        s,
        threshold,
        chosen: Vec::with_capacity(s),
        mask: vec![0; words],
        popcount: 0,
        undo: Vec::with_capacity(s * s),
        sets: Vec::new(),
    };
    search.dfs(0);
    Ok(SmallDoublingCensus {
        count: search.sets.len() as u64,
        threshold,
        sets: search.sets,
    })
}

/// Conjectured upper bound 2^{delta s} binom(Ks/2, s), as an extended real.
pub fn conjecture_bound(delta: f64, s: u64, k: &Rational) -> Result<f64> {
    if delta < 0.0 {
        return Err(Error::domain("conjecture bound requires delta >= 0"));
    }
    let ks_half = rational_to_f64(k) * s as f64 / 2.0;
    Ok((delta * s as f64).exp2() * real_binomial(ks_half, s))
}

#[derive(Debug, Clone)]
pub struct TheoremBoundReport {
    pub lambda: f64,
    pub beta: u64,
    /// May overflow to +inf; `ln_bound` stays finite much longer.
    pub bound: f64,
    pub ln_bound: f64,
    /// K < 2^{-36} s / (ln n)^3; false at any desk scale, reported only.
    pub hypothesis_met: bool,
}

/// The proven bound exp(2^9 lambda K^{1/6} s^{5/6} sqrt(ln n)) binom((Ks+beta)/2, s)
/// with beta = beta(Ks + 2^6 K^{7/6} s^{5/6} sqrt(ln n)) and
/// lambda = min(K/(K-2), ln s), taking K/(K-2) as +inf at K = 2.
pub fn theorem_bound(
    g: &GroupDescriptor,
    n: u64,
    s: u64,
    k: &Rational,
) -> Result<TheoremBoundReport> {
    let k_f = rational_to_f64(k);
    if k_f < 2.0 {
        return Err(Error::domain("theorem bound requires K >= 2"));
    }
    if n < 3 || s < 1 {
        return Err(Error::domain("theorem bound requires n >= 3 and s >= 1"));
    }
    let ln_n = (n as f64).ln();
    let s_f = s as f64;
    let beta_arg = k_f * s_f + 64.0 * k_f.powf(7.0 / 6.0) * s_f.powf(5.0 / 6.0) * ln_n.sqrt();
    let beta = crate::group::beta(g, beta_arg.max(1.0))?;
    let lambda = if k_f == 2.0 {
        s_f.ln()
    } else {
        (k_f / (k_f - 2.0)).min(s_f.ln())
    };
    let exponent = 512.0 * lambda * k_f.powf(1.0 / 6.0) * s_f.powf(5.0 / 6.0) * ln_n.sqrt();
    let ln_bound = exponent + ln_real_binomial((k_f * s_f + beta as f64) / 2.0, s);
    let hypothesis_met = k_f < 2f64.powi(-36) * s_f / ln_n.powi(3);
    Ok(TheoremBoundReport {
        lambda,
        beta,
        bound: ln_bound.exp(),
        ln_bound,
        hypothesis_met,
    })
}

/// The large-K lower-bound family: J = J0 u J1 with J0 inside the progression
/// P = {1..p_len} and J1 inside `[n] \ P`.
#[derive(Debug, Clone)]
pub struct LowerBoundFamily {
    pub n: u64,
    pub s: u64,
    pub k: Rational,
    /// floor(Ks), the doubling threshold every member satisfies.
    pub ks_threshold: u64,
    pub p_len: u64,
    pub j0_size: u64,
    pub j1_size: u64,
    /// True when p_len had to grow beyond floor(Ks/8) to fit J0, or the
    /// K/4, Ks/8 parameters were not integral.
    pub adjusted: bool,
    pub guaranteed_count: BigUint,
    /// K <= min(s, sqrt(n)), the feasibility shape of the source statement.
    pub feasibility_met: bool,
}

pub fn lower_bound_family(n: u64, s: u64, k: &Rational) -> Result<LowerBoundFamily> {
    if s == 0 || n == 0 {
        return Err(Error::domain("lower bound family requires n, s >= 1"));
    }
    let k_f = rational_to_f64(k);
    let ks = k * BigInt::from(s);
    let ks_threshold = ks
        .floor()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::domain("Ks out of range"))?;
    let quarter_k = (k / BigInt::from(4)).floor().to_integer();
    let j1_size = quarter_k
        .to_u64()
        .ok_or_else(|| Error::domain("K/4 out of range"))?;
    if j1_size > s {
        return Err(Error::domain("infeasible: K/4 exceeds s"));
    }
    let j0_size = s - j1_size;
    let p_raw = (&ks / BigInt::from(8)).floor().to_integer();
    let p_raw = p_raw
        .to_u64()
        .ok_or_else(|| Error::domain("Ks/8 out of range"))?;
    let exact_params = {
        let four = Rational::from_integer(BigInt::from(4));
        let eight = Rational::from_integer(BigInt::from(8));
        (k / four).is_integer() && (&ks / eight).is_integer()
    };
    // grow P minimally when floor(Ks/8) cannot hold J0; the doubling chain
    // keeps enough slack for the verification below to stay exact
    let p_len = p_raw.max(j0_size);
    let adjusted = p_len != p_raw || !exact_params;
    if p_len > n {
        return Err(Error::domain(format!(
            "infeasible: progression length {p_len} exceeds n = {n}"
        )));
    }
    if n - p_len < j1_size {
        return Err(Error::domain(
            "infeasible: not enough room outside P for J1",
        ));
    }
    // the J1 pool is [n] \ P; clamping the half-window factor to it keeps
    // the guarantee a true lower bound even when P covers most of [n]
    let guaranteed_count = binomial((n / 2).min(n - p_len), j1_size) * binomial(p_len, j0_size);
    let feasibility_met = k_f <= (s as f64).min((n as f64).sqrt());
    Ok(LowerBoundFamily {
        n,
        s,
        k: k.clone(),
        ks_threshold,
        p_len,
        j0_size,
        j1_size,
        adjusted,
        guaranteed_count,
        feasibility_met,
    })
}

impl LowerBoundFamily {
    fn outside(&self) -> Vec<i64> {
        ((self.p_len + 1) as i64..=self.n as i64).collect()
    }

    /// Full expansion of the family. Caller is responsible for size sanity;
    /// `limit` guards against accidental blowups.
    pub fn expand_all(&self, limit: u64) -> Result<Vec<ElementSet>> {
        if self.guaranteed_count > BigUint::from(limit)
            || binomial(self.n - self.p_len, self.j1_size) * binomial(self.p_len, self.j0_size)
                > BigUint::from(limit)
        {
            return Err(Error::resource(format!(
                "family expansion exceeds limit {limit}"
            )));
        }
        let p: ElementSet = ElementSet::ints(1..=self.p_len as i64);
        let outside = ElementSet::ints(self.outside());
        let mut out = Vec::new();
        for j0 in p.subsets_of_size(self.j0_size as usize) {
            for j1 in outside.subsets_of_size(self.j1_size as usize) {
                out.push(j0.union(&j1));
            }
        }
        Ok(out)
    }

    /// Uniformly sampled members.
    pub fn sample<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<ElementSet> {
        let p: Vec<i64> = (1..=self.p_len as i64).collect();
        let outside = self.outside();
        (0..count)
            .map(|_| {
                let mut j0: Vec<i64> = p
                    .choose_multiple(rng, self.j0_size as usize)
                    .copied()
                    .collect();
                let j1: Vec<i64> = outside
                    .choose_multiple(rng, self.j1_size as usize)
                    .copied()
                    .collect();
                j0.extend(j1);
                ElementSet::ints(j0)
            })
            .collect()
    }

    /// Checks |J+J| <= floor(Ks) for one member.
    pub fn verify_member(&self, j: &ElementSet) -> Result<bool> {
        let g = GroupDescriptor::integer_window(self.n as u32)?;
        let (size, _) = doubling_stats(&g, j)?;
        Ok(size <= self.ks_threshold)
    }
}

/// The subgroup-plus-progression tightness family B = P + H inside a finite
/// abelian group, with |B+B| <= |P+P| |H| <= m.
#[derive(Debug, Clone)]
pub struct GroupTightness {
    pub subgroup_order: u64,
    pub l: u64,
    pub b_set: ElementSet,
    pub m: u64,
}

impl GroupTightness {
    /// binom((m + beta)/2, s) = binom(|B|, s).
    pub fn guaranteed_count(&self, s: u64) -> BigUint {
        binomial(self.b_set.len() as u64, s)
    }

    pub fn members(&self, s: usize) -> Vec<ElementSet> {
        self.b_set.subsets_of_size(s)
    }
}

/// Finds a subgroup H with |H| = m/(2l-1) for integral l and an AP of length
/// l in G/H, preferring proper subgroups of maximal order (they give the
/// richest family); H = G is the fallback when nothing proper fits.
pub fn group_tightness_family(g: &GroupDescriptor, m: u64, s: u64) -> Result<GroupTightness> {
    let order = g
        .order()
        .ok_or_else(|| Error::domain("tightness family requires a finite abelian group"))?;
    if m == 0 || m > order {
        return Err(Error::domain("tightness family requires 1 <= m <= |G|"));
    }
    let _ = s;
    let subgroups = enumerate_subgroups(g)?;
    let mut searched: Vec<String> = Vec::new();
    let mut candidates: Vec<GroupTightness> = Vec::new();
    for h in &subgroups {
        let beta = h.order();
        if !m.is_multiple_of(beta) {
            searched.push(format!("|H|={beta}: m not divisible"));
            continue;
        }
        let quotient = m / beta;
        if quotient.is_multiple_of(2) {
            searched.push(format!("|H|={beta}: m/|H|={quotient} even"));
            continue;
        }
        let l = quotient.div_ceil(2);
        // need an AP of length l in G/H: a coset of order >= l
        let coset_order = |x: &Element| -> Result<u64> {
            let mut acc = x.clone();
            let mut k = 1u64;
            while !h.elements.contains(&acc) {
                acc = g.add(&acc, x)?;
                k += 1;
            }
            Ok(k)
        };
        let mut generator: Option<Element> = None;
        for x in g.all_elements() {
            if coset_order(&x)? >= l {
                generator = Some(x);
                break;
            }
        }
        let Some(x) = generator else {
            searched.push(format!("|H|={beta}: no coset of order >= {l} in G/H"));
            continue;
        };
        let mut b = h.elements.clone();
        let mut shift = g.identity();
        for _ in 1..l {
            shift = g.add(&shift, &x)?;
            for e in h.elements.iter() {
                b.insert(g.add(&shift, e)?);
            }
        }
        let bb = sumset(g, &b, &b)?;
        if (b.len() as u64) != l * beta || (bb.len() as u64) > m {
            searched.push(format!(
                "|H|={beta}, l={l}: construction failed |B+B| check"
            ));
            continue;
        }
        candidates.push(GroupTightness {
            subgroup_order: beta,
            l,
            b_set: b,
            m,
        });
    }
    candidates.sort_by_key(|c| {
        let proper = c.subgroup_order < order;
        // proper first, then larger subgroup
        (
            std::cmp::Reverse(proper as u8),
            std::cmp::Reverse(c.subgroup_order),
        )
    });
    candidates.into_iter().next().ok_or_else(|| {
        Error::domain(format!(
            "no admissible (H, l) for m={m} in {g}; searched: {}",
            searched.join("; ")
        ))
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TypicalityReport {
    pub total_sets: u64,
    pub structured_sets: u64,
    pub t_max: u64,
    pub p_max: u64,
    /// structured / total as an exact fraction string "a/b".
    pub fraction: String,
}

/// For each set, searches for an AP of length at most p_max covering all but
/// at most t_max points; tallies how many sets admit one.
pub fn typicality_report(
    g: &GroupDescriptor,
    sets: &[ElementSet],
    t_max: u64,
    p_max: u64,
) -> Result<TypicalityReport> {
    let mut structured = 0u64;
    for j in sets {
        let cover = find_ap_cover_capped(g, j, t_max as usize, AP_COVER_CAP.max(j.len()))?;
        if cover.length <= p_max {
            structured += 1;
        }
    }
    let fraction = if sets.is_empty() {
        "0/1".to_string()
    } else {
        format!(
            "{}",
            Rational::new(BigInt::from(structured), BigInt::from(sets.len() as u64))
        )
    };
    Ok(TypicalityReport {
        total_sets: sets.len() as u64,
        structured_sets: structured,
        t_max,
        p_max,
        fraction,
    })
}

/// One persisted enumeration run. Exact counts are serialized as strings so
/// values beyond 64 bits stay exact; extended-real bounds use the `f64`
/// display forms, including `inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub ts: String,
    pub config_hash: String,
    pub bound_version: String,
    pub group: String,
    pub n: u64,
    pub s: u64,
    pub k: String,
    pub threshold: u64,
    pub count: String,
    pub elapsed_ms: u64,
    pub bound_conjecture: Option<String>,
    pub bound_theorem: Option<String>,
    pub bound_lower: Option<String>,
    pub coverage: Option<bool>,
    pub oracle_match: Option<bool>,
}
