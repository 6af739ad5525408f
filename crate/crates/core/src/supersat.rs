//! Convolution statistics and the supersaturation checkers: the generalized
//! Pollard inequality, the deficient-pair corollary, arithmetic-progression
//! covers and the supersaturation/AP-structure dichotomy.

use std::collections::BTreeMap;

use num::BigInt;
use num::Zero;

use crate::error::{Error, Result};
use crate::group::{
    beta_exact, enumerate_subgroups, rational_from_u64, Element, ElementSet, GroupDescriptor,
    Rational,
};

/// Default cap on |B| for the exhaustive AP-cover search.
pub const AP_COVER_CAP: usize = 24;

/// Values of `1_U * 1_V` on the sumset support. Ordered pairs are counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvolutionProfile {
    counts: BTreeMap<Element, u64>,
}

impl ConvolutionProfile {
    pub fn value(&self, x: &Element) -> u64 {
        self.counts.get(x).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Element, u64)> {
        self.counts.iter().map(|(e, &c)| (e, c))
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    pub fn total_mass(&self) -> u64 {
        self.counts.values().sum()
    }
}

pub fn convolution(
    g: &GroupDescriptor,
    u: &ElementSet,
    v: &ElementSet,
) -> Result<ConvolutionProfile> {
    let mut counts: BTreeMap<Element, u64> = BTreeMap::new();
    for x in u.iter() {
        for y in v.iter() {
            let s = g.add(x, y)?;
            *counts.entry(s).or_insert(0) += 1;
        }
    }
    Ok(ConvolutionProfile { counts })
}

/// `sum_x min(1_U*1_V(x), t)` as an exact integer.
pub fn truncated_sum(g: &GroupDescriptor, u: &ElementSet, v: &ElementSet, t: u64) -> Result<u64> {
    if t < 1 {
        return Err(Error::domain("truncated_sum requires t >= 1"));
    }
    let profile = convolution(g, u, v)?;
    Ok(profile.support().map(|(_, c)| c.min(t)).sum())
}

/// Orders of the finite subgroups of the ambient group: just the trivial
/// subgroup for the integer window, the full lattice otherwise.
pub fn finite_subgroup_orders(g: &GroupDescriptor) -> Result<Vec<u64>> {
    match g {
        GroupDescriptor::IntegerWindow { .. } => Ok(vec![1]),
        GroupDescriptor::FiniteAbelian { .. } => {
            Ok(enumerate_subgroups(g)?.iter().map(|s| s.order()).collect())
        }
    }
}

/// alpha(U,V) = max{ |V'| : V' subset of G, |V'| <= |V|, |<V'>| <= |U|+|V|-|V'| }.
///
/// Computed through the subgroup reformulation
/// `alpha = max over finite subgroups H of min(|V|, |H|, |U|+|V|-|H|)`:
/// any witness V' generates a finite subgroup H = <V'> realizing the same
/// value, and conversely any k <= min(|V|,|H|,|U|+|V|-|H|) elements of H
/// form a valid V'. The brute-force form lives in [`crate::oracle`].
pub fn alpha(g: &GroupDescriptor, u: &ElementSet, v: &ElementSet) -> Result<u64> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::domain("alpha requires nonempty U and V"));
    }
    Ok(alpha_with_orders(
        &finite_subgroup_orders(g)?,
        u.len(),
        v.len(),
    ))
}

/// alpha from a precomputed subgroup-order list; the definition depends on
/// U and V only through their sizes.
pub fn alpha_with_orders(orders: &[u64], u_len: usize, v_len: usize) -> u64 {
    let total = (u_len + v_len) as i64;
    let mut best: i64 = 0;
    for &h in orders {
        let cand = (v_len as i64).min(h as i64).min(total - h as i64);
        best = best.max(cand);
    }
    best.max(0) as u64
}

#[derive(Debug, Clone)]
pub struct PollardReport {
    pub lhs: u64,
    pub rhs: i64,
    pub alpha: u64,
    pub holds: bool,
}

/// Checks `sum_x min(1_U*1_V(x), t) >= t (|U|+|V|-t-alpha)` for
/// `t <= |V| <= |U|`. A failed check signals an implementation bug.
pub fn check_pollard_general(
    g: &GroupDescriptor,
    u: &ElementSet,
    v: &ElementSet,
    t: u64,
) -> Result<PollardReport> {
    check_pollard_with_orders(g, u, v, t, &finite_subgroup_orders(g)?)
}

/// Same check with the subgroup-order list precomputed, for exhaustive
/// sweeps over one group.
pub fn check_pollard_with_orders(
    g: &GroupDescriptor,
    u: &ElementSet,
    v: &ElementSet,
    t: u64,
    orders: &[u64],
) -> Result<PollardReport> {
    if !(1 <= t && t as usize <= v.len() && v.len() <= u.len()) {
        return Err(Error::domain(format!(
            "pollard check requires 1 <= t <= |V| <= |U| (t={t}, |V|={}, |U|={})",
            v.len(),
            u.len()
        )));
    }
    let lhs = truncated_sum(g, u, v, t)?;
    let a = alpha_with_orders(orders, u.len(), v.len());
    let rhs = t as i64 * (u.len() as i64 + v.len() as i64 - t as i64 - a as i64);
    Ok(PollardReport {
        lhs,
        rhs,
        alpha: a,
        holds: lhs as i64 >= rhs,
    })
}

/// Number of ordered pairs `(b1,b2)` in `B x B` with `b1+b2` outside `A`.
pub fn deficient_pair_count(g: &GroupDescriptor, a: &ElementSet, b: &ElementSet) -> Result<u64> {
    let mut count = 0;
    for x in b.iter() {
        for y in b.iter() {
            if !a.contains(&g.add(x, y)?) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Diagonal part of the deficient count: elements b with 2b outside A.
pub fn deficient_self_count(g: &GroupDescriptor, a: &ElementSet, b: &ElementSet) -> Result<u64> {
    let mut count = 0;
    for x in b.iter() {
        if !a.contains(&g.add(x, x)?) {
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Debug, Clone)]
pub struct SupersatReport {
    /// Whether the size hypothesis |B| >= (1/2+eps)(|A|+beta) was met.
    pub hypothesis_met: bool,
    pub beta: u64,
    pub deficient_pairs: u64,
    /// eps^2 |B|^2, exact.
    pub threshold: Rational,
    /// deficient_pairs >= threshold; only meaningful when the hypothesis held.
    pub holds: bool,
}

/// Corollary-style supersaturation check: with beta = beta((1+4eps)|A|) and
/// |B| >= (1/2+eps)(|A|+beta), at least eps^2 |B|^2 ordered pairs of B sum
/// outside A.
pub fn check_supersat_corollary(
    g: &GroupDescriptor,
    a: &ElementSet,
    b: &ElementSet,
    eps: &Rational,
) -> Result<SupersatReport> {
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    if !(eps > &Rational::zero() && eps < &half) {
        return Err(Error::domain("supersaturation requires 0 < eps < 1/2"));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("supersaturation requires nonempty A and B"));
    }
    let beta_arg = (Rational::from_integer(BigInt::from(1)) + eps * BigInt::from(4))
        * rational_from_u64(a.len() as u64);
    let beta = beta_exact(g, &beta_arg)?;
    let gate = (half + eps) * rational_from_u64((a.len() as u64) + beta);
    let hypothesis_met = rational_from_u64(b.len() as u64) >= gate;
    let deficient = deficient_pair_count(g, a, b)?;
    let threshold = eps * eps * rational_from_u64((b.len() * b.len()) as u64);
    let holds = hypothesis_met && rational_from_u64(deficient) >= threshold;
    Ok(SupersatReport {
        hypothesis_met,
        beta,
        deficient_pairs: deficient,
        threshold,
        holds,
    })
}

/// An arithmetic progression covering all of B except `outliers`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct APCover {
    pub start: i64,
    pub difference: i64,
    pub length: u64,
    pub outliers: ElementSet,
}

impl APCover {
    pub fn covered_points(&self) -> ElementSet {
        let mut v = Vec::new();
        for i in 0..self.length as i64 {
            v.push(Element::Int(self.start + i * self.difference));
        }
        ElementSet::from_vec(v)
    }
}

fn int_points(b: &ElementSet) -> Result<Vec<i64>> {
    b.iter()
        .map(|e| match e {
            Element::Int(x) => Ok(*x),
            _ => Err(Error::domain("AP cover search requires integer sets")),
        })
        .collect()
}

pub fn find_ap_cover(g: &GroupDescriptor, b: &ElementSet, max_outliers: usize) -> Result<APCover> {
    find_ap_cover_capped(g, b, max_outliers, AP_COVER_CAP)
}

/// Minimum-length AP covering all but at most `max_outliers` points of B.
///
/// Any optimal cover can be trimmed so that its first and last covered
/// points lie in B, so it suffices to scan endpoint pairs (x,y) in B and
/// differences d dividing y-x. Ties break toward smaller difference, then
/// smaller start.
pub fn find_ap_cover_capped(
    g: &GroupDescriptor,
    b: &ElementSet,
    max_outliers: usize,
    cap: usize,
) -> Result<APCover> {
    if !matches!(g, GroupDescriptor::IntegerWindow { .. }) {
        return Err(Error::domain(
            "AP cover search is defined over the integer window",
        ));
    }
    if b.len() > cap {
        return Err(Error::resource(format!(
            "AP cover search capped at |B| <= {cap}, got {}",
            b.len()
        )));
    }
    let pts = int_points(b)?;
    let need = b.len().saturating_sub(max_outliers);
    if need == 0 {
        return Ok(APCover {
            start: 0,
            difference: 0,
            length: 0,
            outliers: b.clone(),
        });
    }
    if need == 1 {
        // single covered point: any singleton progression works
        let p = pts[0];
        let mut outliers = b.clone();
        outliers = outliers.difference(&ElementSet::ints([p]));
        return Ok(APCover {
            start: p,
            difference: 0,
            length: 1,
            outliers,
        });
    }

    let mut best: Option<(u64, i64, i64)> = None; // (length, difference, start)
    for (i, &x) in pts.iter().enumerate() {
        for &y in &pts[i + 1..] {
            let span = y - x;
            for d in 1..=span {
                if span % d != 0 {
                    continue;
                }
                let len = (span / d + 1) as u64;
                if let Some((bl, bd, bs)) = best {
                    if (len, d, x) >= (bl, bd, bs) {
                        continue;
                    }
                }
                let covered = pts
                    .iter()
                    .filter(|&&p| p >= x && p <= y && (p - x) % d == 0)
                    .count();
                if covered >= need {
                    best = Some((len, d, x));
                }
            }
        }
    }
    let (length, difference, start) = best.ok_or_else(|| {
        Error::verification("AP cover search found no candidate (unreachable for need >= 2)")
    })?;
    let mut covered = Vec::new();
    for &p in &pts {
        if p >= start
            && (p - start) % difference == 0
            && p <= start + (length as i64 - 1) * difference
        {
            covered.push(Element::Int(p));
        }
    }
    let outliers = b.difference(&ElementSet::from_vec(covered));
    Ok(APCover {
        start,
        difference,
        length,
        outliers,
    })
}

/// Verdict of the supersaturation / AP-structure dichotomy.
#[derive(Debug, Clone)]
pub enum DichotomyVerdict {
    SupersatHolds { deficient_pairs: u64 },
    APStructure { cover: APCover },
}

/// Classifies (A,B) by the dichotomy: either at least `4 eps^2 K^2 s^2`
/// ordered pairs of B sum outside A, or B is covered up to `8 eps K s`
/// outliers by an AP of size at most `Ks/2 + 32 eps K s`.
///
/// Branch (a) is tested first; it is a single integer comparison, while
/// branch (b) requires an AP search. If neither branch can be established a
/// verification failure is raised.
pub fn classify_dichotomy(
    g: &GroupDescriptor,
    a: &ElementSet,
    b: &ElementSet,
    k: &Rational,
    s: u64,
    eps: &Rational,
) -> Result<DichotomyVerdict> {
    if !matches!(g, GroupDescriptor::IntegerWindow { .. }) {
        return Err(Error::domain(
            "dichotomy classification runs over the integer window",
        ));
    }
    let two_pow_neg10 = Rational::new(BigInt::from(1), BigInt::from(1024));
    if !(eps > &Rational::zero() && eps < &two_pow_neg10) {
        return Err(Error::domain("dichotomy requires 0 < eps < 2^-10"));
    }
    let ks = k * rational_from_u64(s);
    let half_ks = &ks / BigInt::from(2);
    let one = Rational::from_integer(BigInt::from(1));
    let lo = (&one - eps) * &half_ks;
    let hi = (&one + eps * BigInt::from(2)) * &half_ks;
    let b_len = rational_from_u64(b.len() as u64);
    if !(b_len >= lo && b_len <= hi) {
        return Err(Error::domain(format!(
            "dichotomy requires (1-eps)Ks/2 <= |B| <= (1+2eps)Ks/2, got |B|={}",
            b.len()
        )));
    }
    if rational_from_u64(a.len() as u64) > ks {
        return Err(Error::domain("dichotomy requires |A| <= Ks"));
    }
    // Mazur's theorem needs t = 2 eps K s <= |B|/40; given eps < 2^-10 and
    // the |B| window this always holds, but the gate is kept explicit.
    let t = eps * BigInt::from(2) * &ks;
    if &t * BigInt::from(40) > b_len {
        return Err(Error::domain(
            "dichotomy parameters violate t = 2 eps Ks <= |B|/40",
        ));
    }

    let deficient = deficient_pair_count(g, a, b)?;
    let branch_a = eps * eps * BigInt::from(4) * &ks * &ks;
    if rational_from_u64(deficient) >= branch_a {
        return Ok(DichotomyVerdict::SupersatHolds {
            deficient_pairs: deficient,
        });
    }

    let outlier_budget = (eps * BigInt::from(8) * &ks).floor().to_integer();
    let outlier_budget = outlier_budget.max(BigInt::zero());
    let max_outliers = u64::try_from(outlier_budget.clone())
        .map_err(|_| Error::domain("outlier budget overflow"))? as usize;
    let cover = find_ap_cover_capped(g, b, max_outliers, AP_COVER_CAP.max(b.len()))?;
    let len_budget = &half_ks + eps * BigInt::from(32) * &ks;
    if rational_from_u64(cover.length) <= len_budget
        && rational_from_u64(cover.outliers.len() as u64) <= Rational::from_integer(outlier_budget)
    {
        return Ok(DichotomyVerdict::APStructure { cover });
    }
    Err(Error::verification(format!(
        "dichotomy: neither branch established for |A|={}, |B|={}, K={k}, s={s}, eps={eps}",
        a.len(),
        b.len()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> GroupDescriptor {
        GroupDescriptor::integer_window(n).unwrap()
    }

    fn zmod(factors: &[u32]) -> GroupDescriptor {
        GroupDescriptor::finite_abelian(factors.to_vec()).unwrap()
    }

    fn ratio(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn convolution_profile_examples() {
        let g = z(9);
        let u = ElementSet::ints([0, 1, 2]);
        let prof = convolution(&g, &u, &u).unwrap();
        let vals: Vec<u64> = (0..=4).map(|x| prof.value(&Element::Int(x))).collect();
        assert_eq!(vals, vec![1, 2, 3, 2, 1]);
        assert_eq!(prof.total_mass(), 9);

        let v = ElementSet::ints([3, 7]);
        let singleton = ElementSet::ints([0]);
        let ind = convolution(&g, &singleton, &v).unwrap();
        assert_eq!(ind.support_size(), 2);
        assert!(v.iter().all(|e| ind.value(e) == 1));

        let empty = convolution(&g, &ElementSet::empty(), &v).unwrap();
        assert_eq!(empty.support_size(), 0);
    }

    #[test]
    fn truncated_sum_examples() {
        let g = z(9);
        let u = ElementSet::ints([0, 1, 2]);
        assert_eq!(truncated_sum(&g, &u, &u, 2).unwrap(), 8);
        assert_eq!(truncated_sum(&g, &u, &u, 1).unwrap(), 5);
        assert_eq!(truncated_sum(&g, &u, &u, 3).unwrap(), 9);
        assert!(truncated_sum(&g, &u, &u, 0).is_err());
    }

    #[test]
    fn alpha_examples() {
        let g = z(9);
        let u = ElementSet::ints([1, 5]);
        let v = ElementSet::ints([2]);
        assert_eq!(alpha(&g, &u, &v).unwrap(), 1);

        let z4 = zmod(&[4]);
        let u = ElementSet::from_vec(vec![Element::Residues(vec![0]), Element::Residues(vec![1])]);
        let v = ElementSet::from_vec(vec![Element::Residues(vec![0]), Element::Residues(vec![2])]);
        assert_eq!(alpha(&z4, &u, &v).unwrap(), 2);

        let zero = ElementSet::from_vec(vec![Element::Residues(vec![0])]);
        assert_eq!(alpha(&z4, &zero, &zero).unwrap(), 1);
        assert!(alpha(&z4, &ElementSet::empty(), &zero).is_err());
    }

    #[test]
    fn pollard_examples() {
        let g = z(9);
        let u = ElementSet::ints([0, 1, 2]);
        let r = check_pollard_general(&g, &u, &u, 2).unwrap();
        assert_eq!((r.lhs, r.rhs), (8, 6));
        assert!(r.holds);
        let r = check_pollard_general(&g, &u, &u, 1).unwrap();
        assert_eq!((r.lhs, r.rhs), (5, 4));
        assert!(r.holds);

        let z2 = zmod(&[2]);
        let full =
            ElementSet::from_vec(vec![Element::Residues(vec![0]), Element::Residues(vec![1])]);
        let r = check_pollard_general(&z2, &full, &full, 1).unwrap();
        assert_eq!((r.lhs, r.rhs, r.alpha), (2, 1, 2));
        assert!(r.holds);

        assert!(check_pollard_general(&g, &u, &u, 4).is_err());
    }

    #[test]
    fn deficient_pairs_examples() {
        let g = z(9);
        let b = ElementSet::ints([0, 1]);
        assert_eq!(
            deficient_pair_count(&g, &ElementSet::ints([0, 1, 2]), &b).unwrap(),
            0
        );
        assert_eq!(
            deficient_pair_count(&g, &ElementSet::ints([1]), &b).unwrap(),
            2
        );
        assert_eq!(
            deficient_pair_count(&g, &ElementSet::ints([1]), &ElementSet::empty()).unwrap(),
            0
        );
        // identity: deficient + covered = |B|^2
        let a = ElementSet::ints([2, 3]);
        let b = ElementSet::ints([0, 1, 2, 5]);
        let d = deficient_pair_count(&g, &a, &b).unwrap();
        let mut covered = 0;
        for x in b.iter() {
            for y in b.iter() {
                if a.contains(&g.add(x, y).unwrap()) {
                    covered += 1;
                }
            }
        }
        assert_eq!(d + covered, (b.len() * b.len()) as u64);
    }

    #[test]
    fn supersat_corollary_example() {
        let g = z(10);
        let a = ElementSet::ints(2..=10);
        let b = ElementSet::ints(1..=10);
        let eps = ratio(1, 20);
        let rep = check_supersat_corollary(&g, &a, &b, &eps).unwrap();
        assert!(rep.hypothesis_met);
        assert_eq!(rep.beta, 1);
        assert!(rep.holds);
        assert_eq!(rep.deficient_pairs, 55);

        // gate case: B too small
        let small = ElementSet::ints([1, 2]);
        let rep = check_supersat_corollary(&g, &a, &small, &eps).unwrap();
        assert!(!rep.hypothesis_met);

        assert!(check_supersat_corollary(&g, &ElementSet::empty(), &b, &eps).is_err());
        assert!(check_supersat_corollary(&g, &a, &b, &ratio(1, 2)).is_err());
    }

    #[test]
    fn ap_cover_examples() {
        let g = z(24);
        let b = ElementSet::ints([1, 3, 5, 7]);
        let c = find_ap_cover(&g, &b, 0).unwrap();
        assert_eq!((c.length, c.difference), (4, 2));
        assert!(c.outliers.is_empty());

        let b = ElementSet::ints([1, 2, 3, 10]);
        let c = find_ap_cover(&g, &b, 1).unwrap();
        assert_eq!((c.length, c.difference), (3, 1));
        assert_eq!(c.outliers, ElementSet::ints([10]));

        let b = ElementSet::ints([5]);
        let c = find_ap_cover(&g, &b, 0).unwrap();
        assert_eq!(c.length, 1);
        assert!(c.outliers.is_empty());

        let too_big = ElementSet::ints(1..=30);
        assert!(matches!(
            find_ap_cover(&g, &too_big, 0),
            Err(Error::Resource(_))
        ));
    }
}
