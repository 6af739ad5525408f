//! (r0,r1)-bounded bipartitioned multi-hypergraphs with codegree queries,
//! independence tests and the container degree condition.
//!
//! The two vertex parts are kept disjoint by construction: an edge part `e0`
//! always refers to part-0 vertices and `e1` to part-1 vertices, so the same
//! group element may appear on both sides without collision.

use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::{rational_from_u64, ElementSet, GroupDescriptor, Rational};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub e0: ElementSet,
    pub e1: ElementSet,
}

impl Edge {
    pub fn new(e0: ElementSet, e1: ElementSet) -> Self {
        Edge { e0, e1 }
    }
}

/// A pair of vertex sets playing the roles (W0, W1); for sumset instances
/// these are (I, J). Parts are restricted to V0/V1 before evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentPair {
    pub w0: ElementSet,
    pub w1: ElementSet,
}

impl IndependentPair {
    pub fn new(w0: ElementSet, w1: ElementSet) -> Self {
        IndependentPair { w0, w1 }
    }
}

/// Multi-edges are represented by repeated entries in `edges` and all
/// counting queries honor multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedHypergraph {
    v0: ElementSet,
    v1: ElementSet,
    r0: usize,
    r1: usize,
    edges: Vec<Edge>,
}

impl BoundedHypergraph {
    pub fn build(
        v0: ElementSet,
        v1: ElementSet,
        r0: usize,
        r1: usize,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        if r0 == 0 && r1 == 0 {
            return Err(Error::construction("bounds (r0,r1) must not both be zero"));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.e0.len() > r0 {
                return Err(Error::construction(format!(
                    "edge {i}: |e0|={} exceeds r0={r0}",
                    e.e0.len()
                )));
            }
            if e.e1.len() > r1 {
                return Err(Error::construction(format!(
                    "edge {i}: |e1|={} exceeds r1={r1}",
                    e.e1.len()
                )));
            }
            if !e.e0.is_subset(&v0) {
                return Err(Error::construction(format!("edge {i}: e0 not inside V0")));
            }
            if !e.e1.is_subset(&v1) {
                return Err(Error::construction(format!("edge {i}: e1 not inside V1")));
            }
        }
        Ok(BoundedHypergraph {
            v0,
            v1,
            r0,
            r1,
            edges,
        })
    }

    /// Construction for round outputs of the container algorithm, which may
    /// be (0,0)-bounded after the last round. Edges must already fit the
    /// bounds; only debug builds re-check.
    pub(crate) fn from_parts_unchecked(
        v0: ElementSet,
        v1: ElementSet,
        r0: usize,
        r1: usize,
        edges: Vec<Edge>,
    ) -> Self {
        debug_assert!(edges.iter().all(|e| e.e0.len() <= r0 && e.e1.len() <= r1));
        BoundedHypergraph {
            v0,
            v1,
            r0,
            r1,
            edges,
        }
    }

    pub fn v0(&self) -> &ElementSet {
        &self.v0
    }

    pub fn v1(&self) -> &ElementSet {
        &self.v1
    }

    pub fn bounds(&self) -> (usize, usize) {
        (self.r0, self.r1)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Codegree of the pair (L0, L1): edges extending both, with multiplicity.
    pub fn codegree(&self, l0: &ElementSet, l1: &ElementSet) -> usize {
        self.edges
            .iter()
            .filter(|e| l0.is_subset(&e.e0) && l1.is_subset(&e.e1))
            .count()
    }

    /// Maximum codegree over all pairs of sizes exactly (l0, l1), computed by
    /// scanning each edge's sub-tuples rather than all vertex tuples.
    pub fn max_codegree(&self, l0: usize, l1: usize) -> Result<usize> {
        if l0 > self.r0 || l1 > self.r1 || (l0 == 0 && l1 == 0) {
            return Err(Error::domain(format!(
                "max_codegree indices ({l0},{l1}) out of range for ({},{})-bounded",
                self.r0, self.r1
            )));
        }
        let mut counts: BTreeMap<(ElementSet, ElementSet), usize> = BTreeMap::new();
        for e in &self.edges {
            if e.e0.len() < l0 || e.e1.len() < l1 {
                continue;
            }
            for t0 in e.e0.subsets_of_size(l0) {
                for t1 in e.e1.subsets_of_size(l1) {
                    *counts.entry((t0.clone(), t1)).or_insert(0) += 1;
                }
            }
        }
        Ok(counts.values().copied().max().unwrap_or(0))
    }

    /// True iff no edge (e0,e1) has e0 inside V0 \ W0 and e1 inside W1.
    pub fn is_independent(&self, p: &IndependentPair) -> bool {
        let w0 = p.w0.intersection(&self.v0);
        let w1 = p.w1.intersection(&self.v1);
        let complement = self.v0.difference(&w0);
        !self
            .edges
            .iter()
            .any(|e| e.e0.is_subset(&complement) && e.e1.is_subset(&w1))
    }

    /// Membership in F_{<= m}: independent and |W0 ∩ V0| <= m.
    pub fn in_family_leq_m(&self, p: &IndependentPair, m: u64) -> bool {
        self.is_independent(p) && (p.w0.intersection(&self.v0).len() as u64) <= m
    }

    /// Checks the container degree condition for every (l0,l1) in
    /// {0..r0} x {0..r1} minus (0,0), in exact rational arithmetic:
    /// `Delta_(l0,l1) <= R b^{l0+l1-1} / (m^{l0} |V1|^{l1}) e(H) (m/q)^{[l0>0]}`.
    pub fn check_degree_condition(
        &self,
        r_param: &Rational,
        b: u64,
        m: u64,
        q: u64,
    ) -> Result<DegreeConditionReport> {
        if self.edges.is_empty() {
            return Err(Error::domain(
                "degree condition requires a nonempty hypergraph",
            ));
        }
        if b == 0 || m == 0 || q == 0 {
            return Err(Error::domain("degree condition requires positive b, m, q"));
        }
        if b > m || b > self.v1.len() as u64 {
            return Err(Error::domain(format!(
                "degree condition requires b <= min(m, |V1|): b={b}, m={m}, |V1|={}",
                self.v1.len()
            )));
        }
        let e_h = rational_from_u64(self.edge_count() as u64);
        let v1 = rational_from_u64(self.v1.len() as u64);
        let b_r = rational_from_u64(b);
        let m_r = rational_from_u64(m);
        let q_r = rational_from_u64(q);
        let mut entries = Vec::new();
        for l0 in 0..=self.r0 {
            for l1 in 0..=self.r1 {
                if l0 == 0 && l1 == 0 {
                    continue;
                }
                let lhs = self.max_codegree(l0, l1)?;
                let mut rhs = r_param.clone() * &e_h;
                rhs *= pow_ratio(&b_r, (l0 + l1) as i64 - 1);
                rhs /= pow_ratio(&m_r, l0 as i64);
                rhs /= pow_ratio(&v1, l1 as i64);
                if l0 > 0 {
                    rhs *= &m_r / &q_r;
                }
                let pass = rational_from_u64(lhs as u64) <= rhs;
                entries.push(DegreeConditionEntry {
                    l0,
                    l1,
                    lhs: lhs as u64,
                    rhs,
                    pass,
                });
            }
        }
        Ok(DegreeConditionReport { entries })
    }

    /// Line-oriented debug text: header `V0 ... / V1 ... / r0 r1`, then one
    /// edge per line as `e0 ; e1` with `-` for an empty part.
    pub fn to_debug_text(&self) -> String {
        let mut out = String::new();
        let fmt_set = |s: &ElementSet| {
            if s.is_empty() {
                "-".to_string()
            } else {
                s.to_string()
            }
        };
        let _ = writeln!(
            out,
            "V0 {} / V1 {} / {} {}",
            fmt_set(&self.v0),
            fmt_set(&self.v1),
            self.r0,
            self.r1
        );
        for e in &self.edges {
            let _ = writeln!(out, "{} ; {}", fmt_set(&e.e0), fmt_set(&e.e1));
        }
        out
    }

    pub fn from_debug_text(text: &str, g: &GroupDescriptor) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::usage("empty hypergraph text"))?;
        let parts: Vec<&str> = header.split('/').collect();
        if parts.len() != 3 {
            return Err(Error::usage("hypergraph header must have three / sections"));
        }
        let v0_txt = parts[0]
            .trim()
            .strip_prefix("V0")
            .ok_or_else(|| Error::usage("header must start with V0"))?;
        let v1_txt = parts[1]
            .trim()
            .strip_prefix("V1")
            .ok_or_else(|| Error::usage("header second section must start with V1"))?;
        let bounds: Vec<&str> = parts[2].split_whitespace().collect();
        if bounds.len() != 2 {
            return Err(Error::usage("header third section must be `r0 r1`"));
        }
        let r0 = bounds[0]
            .parse::<usize>()
            .map_err(|_| Error::usage("bad r0"))?;
        let r1 = bounds[1]
            .parse::<usize>()
            .map_err(|_| Error::usage("bad r1"))?;
        let v0 = ElementSet::parse(v0_txt, g)?;
        let v1 = ElementSet::parse(v1_txt, g)?;
        let mut edges = Vec::new();
        for line in lines {
            let halves: Vec<&str> = line.split(';').collect();
            if halves.len() != 2 {
                return Err(Error::usage(format!("bad edge line `{line}`")));
            }
            edges.push(Edge::new(
                ElementSet::parse(halves[0], g)?,
                ElementSet::parse(halves[1], g)?,
            ));
        }
        BoundedHypergraph::build(v0, v1, r0, r1, edges)
    }
}

pub(crate) fn pow_ratio(x: &Rational, e: i64) -> Rational {
    let mut acc = Rational::one();
    if e >= 0 {
        for _ in 0..e {
            acc *= x;
        }
    } else {
        for _ in 0..(-e) {
            acc /= x;
        }
    }
    acc
}

#[derive(Debug, Clone)]
pub struct DegreeConditionEntry {
    pub l0: usize,
    pub l1: usize,
    pub lhs: u64,
    pub rhs: Rational,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct DegreeConditionReport {
    pub entries: Vec<DegreeConditionEntry>,
}

impl DegreeConditionReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &DegreeConditionEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// Minimal R making the degree condition hold with equality at its tightest
/// index. Zero when the hypergraph has no positive codegrees.
pub fn minimal_degree_condition_r(
    h: &BoundedHypergraph,
    b: u64,
    m: u64,
    q: u64,
) -> Result<Rational> {
    if h.edge_count() == 0 {
        return Err(Error::domain("minimal R requires a nonempty hypergraph"));
    }
    let (r0, r1) = h.bounds();
    let e_h = rational_from_u64(h.edge_count() as u64);
    let v1 = rational_from_u64(h.v1().len() as u64);
    let b_r = rational_from_u64(b);
    let m_r = rational_from_u64(m);
    let q_r = rational_from_u64(q);
    let mut best = Rational::zero();
    for l0 in 0..=r0 {
        for l1 in 0..=r1 {
            if l0 == 0 && l1 == 0 {
                continue;
            }
            let lhs = rational_from_u64(h.max_codegree(l0, l1)? as u64);
            // coefficient multiplying R at this index
            let mut coeff = e_h.clone();
            coeff *= pow_ratio(&b_r, (l0 + l1) as i64 - 1);
            coeff /= pow_ratio(&m_r, l0 as i64);
            coeff /= pow_ratio(&v1, l1 as i64);
            if l0 > 0 {
                coeff *= &m_r / &q_r;
            }
            if coeff.is_zero() {
                continue;
            }
            let needed = lhs / coeff;
            if needed > best {
                best = needed;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupDescriptor;
    use crate::sumset::build_sum_hypergraph;
    use num::BigInt;

    fn z(n: u32) -> GroupDescriptor {
        GroupDescriptor::integer_window(n).unwrap()
    }

    fn h_empty_y12() -> BoundedHypergraph {
        let g = z(2);
        let y = ElementSet::ints([1, 2]);
        build_sum_hypergraph(&g, &y, &ElementSet::empty(), &y).unwrap()
    }

    #[test]
    fn build_validates_bounds() {
        let v0 = ElementSet::ints([5]);
        let v1 = ElementSet::ints([1, 2, 3]);
        assert!(BoundedHypergraph::build(
            v0.clone(),
            v1.clone(),
            1,
            2,
            vec![Edge::new(ElementSet::ints([5]), ElementSet::ints([1]))]
        )
        .is_ok());
        assert!(BoundedHypergraph::build(
            v0.clone(),
            v1.clone(),
            1,
            2,
            vec![Edge::new(
                ElementSet::ints([5]),
                ElementSet::ints([1, 2, 3])
            )]
        )
        .is_err());
        let empty = BoundedHypergraph::build(v0, v1, 1, 2, vec![]).unwrap();
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn codegree_examples() {
        let h = h_empty_y12();
        assert_eq!(h.edge_count(), 3);
        assert_eq!(h.codegree(&ElementSet::empty(), &ElementSet::empty()), 3);
        assert_eq!(h.codegree(&ElementSet::empty(), &ElementSet::ints([1])), 2);
        assert_eq!(h.codegree(&ElementSet::ints([99]), &ElementSet::empty()), 0);
    }

    #[test]
    fn max_codegree_examples() {
        let h = h_empty_y12();
        assert_eq!(h.max_codegree(1, 2).unwrap(), 1);
        assert_eq!(h.max_codegree(0, 1).unwrap(), 2);
        assert!(h.max_codegree(0, 0).is_err());
        assert!(h.max_codegree(2, 0).is_err());
        let empty =
            BoundedHypergraph::build(ElementSet::empty(), ElementSet::ints([1]), 1, 2, vec![])
                .unwrap();
        assert_eq!(empty.max_codegree(1, 1).unwrap(), 0);
    }

    #[test]
    fn independence_examples() {
        let h = h_empty_y12();
        let p = IndependentPair::new(ElementSet::ints([2, 3, 4]), ElementSet::ints([1, 2]));
        assert!(h.is_independent(&p));
        let p = IndependentPair::new(ElementSet::empty(), ElementSet::ints([1]));
        assert!(!h.is_independent(&p));
        // empty W1 never violates edges with nonempty e1
        let p = IndependentPair::new(ElementSet::empty(), ElementSet::empty());
        assert!(h.is_independent(&p));
    }

    #[test]
    fn family_membership_examples() {
        let h = h_empty_y12();
        // (J+J, J) with J = {1}: J+J = {2}
        let p = IndependentPair::new(ElementSet::ints([2]), ElementSet::ints([1]));
        assert!(h.in_family_leq_m(&p, 1));
        assert!(!h.in_family_leq_m(&p, 0));
        let violated = IndependentPair::new(ElementSet::empty(), ElementSet::ints([1]));
        assert!(!h.in_family_leq_m(&violated, 5));
    }

    #[test]
    fn degree_condition_gate() {
        // H(empty, Y) with e > (eps^2 / 2) |B|^2 passes with R = 2/eps^2.
        let g = z(6);
        let y = ElementSet::ints(1..=6);
        let h = build_sum_hypergraph(&g, &y, &ElementSet::empty(), &y).unwrap();
        let eps = Rational::new(BigInt::from(6), BigInt::from(25));
        let r = Rational::from_integer(BigInt::from(2)) / (&eps * &eps);
        let rep = h.check_degree_condition(&r, 2, 6, 3).unwrap();
        assert!(rep.all_pass());

        // a single heavy multi-edge breaks (1,2)
        let v0 = ElementSet::ints([10]);
        let v1 = ElementSet::ints([1, 2]);
        let heavy = Edge::new(ElementSet::ints([10]), ElementSet::ints([1, 2]));
        let h = BoundedHypergraph::build(v0, v1, 1, 2, vec![heavy.clone(); 50]).unwrap();
        let rep = h
            .check_degree_condition(&Rational::from_integer(BigInt::from(1)), 1, 1, 1)
            .unwrap();
        assert!(rep.failures().any(|e| (e.l0, e.l1) == (1, 2)));
        // (0,0) never appears
        assert!(rep.entries.iter().all(|e| (e.l0, e.l1) != (0, 0)));
    }

    #[test]
    fn debug_text_roundtrip() {
        let h = h_empty_y12();
        let g = z(2);
        let text = h.to_debug_text();
        let back = BoundedHypergraph::from_debug_text(&text, &g).unwrap();
        assert_eq!(h, back);
    }

    #[test]
    fn independence_monotone_under_edge_removal() {
        let h = h_empty_y12();
        let p = IndependentPair::new(ElementSet::ints([2, 3]), ElementSet::ints([1]));
        assert!(!h.is_independent(&p) || h.is_independent(&p));
        let fewer = BoundedHypergraph::build(
            h.v0().clone(),
            h.v1().clone(),
            1,
            2,
            h.edges()[..1].to_vec(),
        )
        .unwrap();
        if h.is_independent(&p) {
            assert!(fewer.is_independent(&p));
        }
    }
}
