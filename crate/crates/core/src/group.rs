//! Ambient abelian groups, their elements, sumsets, subgroups and the
//! subgroup-size function beta(t).
//!
//! Two ambient groups are supported: the integers with a ground-set window
//! `[n] = {1,..,n}` (sums are free to leave the window), and finite abelian
//! groups given as a product of cyclic factors.

use std::fmt;

use num::rational::Ratio;
use num::BigInt;
use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<BigInt>;

/// Maximum order of a finite abelian group for which subgroup enumeration
/// is attempted.
pub const SUBGROUP_ENUM_CAP: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupDescriptor {
    /// The integers, with ground set `[n] = {1,..,n}`. The ambient group is
    /// all of Z: sums land in `[2, 2n]` and set operations never clamp.
    IntegerWindow { n: u32 },
    /// `Z_{m1} x ... x Z_{mk}`, each factor at least 2.
    FiniteAbelian { factors: Vec<u32> },
}

impl GroupDescriptor {
    pub fn integer_window(n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("integer window requires n >= 1"));
        }
        Ok(GroupDescriptor::IntegerWindow { n })
    }

    pub fn finite_abelian(factors: Vec<u32>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::domain(
                "finite abelian group needs at least one factor",
            ));
        }
        if factors.iter().any(|&m| m < 2) {
            return Err(Error::domain("finite abelian factors must be >= 2"));
        }
        Ok(GroupDescriptor::FiniteAbelian { factors })
    }

    /// Parses the CLI syntax: `z:<n>` or `zmod:<m1>x<m2>...`.
    pub fn parse(spec: &str) -> Result<Self> {
        if let Some(rest) = spec.strip_prefix("z:") {
            let n: u32 = rest
                .parse()
                .map_err(|_| Error::usage(format!("bad integer window `{spec}`")))?;
            return GroupDescriptor::integer_window(n);
        }
        if let Some(rest) = spec.strip_prefix("zmod:") {
            let factors = rest
                .split('x')
                .map(|f| {
                    f.parse::<u32>()
                        .map_err(|_| Error::usage(format!("bad factor `{f}` in `{spec}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            return GroupDescriptor::finite_abelian(factors);
        }
        Err(Error::usage(format!(
            "unrecognized group `{spec}` (expected z:<n> or zmod:<m1>x<m2>...)"
        )))
    }

    /// Order of the group, `None` for the (infinite) ambient Z.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupDescriptor::IntegerWindow { .. } => None,
            GroupDescriptor::FiniteAbelian { factors } => {
                Some(factors.iter().map(|&m| m as u64).product())
            }
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupDescriptor::IntegerWindow { .. } => Element::Int(0),
            GroupDescriptor::FiniteAbelian { factors } => Element::Residues(vec![0; factors.len()]),
        }
    }

    /// The ground set Y: `[1..n]` for the integer window, the whole group
    /// otherwise.
    pub fn ground_set(&self) -> ElementSet {
        match self {
            GroupDescriptor::IntegerWindow { n } => {
                ElementSet::from_sorted((1..=*n as i64).map(Element::Int).collect())
            }
            GroupDescriptor::FiniteAbelian { .. } => ElementSet::from_vec(self.all_elements()),
        }
    }

    /// Every element of a finite group, canonically ordered. Panics on the
    /// integer window (there is no finite element list).
    pub fn all_elements(&self) -> Vec<Element> {
        match self {
            GroupDescriptor::IntegerWindow { .. } => {
                panic!("all_elements is only defined for finite groups")
            }
            GroupDescriptor::FiniteAbelian { factors } => {
                let mut out = vec![vec![]];
                for &m in factors {
                    let mut next = Vec::with_capacity(out.len() * m as usize);
                    for prefix in &out {
                        for r in 0..m {
                            let mut t = prefix.clone();
                            t.push(r);
                            next.push(t);
                        }
                    }
                    out = next;
                }
                let mut elems: Vec<Element> = out.into_iter().map(Element::Residues).collect();
                elems.sort();
                elems
            }
        }
    }

    fn check_element(&self, x: &Element) -> Result<()> {
        match (self, x) {
            (GroupDescriptor::IntegerWindow { .. }, Element::Int(_)) => Ok(()),
            (GroupDescriptor::FiniteAbelian { factors }, Element::Residues(rs)) => {
                if rs.len() != factors.len() {
                    return Err(Error::usage("element rank does not match the group"));
                }
                if rs.iter().zip(factors).any(|(&r, &m)| r >= m) {
                    return Err(Error::usage("element residues not in canonical form"));
                }
                Ok(())
            }
            _ => Err(Error::usage("mixed-group operands")),
        }
    }

    fn check_set(&self, s: &ElementSet) -> Result<()> {
        for x in s.iter() {
            self.check_element(x)?;
        }
        Ok(())
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub(crate) fn add_unchecked(&self, x: &Element, y: &Element) -> Element {
        match (self, x, y) {
            (GroupDescriptor::IntegerWindow { .. }, Element::Int(a), Element::Int(b)) => {
                Element::Int(a + b)
            }
            (
                GroupDescriptor::FiniteAbelian { factors },
                Element::Residues(a),
                Element::Residues(b),
            ) => Element::Residues(
                a.iter()
                    .zip(b)
                    .zip(factors)
                    .map(|((&u, &v), &m)| (u + v) % m)
                    .collect(),
            ),
            _ => unreachable!("operands checked"),
        }
    }

    pub fn neg(&self, x: &Element) -> Result<Element> {
        self.check_element(x)?;
        Ok(match (self, x) {
            (GroupDescriptor::IntegerWindow { .. }, Element::Int(a)) => Element::Int(-a),
            (GroupDescriptor::FiniteAbelian { factors }, Element::Residues(a)) => {
                Element::Residues(a.iter().zip(factors).map(|(&u, &m)| (m - u) % m).collect())
            }
            _ => unreachable!(),
        })
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::IntegerWindow { n } => write!(f, "z:{n}"),
            GroupDescriptor::FiniteAbelian { factors } => {
                let parts: Vec<String> = factors.iter().map(|m| m.to_string()).collect();
                write!(f, "zmod:{}", parts.join("x"))
            }
        }
    }
}

/// One group element in canonical form. The derived `Ord` is the canonical
/// linear order: numeric on integers, lexicographic on residue tuples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    Int(i64),
    Residues(Vec<u32>),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(a) => write!(f, "{a}"),
            Element::Residues(rs) => {
                let parts: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

impl Element {
    /// Parses the textual forms produced by `Display`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let rs = inner
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::usage(format!("bad residue `{p}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Element::Residues(rs));
        }
        s.parse::<i64>()
            .map(Element::Int)
            .map_err(|_| Error::usage(format!("bad element `{s}`")))
    }
}

/// A sorted, duplicate-free set of elements of one group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct ElementSet {
    elems: Vec<Element>,
}

impl ElementSet {
    pub fn empty() -> Self {
        ElementSet { elems: vec![] }
    }

    /// Sorts and deduplicates.
    pub fn from_vec(mut elems: Vec<Element>) -> Self {
        elems.sort();
        elems.dedup();
        ElementSet { elems }
    }

    /// Caller guarantees the input is strictly increasing.
    pub fn from_sorted(elems: Vec<Element>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        ElementSet { elems }
    }

    pub fn singleton(x: Element) -> Self {
        ElementSet { elems: vec![x] }
    }

    pub fn ints(xs: impl IntoIterator<Item = i64>) -> Self {
        ElementSet::from_vec(xs.into_iter().map(Element::Int).collect())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[Element] {
        &self.elems
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn insert(&mut self, x: Element) -> bool {
        match self.elems.binary_search(&x) {
            Ok(_) => false,
            Err(pos) => {
                self.elems.insert(pos, x);
                true
            }
        }
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut v = self.elems.clone();
        v.extend(other.elems.iter().cloned());
        ElementSet::from_vec(v)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet::from_sorted(self.iter().filter(|x| other.contains(x)).cloned().collect())
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        ElementSet::from_sorted(
            self.iter()
                .filter(|x| !other.contains(x))
                .cloned()
                .collect(),
        )
    }

    /// All subsets of the given size, in lexicographic order.
    pub fn subsets_of_size(&self, k: usize) -> Vec<ElementSet> {
        let n = self.elems.len();
        if k > n {
            return vec![];
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(ElementSet::from_sorted(
                idx.iter().map(|&i| self.elems[i].clone()).collect(),
            ));
            // next combination
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] != i + n - k {
                    break;
                }
                if i == 0 {
                    return out;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    pub fn parse(s: &str, _g: &GroupDescriptor) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(ElementSet::empty());
        }
        // residue tuples contain commas, so split on top-level commas only
        let mut parts = Vec::new();
        let mut depth = 0usize;
        let mut cur = String::new();
        for ch in s.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' => {
                    depth = depth.saturating_sub(1);
                    cur.push(ch);
                }
                ',' if depth == 0 => {
                    parts.push(std::mem::take(&mut cur));
                }
                _ => cur.push(ch),
            }
        }
        if !cur.trim().is_empty() {
            parts.push(cur);
        }
        let elems = parts
            .iter()
            .map(|p| Element::parse(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(ElementSet::from_vec(elems))
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromIterator<Element> for ElementSet {
    fn from_iter<T: IntoIterator<Item = Element>>(iter: T) -> Self {
        ElementSet::from_vec(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = &'a Element;
    type IntoIter = std::slice::Iter<'a, Element>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// A finite subgroup given by its full element list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subgroup {
    pub elements: ElementSet,
}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Exhaustive closure check: identity, negation, addition.
    pub fn is_closed(&self, g: &GroupDescriptor) -> bool {
        if !self.elements.contains(&g.identity()) {
            return false;
        }
        for x in self.elements.iter() {
            match g.neg(x) {
                Ok(n) if self.elements.contains(&n) => {}
                _ => return false,
            }
            for y in self.elements.iter() {
                match g.add(x, y) {
                    Ok(s) if self.elements.contains(&s) => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// `generated_subgroup` result: the subgroup generated by a set is either
/// finite or (in the ambient Z) infinite cyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratedSubgroup {
    Finite(Subgroup),
    Infinite,
}

/// Sumset `{a+b : a in A, b in B}`, canonically sorted.
pub fn sumset(g: &GroupDescriptor, a: &ElementSet, b: &ElementSet) -> Result<ElementSet> {
    g.check_set(a)?;
    g.check_set(b)?;
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            out.push(g.add_unchecked(x, y));
        }
    }
    Ok(ElementSet::from_vec(out))
}

/// Smallest subgroup containing S, by closure iteration. In the ambient Z
/// any nonzero generator produces the infinite marker.
pub fn generated_subgroup(g: &GroupDescriptor, s: &ElementSet) -> Result<GeneratedSubgroup> {
    g.check_set(s)?;
    match g {
        GroupDescriptor::IntegerWindow { .. } => {
            let zero = g.identity();
            if s.iter().all(|x| *x == zero) {
                Ok(GeneratedSubgroup::Finite(Subgroup {
                    elements: ElementSet::singleton(zero),
                }))
            } else {
                Ok(GeneratedSubgroup::Infinite)
            }
        }
        GroupDescriptor::FiniteAbelian { .. } => {
            let mut closure = ElementSet::singleton(g.identity());
            for x in s.iter() {
                closure.insert(x.clone());
                closure.insert(g.neg(x)?);
            }
            loop {
                let mut grew = false;
                let snapshot: Vec<Element> = closure.iter().cloned().collect();
                for x in &snapshot {
                    for y in &snapshot {
                        let z = g.add_unchecked(x, y);
                        if closure.insert(z) {
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            Ok(GeneratedSubgroup::Finite(Subgroup { elements: closure }))
        }
    }
}

/// Every subgroup of a finite abelian group, each exactly once.
///
/// Closure construction: start from the trivial subgroup and repeatedly
/// adjoin single generators until no new subgroup appears. Every subgroup is
/// reachable this way because it is generated by finitely many elements
/// added one at a time.
pub fn enumerate_subgroups(g: &GroupDescriptor) -> Result<Vec<Subgroup>> {
    enumerate_subgroups_capped(g, SUBGROUP_ENUM_CAP)
}

pub fn enumerate_subgroups_capped(g: &GroupDescriptor, cap: u64) -> Result<Vec<Subgroup>> {
    let order = match g.order() {
        Some(o) => o,
        None => {
            return Err(Error::domain(
                "subgroup enumeration requires a finite abelian group",
            ))
        }
    };
    if order > cap {
        return Err(Error::resource(format!(
            "group order {order} exceeds subgroup enumeration cap {cap}"
        )));
    }
    let elements = g.all_elements();
    let trivial = ElementSet::singleton(g.identity());
    let mut known: std::collections::BTreeSet<ElementSet> = std::collections::BTreeSet::new();
    known.insert(trivial);
    loop {
        let mut fresh: Vec<ElementSet> = Vec::new();
        for h in &known {
            for x in &elements {
                if h.contains(x) {
                    continue;
                }
                let mut gens: Vec<Element> = h.iter().cloned().collect();
                gens.push(x.clone());
                match generated_subgroup(g, &ElementSet::from_vec(gens))? {
                    GeneratedSubgroup::Finite(sub) => {
                        if !known.contains(&sub.elements) {
                            fresh.push(sub.elements);
                        }
                    }
                    GeneratedSubgroup::Infinite => unreachable!("finite group"),
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        known.extend(fresh);
    }
    Ok(known
        .into_iter()
        .map(|elements| Subgroup { elements })
        .collect())
}

/// Sizes realized by subgroups of `g`. For a finite abelian group a subgroup
/// of every order dividing |G| exists, so these are exactly the divisors of
/// |G|; for the ambient Z only the trivial subgroup is finite.
pub fn subgroup_sizes(g: &GroupDescriptor) -> Vec<u64> {
    match g.order() {
        None => vec![1],
        Some(order) => {
            let mut divs: Vec<u64> = (1..=order).filter(|d| order % d == 0).collect();
            divs.sort_unstable();
            divs
        }
    }
}

/// beta(t): the size of the biggest subgroup of order at most t.
pub fn beta(g: &GroupDescriptor, t: f64) -> Result<u64> {
    if t.is_nan() || t < 1.0 {
        return Err(Error::domain(format!("beta requires t >= 1, got {t}")));
    }
    Ok(subgroup_sizes(g)
        .into_iter()
        .filter(|&d| (d as f64) <= t)
        .max()
        .unwrap_or(1))
}

/// beta with an exact rational threshold. Used where the threshold is a
/// paper formula evaluated in exact arithmetic.
pub fn beta_exact(g: &GroupDescriptor, t: &Rational) -> Result<u64> {
    if *t < Rational::from_integer(BigInt::from(1)) {
        return Err(Error::domain(format!("beta requires t >= 1, got {t}")));
    }
    Ok(subgroup_sizes(g)
        .into_iter()
        .filter(|&d| Rational::from_integer(BigInt::from(d)) <= *t)
        .max()
        .unwrap_or(1))
}

pub fn rational_from_u64(x: u64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// Parses `p/q`, an integer, or a decimal like `0.24` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::usage(format!("bad numerator `{p}`")))?;
        let den: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::usage(format!("bad denominator `{q}`")))?;
        if den == BigInt::from(0) {
            return Err(Error::usage("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let digits = format!("{whole}{frac}");
        let num: BigInt = digits
            .parse()
            .map_err(|_| Error::usage(format!("bad decimal `{s}`")))?;
        let den = num::pow::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    let num: BigInt = s
        .parse()
        .map_err(|_| Error::usage(format!("bad rational `{s}`")))?;
    Ok(Rational::from_integer(num))
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
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

    #[test]
    fn add_integrow_and_residues() {
        let g = z(10);
        assert_eq!(
            g.add(&Element::Int(3), &Element::Int(4)).unwrap(),
            Element::Int(7)
        );
        let h = zmod(&[4, 2]);
        assert_eq!(
            h.add(
                &Element::Residues(vec![3, 1]),
                &Element::Residues(vec![2, 1])
            )
            .unwrap(),
            Element::Residues(vec![1, 0])
        );
        // identity
        let x = Element::Residues(vec![2, 1]);
        assert_eq!(h.add(&x, &h.identity()).unwrap(), x);
    }

    #[test]
    fn add_rejects_mixed_groups() {
        let g = z(10);
        let err = g.add(&Element::Int(1), &Element::Residues(vec![0]));
        assert!(matches!(err, Err(Error::Usage(_))));
    }

    #[test]
    fn sumset_examples() {
        let g = z(10);
        let a = ElementSet::ints([0, 1]);
        assert_eq!(sumset(&g, &a, &a).unwrap(), ElementSet::ints([0, 1, 2]));
        let b = ElementSet::ints([1, 2, 3]);
        let bb = sumset(&g, &b, &b).unwrap();
        assert_eq!(bb, ElementSet::ints([2, 3, 4, 5, 6]));
        assert_eq!(bb.len(), 5);
        assert!(sumset(&g, &a, &ElementSet::empty()).unwrap().is_empty());
    }

    #[test]
    fn generated_subgroup_examples() {
        let g = zmod(&[12]);
        let got = generated_subgroup(&g, &ElementSet::from_vec(vec![Element::Residues(vec![4])]))
            .unwrap();
        match got {
            GeneratedSubgroup::Finite(sub) => {
                assert_eq!(sub.order(), 3);
                assert!(sub.elements.contains(&Element::Residues(vec![8])));
                assert!(sub.is_closed(&g));
            }
            _ => panic!("expected finite"),
        }
        let zg = z(5);
        assert_eq!(
            generated_subgroup(&zg, &ElementSet::ints([0])).unwrap(),
            GeneratedSubgroup::Finite(Subgroup {
                elements: ElementSet::ints([0])
            })
        );
        assert_eq!(
            generated_subgroup(&zg, &ElementSet::ints([5])).unwrap(),
            GeneratedSubgroup::Infinite
        );
    }

    #[test]
    fn subgroups_of_z12_and_klein() {
        let g = zmod(&[12]);
        let subs = enumerate_subgroups(&g).unwrap();
        let mut orders: Vec<u64> = subs.iter().map(|s| s.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 3, 4, 6, 12]);
        assert!(subs.iter().all(|s| s.is_closed(&g)));

        let k = zmod(&[2, 2]);
        let subs = enumerate_subgroups(&k).unwrap();
        let mut orders: Vec<u64> = subs.iter().map(|s| s.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 4]);

        let p = zmod(&[7]);
        assert_eq!(enumerate_subgroups(&p).unwrap().len(), 2);
    }

    #[test]
    fn beta_examples() {
        let zg = z(100);
        assert_eq!(beta(&zg, 17.0).unwrap(), 1);
        assert_eq!(beta(&zmod(&[12]), 5.0).unwrap(), 4);
        assert_eq!(beta(&zmod(&[2, 2]), 3.0).unwrap(), 2);
        assert!(beta(&zg, 0.5).is_err());
        // beta(|g|) = |g|, and beta is non-decreasing
        let g = zmod(&[4, 3]);
        assert_eq!(beta(&g, 12.0).unwrap(), 12);
        let mut last = 0;
        for t in 1..=12 {
            let b = beta(&g, t as f64).unwrap();
            assert!(b >= last);
            last = b;
        }
    }

    #[test]
    fn beta_matches_enumeration_oracle() {
        for factors in [
            vec![12],
            vec![2, 2],
            vec![9],
            vec![8],
            vec![2, 6],
            vec![3, 3],
        ] {
            let g = zmod(&factors);
            let subs = enumerate_subgroups(&g).unwrap();
            for t in 1..=g.order().unwrap() {
                let via_divisors = beta(&g, t as f64).unwrap();
                let via_subs = subs
                    .iter()
                    .map(|s| s.order())
                    .filter(|&o| o <= t)
                    .max()
                    .unwrap();
                assert_eq!(via_divisors, via_subs, "t={t} in {g}");
            }
        }
    }

    #[test]
    fn parse_roundtrips() {
        for spec in ["z:12", "zmod:4x2", "zmod:9"] {
            let g = GroupDescriptor::parse(spec).unwrap();
            assert_eq!(g.to_string(), spec);
        }
        assert!(GroupDescriptor::parse("q:3").is_err());
        assert!(GroupDescriptor::parse("zmod:1").is_err());

        let g = zmod(&[4, 2]);
        let s = ElementSet::from_vec(vec![
            Element::Residues(vec![0, 1]),
            Element::Residues(vec![3, 0]),
        ]);
        assert_eq!(ElementSet::parse(&s.to_string(), &g).unwrap(), s);
    }

    #[test]
    fn subsets_of_size_enumerates_combinations() {
        let s = ElementSet::ints([1, 2, 3, 4]);
        assert_eq!(s.subsets_of_size(2).len(), 6);
        assert_eq!(s.subsets_of_size(0), vec![ElementSet::empty()]);
        assert_eq!(s.subsets_of_size(5).len(), 0);
    }
}
