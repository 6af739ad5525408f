//! The asymmetric container algorithm: delta-threshold tables, the
//! single-round fingerprint loop, container construction and deterministic
//! fingerprint replay.
//!
//! All threshold comparisons run in exact rational arithmetic so that every
//! branch decision is bit-reproducible; this is what makes the fingerprint
//! map a pure function.

use std::collections::BTreeMap;

use num::BigInt;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{rational_from_u64, Element, ElementSet, Rational};
use crate::hypergraph::{pow_ratio, BoundedHypergraph, Edge, IndependentPair};

/// Which reading of the final container-definition step to use. `Literal`
/// assigns `(W, empty)` at a part-0 stop, which cannot satisfy `J subset B`
/// for nonempty J; `Corrected` keeps the untouched part whole instead and
/// is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContainerReading {
    #[default]
    Corrected,
    Literal,
}

#[derive(Debug, Clone)]
pub struct ContainerParams {
    pub r0: usize,
    pub r1: usize,
    pub big_r: Rational,
    pub b: u64,
    pub m: u64,
    pub q: u64,
    pub reading: ContainerReading,
}

impl ContainerParams {
    pub fn new(r0: usize, r1: usize, big_r: Rational, b: u64, m: u64, q: u64) -> Result<Self> {
        if r0 == 0 && r1 == 0 {
            return Err(Error::domain("container bounds must not both be zero"));
        }
        if big_r <= Rational::zero() {
            return Err(Error::domain("container parameter R must be positive"));
        }
        if b == 0 || m == 0 || q == 0 {
            return Err(Error::domain(
                "container parameters b, m, q must be positive",
            ));
        }
        Ok(ContainerParams {
            r0,
            r1,
            big_r,
            b,
            m,
            q,
            reading: ContainerReading::default(),
        })
    }

    pub fn with_reading(mut self, reading: ContainerReading) -> Self {
        self.reading = reading;
        self
    }

    /// delta = 2^{-(r0+r1+1)(r0+r1)} / R.
    pub fn delta(&self) -> Rational {
        let e = ((self.r0 + self.r1 + 1) * (self.r0 + self.r1)) as i64;
        pow_ratio(&Rational::from_integer(BigInt::from(2)), -e) / &self.big_r
    }

    /// alpha_s = 2^{-s(r0+r1+1)}.
    fn alpha_s(&self, s: usize) -> Rational {
        let e = (s * (self.r0 + self.r1 + 1)) as i64;
        pow_ratio(&Rational::from_integer(BigInt::from(2)), -e)
    }

    /// beta_s = alpha_s (b/v1)^{min(r1,s)} (b/m)^{max(0,s-r1)}.
    fn beta_s(&self, s: usize, v1: u64, m: u64) -> Rational {
        let b = rational_from_u64(self.b);
        let mut out = self.alpha_s(s);
        out *= pow_ratio(&(b.clone() / rational_from_u64(v1)), s.min(self.r1) as i64);
        out *= pow_ratio(
            &(b / rational_from_u64(m)),
            s.saturating_sub(self.r1) as i64,
        );
        out
    }
}

/// The uniformity ladder U = {(1,0),..,(r0,0),(r0,1),..,(r0,r1)}, listed in
/// processing order: round inputs from (r0,r1) down to (1,0).
pub fn ladder(r0: usize, r1: usize) -> Vec<(usize, usize)> {
    let mut levels = Vec::with_capacity(r0 + r1);
    for i1 in (1..=r1).rev() {
        levels.push((r0, i1));
    }
    for i0 in (1..=r0).rev() {
        levels.push((i0, 0));
    }
    levels
}

/// Index pairs checked at uniformity (i0,i1): {0..i0} x {0..i1} minus (0,0).
pub fn codegree_indices(i0: usize, i1: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for l0 in 0..=i0 {
        for l1 in 0..=i1 {
            if l0 + l1 > 0 {
                out.push((l0, l1));
            }
        }
    }
    out
}

/// c is compatible with (i0,i1): c = 1 exactly when i1 > 0.
pub fn compatible_c(i0: usize, i1: usize) -> Result<usize> {
    if i0 == 0 && i1 == 0 {
        return Err(Error::domain(
            "no compatible coordinate for uniformity (0,0)",
        ));
    }
    Ok(if i1 > 0 { 1 } else { 0 })
}

/// Per-level degree thresholds. Base layer holds the input hypergraph's max
/// codegrees; lower layers follow the two-branch recursion.
#[derive(Debug, Clone)]
pub struct DeltaTable {
    entries: BTreeMap<(usize, usize, usize, usize), Rational>,
    r0: usize,
    r1: usize,
}

impl DeltaTable {
    pub fn get(&self, i0: usize, i1: usize, l0: usize, l1: usize) -> Option<&Rational> {
        self.entries.get(&(i0, i1, l0, l1))
    }

    pub fn indices(&self) -> impl Iterator<Item = &(usize, usize, usize, usize)> {
        self.entries.keys()
    }

    pub fn bounds(&self) -> (usize, usize) {
        (self.r0, self.r1)
    }
}

/// Max codegrees of `h` over every index of the base layer.
pub fn base_deltas(h: &BoundedHypergraph) -> Result<BTreeMap<(usize, usize), u64>> {
    let (r0, r1) = h.bounds();
    let mut base = BTreeMap::new();
    for (l0, l1) in codegree_indices(r0, r1) {
        base.insert((l0, l1), h.max_codegree(l0, l1)? as u64);
    }
    Ok(base)
}

/// Builds the full table by the recursion: at (r0,i1) with i1 < r1,
/// `max{2 T[(r0,i1+1)][(l0,l1+1)], (b/v1) T[(r0,i1+1)][(l0,l1)]}`, and at
/// (i0,0) with i0 < r0 the analogous step with b/m.
pub fn delta_table(
    base: &BTreeMap<(usize, usize), u64>,
    params: &ContainerParams,
    v1: u64,
) -> Result<DeltaTable> {
    let (r0, r1) = (params.r0, params.r1);
    if v1 == 0 {
        return Err(Error::domain("delta table requires |V1| >= 1"));
    }
    let mut entries: BTreeMap<(usize, usize, usize, usize), Rational> = BTreeMap::new();
    for (l0, l1) in codegree_indices(r0, r1) {
        let v = base.get(&(l0, l1)).ok_or_else(|| {
            Error::construction(format!("delta table base layer missing ({l0},{l1})"))
        })?;
        entries.insert((r0, r1, l0, l1), rational_from_u64(*v));
    }
    let b_over_v1 = rational_from_u64(params.b) / rational_from_u64(v1);
    let b_over_m = rational_from_u64(params.b) / rational_from_u64(params.m);
    let two = Rational::from_integer(BigInt::from(2));
    // down the (r0, i1) rungs; both parent entries always exist because
    // (l0, l1+1) and (l0, l1) lie in the index set one level up
    for i1 in (0..r1).rev() {
        for (l0, l1) in codegree_indices(r0, i1) {
            let up_shift = entries
                .get(&(r0, i1 + 1, l0, l1 + 1))
                .cloned()
                .expect("recursion index in range");
            let up_same = entries
                .get(&(r0, i1 + 1, l0, l1))
                .cloned()
                .expect("recursion index in range");
            let val = (&two * up_shift).max(&b_over_v1 * up_same);
            entries.insert((r0, i1, l0, l1), val);
        }
    }
    // down the (i0, 0) rungs
    for i0 in (1..r0).rev() {
        for (l0, l1) in codegree_indices(i0, 0) {
            let up_shift = entries
                .get(&(i0 + 1, 0, l0 + 1, l1))
                .cloned()
                .expect("recursion index in range");
            let up_same = entries
                .get(&(i0 + 1, 0, l0, l1))
                .cloned()
                .expect("recursion index in range");
            let val = (&two * up_shift).max(&b_over_m * up_same);
            entries.insert((i0, 0, l0, l1), val);
        }
    }
    let table = DeltaTable { entries, r0, r1 };
    #[cfg(debug_assertions)]
    for &(i0, i1, l0, l1) in table.entries.keys() {
        let explicit = delta_explicit(base, params, v1, i0, i1, l0, l1)
            .expect("table index valid for the closed form");
        debug_assert_eq!(
            table.entries[&(i0, i1, l0, l1)],
            explicit,
            "recursion and closed form disagree at ({i0},{i1},{l0},{l1})"
        );
    }
    Ok(table)
}

/// The closed form: max over 0 <= d_j <= r_j - i_j of
/// `2^{d0+d1} (b/v1)^{r1-i1-d1} (b/m)^{r0-i0-d0} base[(l0+d0, l1+d1)]`.
/// Must agree with [`delta_table`] entry-for-entry.
pub fn delta_explicit(
    base: &BTreeMap<(usize, usize), u64>,
    params: &ContainerParams,
    v1: u64,
    i0: usize,
    i1: usize,
    l0: usize,
    l1: usize,
) -> Result<Rational> {
    let (r0, r1) = (params.r0, params.r1);
    let in_ladder = (i0 == r0 && i1 <= r1) || (i1 == 0 && i0 >= 1 && i0 <= r0);
    if !in_ladder || l0 > i0 || l1 > i1 || (l0 == 0 && l1 == 0) {
        return Err(Error::domain(format!(
            "delta_explicit indices out of range: ({i0},{i1},{l0},{l1})"
        )));
    }
    let b_over_v1 = rational_from_u64(params.b) / rational_from_u64(v1);
    let b_over_m = rational_from_u64(params.b) / rational_from_u64(params.m);
    let two = Rational::from_integer(BigInt::from(2));
    let mut best: Option<Rational> = None;
    for d0 in 0..=(r0 - i0) {
        for d1 in 0..=(r1 - i1) {
            let base_val = base.get(&(l0 + d0, l1 + d1)).ok_or_else(|| {
                Error::construction(format!(
                    "delta_explicit missing base entry ({},{})",
                    l0 + d0,
                    l1 + d1
                ))
            })?;
            let mut term = rational_from_u64(*base_val);
            term *= pow_ratio(&two, (d0 + d1) as i64);
            term *= pow_ratio(&b_over_v1, (r1 - i1 - d1) as i64);
            term *= pow_ratio(&b_over_m, (r0 - i0 - d0) as i64);
            best = Some(match best {
                None => term,
                Some(cur) => cur.max(term),
            });
        }
    }
    Ok(best.expect("index ranges nonempty"))
}

/// Vertex of the bipartitioned ground set. The derived order is the linear
/// order used by the round loop: part 0 before part 1, then element order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Vertex {
    pub part: usize,
    pub elem: Element,
}

/// Vertex-set pairs whose codegree in `gstar` reaches half the tabled
/// threshold for the given reduced level.
pub fn heavy_pairs(
    gstar: &BoundedHypergraph,
    table: &DeltaTable,
    i0p: usize,
    i1p: usize,
    l0: usize,
    l1: usize,
) -> Result<Vec<(ElementSet, ElementSet)>> {
    let threshold = table
        .get(i0p, i1p, l0, l1)
        .ok_or_else(|| Error::domain(format!("no table entry at ({i0p},{i1p},{l0},{l1})")))?;
    let mut counts: BTreeMap<(ElementSet, ElementSet), u64> = BTreeMap::new();
    for e in gstar.edges() {
        if e.e0.len() < l0 || e.e1.len() < l1 {
            continue;
        }
        for t0 in e.e0.subsets_of_size(l0) {
            for t1 in e.e1.subsets_of_size(l1) {
                *counts.entry((t0.clone(), t1)).or_insert(0) += 1;
            }
        }
    }
    let two = rational_from_u64(2);
    Ok(counts
        .into_iter()
        .filter(|(_, c)| &two * rational_from_u64(*c) >= *threshold)
        .map(|(k, _)| k)
        .collect())
}

#[derive(Debug, Clone)]
pub struct IterRecord {
    pub j: usize,
    pub c: usize,
    pub vertex: Element,
    pub selected: bool,
    pub alive_before: usize,
    pub gstar_after: usize,
}

/// Output of one round: the reduced hypergraph handed to the next level,
/// the picked vertex sequence, and the S/W index partition.
#[derive(Debug, Clone)]
pub struct RoundOutput {
    /// Next-level hypergraph: trimmed constraints plus carried constraints
    /// that have no vertex in the processed coordinate.
    pub reduced: BoundedHypergraph,
    /// Only the constraints trimmed in this round; the degree-propagation
    /// bound applies to these.
    pub trimmed: BoundedHypergraph,
    pub inert_count: usize,
    pub vseq: Vec<Vertex>,
    pub s_idx: Vec<usize>,
    pub w_idx: Vec<usize>,
    pub l: usize,
    pub guard_triggered: bool,
    pub iters: Vec<IterRecord>,
}

/// One round of the fingerprint loop at uniformity (i0,i1).
///
/// Constraints whose coordinate-c part is already empty carry no information
/// for this round and would stall the vertex choice, so they are set aside
/// at round start and rejoin the output for the next level. With them out of
/// the way every iteration removes at least one live constraint, so the loop
/// terminates without the zero-degree stop (which is kept as a recorded
/// safety stop).
pub fn run_round(
    g: &BoundedHypergraph,
    i0: usize,
    i1: usize,
    membership: &dyn Fn(&Vertex) -> bool,
    params: &ContainerParams,
    table: &DeltaTable,
) -> Result<RoundOutput> {
    let c = compatible_c(i0, i1)?;
    let (i0p, i1p) = if c == 0 { (i0 - 1, i1) } else { (i0, i1 - 1) };
    if g.edges().iter().any(|e| e.e0.len() > i0 || e.e1.len() > i1) {
        return Err(Error::domain(format!(
            "round input is not ({i0},{i1})-bounded"
        )));
    }
    fn coord(e: &Edge, c: usize) -> &ElementSet {
        if c == 0 {
            &e.e0
        } else {
            &e.e1
        }
    }

    let mut live: Vec<Edge> = Vec::new();
    let mut inert: Vec<Edge> = Vec::new();
    for e in g.edges() {
        if coord(e, c).is_empty() {
            inert.push(e.clone());
        } else {
            live.push(e.clone());
        }
    }
    let inert_count = inert.len();

    let reduced_indices = codegree_indices(i0p, i1p);
    let thresholds: Vec<(usize, usize, Rational)> = reduced_indices
        .iter()
        .map(|&(l0, l1)| {
            table
                .get(i0p, i1p, l0, l1)
                .cloned()
                .map(|t| (l0, l1, t))
                .ok_or_else(|| {
                    Error::construction(format!(
                        "delta table has no entry at ({i0p},{i1p},{l0},{l1})"
                    ))
                })
        })
        .collect::<Result<_>>()?;

    let mut gstar: Vec<Edge> = Vec::new();
    // codegrees of gstar per reduced index, updated incrementally
    let mut gstar_counts: BTreeMap<(usize, usize), BTreeMap<(ElementSet, ElementSet), u64>> =
        BTreeMap::new();
    let mut vseq: Vec<Vertex> = Vec::new();
    let mut s_idx: Vec<usize> = Vec::new();
    let mut w_idx: Vec<usize> = Vec::new();
    let mut iters: Vec<IterRecord> = Vec::new();
    let mut guard_triggered = false;
    let mut cleanup_needed = true; // zero thresholds bite even before growth
    let mut j = 0usize;

    loop {
        // (S1)
        if s_idx.len() as u64 == params.b || live.is_empty() {
            break;
        }
        // (S2) the c-maximum vertex
        let mut deg: BTreeMap<&Element, usize> = BTreeMap::new();
        for e in &live {
            for v in coord(e, c).iter() {
                *deg.entry(v).or_insert(0) += 1;
            }
        }
        let best = deg
            .iter()
            .map(|(v, d)| (*d, (*v).clone()))
            .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
        let (max_deg, v_elem) = match best {
            Some(x) => x,
            None => {
                guard_triggered = true;
                break;
            }
        };
        if max_deg == 0 {
            guard_triggered = true;
            break;
        }
        let vertex = Vertex {
            part: c,
            elem: v_elem.clone(),
        };
        let alive_before = live.len();

        // (S3)
        let selected = membership(&vertex);
        if selected {
            s_idx.push(j);
            for e in &live {
                if coord(e, c).contains(&v_elem) {
                    let trimmed = if c == 0 {
                        Edge::new(
                            e.e0.difference(&ElementSet::singleton(v_elem.clone())),
                            e.e1.clone(),
                        )
                    } else {
                        Edge::new(
                            e.e0.clone(),
                            e.e1.difference(&ElementSet::singleton(v_elem.clone())),
                        )
                    };
                    for &(l0, l1) in &reduced_indices {
                        if trimmed.e0.len() < l0 || trimmed.e1.len() < l1 {
                            continue;
                        }
                        let m = gstar_counts.entry((l0, l1)).or_default();
                        for t0 in trimmed.e0.subsets_of_size(l0) {
                            for t1 in trimmed.e1.subsets_of_size(l1) {
                                *m.entry((t0.clone(), t1)).or_insert(0) += 1;
                            }
                        }
                    }
                    gstar.push(trimmed);
                }
            }
            cleanup_needed = true;
        } else {
            w_idx.push(j);
        }

        // (S4a) drop constraints containing the pivot in coordinate c
        live.retain(|e| !coord(e, c).contains(&v_elem));

        // (S4b) drop constraints extending a pair that became heavy
        if cleanup_needed {
            let two = rational_from_u64(2);
            live.retain(|e| {
                for (l0, l1, threshold) in &thresholds {
                    if e.e0.len() < *l0 || e.e1.len() < *l1 {
                        continue;
                    }
                    let counts = gstar_counts.get(&(*l0, *l1));
                    for t0 in e.e0.subsets_of_size(*l0) {
                        for t1 in e.e1.subsets_of_size(*l1) {
                            let deg = counts
                                .and_then(|m| m.get(&(t0.clone(), t1.clone())))
                                .copied()
                                .unwrap_or(0);
                            if &two * rational_from_u64(deg) >= *threshold {
                                return false;
                            }
                        }
                    }
                }
                true
            });
            cleanup_needed = false;
        }

        vseq.push(vertex);
        iters.push(IterRecord {
            j,
            c,
            vertex: v_elem,
            selected,
            alive_before,
            gstar_after: gstar.len(),
        });
        j += 1;
    }

    let l = j;
    debug_assert!(
        {
            let mut seen = vseq.clone();
            seen.sort();
            seen.dedup();
            seen.len() == vseq.len()
        },
        "pivot sequence must be injective"
    );
    let trimmed_h = BoundedHypergraph::from_parts_unchecked(
        g.v0().clone(),
        g.v1().clone(),
        i0p,
        i1p,
        gstar.clone(),
    );
    let mut reduced_edges = gstar;
    reduced_edges.extend(inert);
    let reduced = BoundedHypergraph::from_parts_unchecked(
        g.v0().clone(),
        g.v1().clone(),
        i0p,
        i1p,
        reduced_edges,
    );
    Ok(RoundOutput {
        reduced,
        trimmed: trimmed_h,
        inert_count,
        vseq,
        s_idx,
        w_idx,
        l,
        guard_triggered,
        iters,
    })
}

/// The (S0, S1) certificate. Replaying it through the rounds reproduces the
/// container without knowledge of (I, J).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub s0: ElementSet,
    pub s1: ElementSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainerPair {
    pub a: ElementSet,
    pub b: ElementSet,
}

#[derive(Debug, Clone)]
pub struct RoundRecord {
    pub level: (usize, usize),
    pub c: usize,
    pub l: usize,
    pub s_verts: ElementSet,
    pub w_verts: ElementSet,
    pub e_input: usize,
    pub e_trimmed: usize,
    pub e_reduced: usize,
    pub inert_count: usize,
    pub guard_triggered: bool,
    /// Whether the progress-lemma hypotheses held on entry, i.e. whether the
    /// trichotomy was asserted for this round.
    pub trichotomy_checked: bool,
    pub iters: Vec<IterRecord>,
}

#[derive(Debug, Clone, Default)]
pub struct RunTrace {
    pub rounds: Vec<RoundRecord>,
    /// Index of the round at which the container was defined.
    pub stop_round: usize,
    pub stop_c: usize,
}

#[derive(Debug, Clone)]
pub struct BuildOutcome {
    pub fingerprint: Fingerprint,
    pub container: ContainerPair,
    pub trace: RunTrace,
}

enum MembershipSource<'a> {
    Witness {
        i: &'a ElementSet,
        j: &'a ElementSet,
    },
    Fingerprint {
        s0: &'a ElementSet,
        s1: &'a ElementSet,
    },
}

impl MembershipSource<'_> {
    fn test(&self, c: usize, v: &Vertex) -> bool {
        match self {
            MembershipSource::Witness { i, j } => {
                if c == 0 {
                    !i.contains(&v.elem)
                } else {
                    j.contains(&v.elem)
                }
            }
            MembershipSource::Fingerprint { s0, s1 } => {
                if c == 0 {
                    s0.contains(&v.elem)
                } else {
                    s1.contains(&v.elem)
                }
            }
        }
    }
}

fn container_from_round(
    reading: ContainerReading,
    c: usize,
    w_verts: &ElementSet,
    v1: &ElementSet,
) -> ContainerPair {
    match (reading, c) {
        (ContainerReading::Corrected, 0) => ContainerPair {
            a: w_verts.clone(),
            b: v1.clone(),
        },
        (ContainerReading::Corrected, _) => ContainerPair {
            a: ElementSet::empty(),
            b: v1.difference(w_verts),
        },
        (ContainerReading::Literal, 0) => ContainerPair {
            a: w_verts.clone(),
            b: ElementSet::empty(),
        },
        (ContainerReading::Literal, _) => ContainerPair {
            a: ElementSet::empty(),
            b: v1.difference(w_verts),
        },
    }
}

fn construct(
    h: &BoundedHypergraph,
    params: &ContainerParams,
    membership: MembershipSource<'_>,
    witness: Option<(&ElementSet, &ElementSet)>,
) -> Result<(Fingerprint, ContainerPair, RunTrace)> {
    let (r0, r1) = h.bounds();
    if (r0, r1) != (params.r0, params.r1) {
        return Err(Error::usage(format!(
            "params are ({},{})-bounded but hypergraph is ({r0},{r1})-bounded",
            params.r0, params.r1
        )));
    }
    let v1_len = h.v1().len() as u64;

    // degenerate replay case: with no constraints every round is empty and
    // the container keeps all of V1
    if h.edge_count() == 0 {
        let c_first = if r1 > 0 { 1 } else { 0 };
        let container = container_from_round(params.reading, c_first, &ElementSet::empty(), h.v1());
        return Ok((
            Fingerprint {
                s0: ElementSet::empty(),
                s1: ElementSet::empty(),
            },
            container,
            RunTrace::default(),
        ));
    }

    // entry normalization: F_{<=m} only sees |I| up to |V0|
    let m = params.m.min(h.v0().len() as u64);
    if m == 0 || params.b > m || params.b > v1_len {
        return Err(Error::domain(format!(
            "container requires 1 <= b <= min(m, |V1|): b={}, m={m}, |V1|={v1_len}",
            params.b
        )));
    }
    let norm = ContainerParams {
        m,
        ..params.clone()
    };

    // precondition: the degree condition must hold
    let cond = h.check_degree_condition(&norm.big_r, norm.b, norm.m, norm.q)?;
    if !cond.all_pass() {
        let detail: Vec<String> = cond
            .failures()
            .map(|e| format!("({},{}): {} > {}", e.l0, e.l1, e.lhs, e.rhs))
            .collect();
        return Err(Error::domain(format!(
            "degree condition fails at {}",
            detail.join("; ")
        )));
    }

    let base = base_deltas(h)?;
    let table = delta_table(&base, &norm, v1_len)?;
    let e_h = rational_from_u64(h.edge_count() as u64);
    let b_over_v1 = rational_from_u64(norm.b) / rational_from_u64(v1_len);
    let b_over_m = rational_from_u64(norm.b) / rational_from_u64(norm.m);
    let two = Rational::from_integer(BigInt::from(2));

    let mut s0_acc = ElementSet::empty();
    let mut s1_acc = ElementSet::empty();
    let mut trace = RunTrace::default();
    let mut current = h.clone();
    let mut outcome: Option<(usize, ContainerPair)> = None;

    for (s, &(i0, i1)) in ladder(r0, r1).iter().enumerate() {
        let c = compatible_c(i0, i1)?;
        let (i0p, i1p) = if c == 0 { (i0 - 1, i1) } else { (i0, i1 - 1) };

        // hypotheses of the progress lemma, recorded before the round runs
        let a7_input_ok = {
            let mut gate = norm.alpha_s(s);
            gate *= pow_ratio(&b_over_v1, (r1 - i1) as i64);
            gate *= pow_ratio(&b_over_m, (r0 - i0) as i64);
            gate *= &e_h;
            let edges_ok = rational_from_u64(current.edge_count() as u64) >= gate;
            let degrees_ok = codegree_indices(i0, i1).into_iter().try_fold(
                true,
                |acc, (l0, l1)| -> Result<bool> {
                    let d = current.max_codegree(l0, l1)? as u64;
                    let t = table
                        .get(i0, i1, l0, l1)
                        .cloned()
                        .unwrap_or_else(Rational::zero);
                    Ok(acc && rational_from_u64(d) <= t)
                },
            )?;
            edges_ok && degrees_ok
        };

        let out = run_round(&current, i0, i1, &|v| membership.test(c, v), &norm, &table)?;
        let s_verts: ElementSet = out
            .s_idx
            .iter()
            .map(|&j| out.vseq[j].elem.clone())
            .collect();
        let w_verts: ElementSet = out
            .w_idx
            .iter()
            .map(|&j| out.vseq[j].elem.clone())
            .collect();
        if c == 0 {
            s0_acc = s0_acc.union(&s_verts);
        } else {
            s1_acc = s1_acc.union(&s_verts);
        }

        // independence must survive the round (checked only when the
        // witness is known)
        if let Some((wi, wj)) = witness {
            let pair = IndependentPair::new(wi.clone(), wj.clone());
            if !out.reduced.is_independent(&pair) {
                return Err(Error::verification(format!(
                    "round {s} at level ({i0},{i1}) broke independence:\n{}",
                    out.reduced.to_debug_text()
                )));
            }
        }

        // degree propagation on the trimmed constraints
        for (l0, l1) in codegree_indices(i0p, i1p) {
            let d = out.trimmed.max_codegree(l0, l1)? as u64;
            let t = table
                .get(i0p, i1p, l0, l1)
                .cloned()
                .unwrap_or_else(Rational::zero);
            if rational_from_u64(d) > t {
                return Err(Error::verification(format!(
                    "degree propagation failed at round {s}, index ({l0},{l1}): {d} > {t}"
                )));
            }
        }

        // progress trichotomy, on rounds meeting its hypotheses
        if a7_input_ok && witness.is_some() {
            let mut p1_gate = norm.alpha_s(s) / pow_ratio(&two, (i0 + i1 + 1) as i64);
            p1_gate *= pow_ratio(&b_over_v1, (r1 - i1p) as i64);
            p1_gate *= pow_ratio(&b_over_m, (r0 - i0p) as i64);
            p1_gate *= &e_h;
            let p1 = rational_from_u64(out.reduced.edge_count() as u64) >= p1_gate;
            let w_len = rational_from_u64(w_verts.len() as u64);
            let p23 = if c == 1 {
                let gate = norm.alpha_s(s) / pow_ratio(&two, (r1 + 1) as i64) / &norm.big_r
                    * rational_from_u64(v1_len);
                w_len >= gate
            } else {
                let gate = norm.alpha_s(s) / pow_ratio(&two, (r0 + r1 + 1) as i64) / &norm.big_r
                    * rational_from_u64(norm.q);
                w_len >= gate
            };
            if !p1 && !p23 {
                return Err(Error::verification(format!(
                    "progress trichotomy failed at round {s} level ({i0},{i1}): \
                     e(reduced)={}, |W|={}",
                    out.reduced.edge_count(),
                    w_verts.len()
                )));
            }
        }

        let e_reduced = out.reduced.edge_count();
        trace.rounds.push(RoundRecord {
            level: (i0, i1),
            c,
            l: out.l,
            s_verts,
            w_verts: w_verts.clone(),
            e_input: current.edge_count(),
            e_trimmed: out.trimmed.edge_count(),
            e_reduced,
            inert_count: out.inert_count,
            guard_triggered: out.guard_triggered,
            trichotomy_checked: a7_input_ok && witness.is_some(),
            iters: out.iters.clone(),
        });

        // stopping rule
        let gate = norm.beta_s(s + 1, v1_len, norm.m) * &e_h;
        if rational_from_u64(e_reduced as u64) < gate {
            trace.stop_round = s;
            trace.stop_c = c;
            outcome = Some((c, container_from_round(norm.reading, c, &w_verts, h.v1())));
            break;
        }
        current = out.reduced;
    }

    let (_, container) = outcome.ok_or_else(|| {
        Error::verification(
            "container construction exhausted the ladder without stopping; \
             a nonempty (0,0)-bounded survivor is impossible for independent input",
        )
    })?;

    if s0_acc.len() > r0 * norm.b as usize || s1_acc.len() > r1 * norm.b as usize {
        return Err(Error::verification(format!(
            "fingerprint exceeds size bound: |S0|={}, |S1|={}, limits ({},{})",
            s0_acc.len(),
            s1_acc.len(),
            r0 * norm.b as usize,
            r1 * norm.b as usize
        )));
    }

    Ok((
        Fingerprint {
            s0: s0_acc,
            s1: s1_acc,
        },
        container,
        trace,
    ))
}

/// Builds the container for an independent pair, checking the container
/// theorem's guarantees (i)-(iii) on the way out.
pub fn build_container(
    h: &BoundedHypergraph,
    pair: &IndependentPair,
    params: &ContainerParams,
) -> Result<BuildOutcome> {
    if h.edge_count() == 0 {
        return Err(Error::domain(
            "container construction requires a nonempty hypergraph",
        ));
    }
    let i_set = pair.w0.intersection(h.v0());
    let j_set = pair.w1.intersection(h.v1());
    let m_norm = params.m.min(h.v0().len() as u64);
    if !h.in_family_leq_m(pair, m_norm) {
        return Err(Error::domain(
            "pair is not an independent pair with |W0| <= m for this hypergraph",
        ));
    }
    let (fingerprint, container, trace) = construct(
        h,
        params,
        MembershipSource::Witness {
            i: &i_set,
            j: &j_set,
        },
        Some((&i_set, &j_set)),
    )?;

    // container theorem contract
    let delta = params.delta();
    if !container.a.is_subset(&i_set) {
        return Err(Error::verification("container violates A subset I"));
    }
    if params.reading == ContainerReading::Corrected && !j_set.is_subset(&container.b) {
        return Err(Error::verification("container violates J subset B"));
    }
    let a_big =
        rational_from_u64(container.a.len() as u64) >= delta.clone() * rational_from_u64(params.q);
    let b_small = rational_from_u64(container.b.len() as u64)
        <= (Rational::one() - delta.clone()) * rational_from_u64(h.v1().len() as u64);
    if !a_big && !b_small {
        return Err(Error::verification(format!(
            "container size guarantee failed: |A|={}, |B|={}, delta={delta}",
            container.a.len(),
            container.b.len()
        )));
    }
    let v0_minus_i = h.v0().difference(&i_set);
    if !fingerprint.s0.is_subset(&v0_minus_i) || !fingerprint.s1.is_subset(&j_set) {
        return Err(Error::verification("fingerprint parts escape V0\\I or J"));
    }
    if !fingerprint.s0.is_empty() && !a_big {
        return Err(Error::verification("nonempty S0 without |A| >= delta q"));
    }

    Ok(BuildOutcome {
        fingerprint,
        container,
        trace,
    })
}

/// Replays a fingerprint: reruns the rounds with membership decided by the
/// certificate. For fingerprints produced by `build_container` with the same
/// parameters the result is the identical container.
pub fn replay_container(
    h: &BoundedHypergraph,
    fp: &Fingerprint,
    params: &ContainerParams,
) -> Result<ContainerPair> {
    let (_, container, _) = construct(
        h,
        params,
        MembershipSource::Fingerprint {
            s0: &fp.s0,
            s1: &fp.s1,
        },
        None,
    )?;
    Ok(container)
}
