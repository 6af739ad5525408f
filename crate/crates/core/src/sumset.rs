//! Sumset instantiation of the container machinery: the sum-hypergraph
//! H(A,B) and the iterated container tree whose leaves form the covering
//! family for small-doubling witnesses.

use std::collections::BTreeMap;

use num::BigInt;
use num::{One, Zero};

use crate::container::{build_container, ContainerParams, ContainerReading, Fingerprint, RunTrace};
use crate::error::{Error, Result};
use crate::group::{rational_from_u64, ElementSet, GroupDescriptor, Rational};
use crate::hypergraph::{BoundedHypergraph, Edge, IndependentPair};
use crate::supersat::{deficient_pair_count, deficient_self_count};

/// Builds the (1,2)-bounded sum hypergraph: V0 = (Y+Y) \ A part-tagged,
/// V1 = B, and one edge ({a+b},{a,b}) per unordered pair of B (including
/// a = b, which yields |e1| = 1) whose sum avoids A.
pub fn build_sum_hypergraph(
    g: &GroupDescriptor,
    y: &ElementSet,
    a: &ElementSet,
    b: &ElementSet,
) -> Result<BoundedHypergraph> {
    let yy = crate::group::sumset(g, y, y)?;
    if !a.is_subset(&yy) {
        return Err(Error::usage("A must lie inside Y+Y"));
    }
    if !b.is_subset(y) {
        return Err(Error::usage("B must lie inside Y"));
    }
    let v0 = yy.difference(a);
    let mut edges = Vec::new();
    let elems: Vec<_> = b.iter().cloned().collect();
    for (i, x) in elems.iter().enumerate() {
        for yel in &elems[i..] {
            let c = g.add(x, yel)?;
            if !a.contains(&c) {
                edges.push(Edge::new(
                    ElementSet::singleton(c),
                    ElementSet::from_vec(vec![x.clone(), yel.clone()]),
                ));
            }
        }
    }
    BoundedHypergraph::build(v0, b.clone(), 1, 2, edges)
}

/// Parameters of the container tree. Logarithms are natural; q and b are the
/// ceilings of m/ln n and sqrt(m/ln n), with b finally clamped to
/// min(m, |V1|) at each node.
#[derive(Debug, Clone)]
pub struct TreeParams {
    pub m: u64,
    pub epsilon: Rational,
    /// n = |Y|.
    pub n: usize,
    pub big_r: Rational,
    pub q: u64,
    pub b: u64,
    pub depth_bound: f64,
    /// Whether the m >= (ln n)^2 hypothesis held; reported, not enforced,
    /// since desk-scale parameter grids routinely sit below it.
    pub hypothesis_met: bool,
}

impl TreeParams {
    pub fn new(n: usize, m: u64, epsilon: Rational) -> Result<Self> {
        // n >= 3 keeps ln n >= 1 and with it b <= q <= m
        if n < 3 {
            return Err(Error::domain("container tree requires |Y| >= 3"));
        }
        if m == 0 {
            return Err(Error::domain("container tree requires m >= 1"));
        }
        let quarter = Rational::new(BigInt::from(1), BigInt::from(4));
        if !(epsilon > Rational::zero() && epsilon < quarter) {
            return Err(Error::domain("container tree requires 0 < epsilon < 1/4"));
        }
        let ln_n = (n as f64).ln();
        let big_r = Rational::from_integer(BigInt::from(2)) / (&epsilon * &epsilon);
        let q = (m as f64 / ln_n).ceil() as u64;
        let b = (m as f64 / ln_n).sqrt().ceil() as u64;
        debug_assert!(b <= q && q <= m);
        let eps_f = crate::group::rational_to_f64(&epsilon);
        let depth_bound = 2f64.powi(14) / (eps_f * eps_f) * ln_n;
        let hypothesis_met = (m as f64) >= ln_n * ln_n;
        Ok(TreeParams {
            m,
            epsilon,
            n,
            big_r,
            q,
            b,
            depth_bound,
            hypothesis_met,
        })
    }

    /// delta = 2^{-13} eps^2 for the (1,2)-bounded instantiation with
    /// R = 2/eps^2.
    pub fn delta(&self) -> Rational {
        let two_pow_13 = Rational::from_integer(BigInt::from(1 << 13));
        &self.epsilon * &self.epsilon / two_pow_13
    }

    /// |B| <= m / ln n, the small-side leaf test.
    pub fn b_small(&self, b_len: usize) -> bool {
        (b_len as f64) <= self.m as f64 / (self.n as f64).ln()
    }

    /// e(H) <= (eps^2/2) |B|^2, the few-edges leaf test, exact.
    pub fn few_edges(&self, edge_count: usize, b_len: usize) -> bool {
        let gate = &self.epsilon * &self.epsilon * rational_from_u64((b_len * b_len) as u64)
            / BigInt::from(2);
        rational_from_u64(edge_count as u64) <= gate
    }

    fn node_container_params(&self, v0_len: usize, v1_len: usize) -> Result<ContainerParams> {
        let b = self.b.min(self.m).min(v1_len as u64).max(1);
        let m = self.m.min(v0_len as u64).max(1);
        ContainerParams::new(1, 2, self.big_r.clone(), b, m, self.q)
            .map(|p| p.with_reading(ContainerReading::Corrected))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafReason {
    ATooBig,
    BSmall,
    FewEdges,
}

impl std::fmt::Display for LeafReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LeafReason::ATooBig => write!(f, "A_TOO_BIG"),
            LeafReason::BSmall => write!(f, "B_SMALL"),
            LeafReason::FewEdges => write!(f, "FEW_EDGES"),
        }
    }
}

/// One H(A,B) node. The hypergraph is built lazily on first expansion and
/// children are memoized by the fingerprint that produced them.
#[derive(Debug)]
pub struct ContainerNode {
    pub a: ElementSet,
    pub b: ElementSet,
    pub leaf_reason: Option<LeafReason>,
    pub children: BTreeMap<Fingerprint, usize>,
    pub depth: usize,
    hyper: Option<BoundedHypergraph>,
}

impl ContainerNode {
    pub fn is_leaf(&self) -> bool {
        self.leaf_reason.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct ContainerFamilyReport {
    pub family_size: usize,
    pub max_depth: usize,
    pub node_count: usize,
    pub child_counts: Vec<usize>,
    pub coverage_failures: Vec<String>,
    pub leaf_condition_failures: Vec<String>,
}

/// The lazily-materialized container tree rooted at H(empty, Y).
pub struct ContainerTree {
    pub group: GroupDescriptor,
    pub y: ElementSet,
    pub params: TreeParams,
    nodes: Vec<ContainerNode>,
    by_content: BTreeMap<(ElementSet, ElementSet), usize>,
    /// Traces of the most recent build_container calls, for diagnostics.
    pub last_trace: Option<RunTrace>,
}

impl ContainerTree {
    pub fn new(group: GroupDescriptor, y: ElementSet, params: TreeParams) -> Result<Self> {
        if y.len() != params.n {
            return Err(Error::usage("params.n must equal |Y|"));
        }
        let mut tree = ContainerTree {
            group,
            y,
            params,
            nodes: Vec::new(),
            by_content: BTreeMap::new(),
            last_trace: None,
        };
        tree.intern(ElementSet::empty(), tree.y.clone(), 0)?;
        Ok(tree)
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, id: usize) -> &ContainerNode {
        &self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &ContainerNode> {
        self.nodes.iter()
    }

    fn intern(&mut self, a: ElementSet, b: ElementSet, depth: usize) -> Result<usize> {
        if let Some(&id) = self.by_content.get(&(a.clone(), b.clone())) {
            return Ok(id);
        }
        let hyper = build_sum_hypergraph(&self.group, &self.y, &a, &b)?;
        let leaf_reason = if a.len() as u64 > self.params.m {
            Some(LeafReason::ATooBig)
        } else if self.params.b_small(b.len()) {
            Some(LeafReason::BSmall)
        } else if self.params.few_edges(hyper.edge_count(), b.len()) {
            Some(LeafReason::FewEdges)
        } else {
            None
        };
        let id = self.nodes.len();
        self.nodes.push(ContainerNode {
            a: a.clone(),
            b: b.clone(),
            leaf_reason,
            children: BTreeMap::new(),
            depth,
            hyper: Some(hyper),
        });
        self.by_content.insert((a, b), id);
        Ok(id)
    }

    /// Walks one witness from the root to a leaf, memoizing children, and
    /// returns the node path. Along the path `A subset I` and `J subset B`
    /// hold at every node, and each expansion step either grows A by at
    /// least delta*q or shrinks B by a factor of at least (1 - delta).
    pub fn trace_to_leaf(&mut self, i_set: &ElementSet, j_set: &ElementSet) -> Result<Vec<usize>> {
        let jj = crate::group::sumset(&self.group, j_set, j_set)?;
        if !jj.is_subset(i_set) {
            return Err(Error::domain("witness requires J+J inside I"));
        }
        if i_set.len() as u64 > self.params.m {
            return Err(Error::domain("witness requires |I| <= m"));
        }
        let delta = self.params.delta();
        let mut path = vec![self.root()];
        let mut current = self.root();
        loop {
            let node = &self.nodes[current];
            if !node.a.is_subset(i_set) || !j_set.is_subset(&node.b) {
                return Err(Error::verification(
                    "path invariant A subset I, J subset B broken",
                ));
            }
            if node.is_leaf() {
                return Ok(path);
            }
            let hyper = node.hyper.clone().expect("expandable node has hypergraph");
            let depth = node.depth;
            let (a_cur, b_cur) = (node.a.clone(), node.b.clone());
            let cparams = self
                .params
                .node_container_params(hyper.v0().len(), hyper.v1().len())?;

            // expandable nodes must satisfy the degree condition; a failure
            // here contradicts the tree derivation
            let cond =
                hyper.check_degree_condition(&cparams.big_r, cparams.b, cparams.m, cparams.q)?;
            if !cond.all_pass() {
                return Err(Error::verification(format!(
                    "degree condition failed at expandable node |A|={}, |B|={}",
                    a_cur.len(),
                    b_cur.len()
                )));
            }

            let pair = IndependentPair::new(i_set.clone(), j_set.clone());
            let outcome = build_container(&hyper, &pair, &cparams)?;
            self.last_trace = Some(outcome.trace.clone());
            let (c_set, d_set) = (outcome.container.a, outcome.container.b);

            // progress along the tree edge
            let grew = rational_from_u64(c_set.len() as u64)
                >= delta.clone() * rational_from_u64(self.params.q);
            let shrank = rational_from_u64(d_set.len() as u64)
                <= (Rational::one() - delta.clone()) * rational_from_u64(b_cur.len() as u64);
            if !grew && !shrank {
                return Err(Error::verification(
                    "tree edge made no progress in either coordinate",
                ));
            }

            let child_a = a_cur.union(&c_set);
            let child = self.intern(child_a, d_set, depth + 1)?;
            self.nodes[current]
                .children
                .insert(outcome.fingerprint, child);
            path.push(child);
            current = child;
        }
    }

    /// The family: leaf pairs (A,B) with |A| <= m.
    pub fn family(&self) -> Vec<(&ElementSet, &ElementSet)> {
        self.nodes
            .iter()
            .filter(|n| n.is_leaf() && n.a.len() as u64 <= self.params.m)
            .map(|n| (&n.a, &n.b))
            .collect()
    }

    pub fn report(&self) -> ContainerFamilyReport {
        ContainerFamilyReport {
            family_size: self.family().len(),
            max_depth: self.nodes.iter().map(|n| n.depth).max().unwrap_or(0),
            node_count: self.nodes.len(),
            child_counts: self.nodes.iter().map(|n| n.children.len()).collect(),
            coverage_failures: Vec::new(),
            leaf_condition_failures: Vec::new(),
        }
    }
}

/// Traces every witness and returns the tree together with its report.
pub fn build_container_family<'w>(
    group: &GroupDescriptor,
    y: &ElementSet,
    params: &TreeParams,
    witnesses: impl IntoIterator<Item = (&'w ElementSet, &'w ElementSet)>,
) -> Result<(ContainerTree, ContainerFamilyReport)> {
    let mut tree = ContainerTree::new(group.clone(), y.clone(), params.clone())?;
    for (i_set, j_set) in witnesses {
        tree.trace_to_leaf(i_set, j_set)?;
    }
    let report = tree.report();
    Ok((tree, report))
}

#[derive(Debug, Clone)]
pub struct FamilyVerification {
    pub coverage_failures: Vec<String>,
    pub leaf_condition_failures: Vec<String>,
    pub depth_failures: Vec<String>,
    pub child_count_failures: Vec<String>,
    pub family_size_failures: Vec<String>,
    pub checked_witnesses: usize,
}

impl FamilyVerification {
    pub fn clean(&self) -> bool {
        self.coverage_failures.is_empty()
            && self.leaf_condition_failures.is_empty()
            && self.depth_failures.is_empty()
            && self.child_count_failures.is_empty()
            && self.family_size_failures.is_empty()
    }
}

/// Verifies the three theorem-level properties of a built family against a
/// census of witnesses: coverage of every (J+J, J), the leaf condition for
/// every family member, the depth bound and the per-node child-count bound.
pub fn verify_family(
    tree: &mut ContainerTree,
    census_sets: &[ElementSet],
) -> Result<FamilyVerification> {
    let mut out = FamilyVerification {
        coverage_failures: Vec::new(),
        leaf_condition_failures: Vec::new(),
        depth_failures: Vec::new(),
        child_count_failures: Vec::new(),
        family_size_failures: Vec::new(),
        checked_witnesses: census_sets.len(),
    };
    let group = tree.group.clone();

    // exp(2^16 eps^-2 sqrt(m) (ln n)^{3/2}) dwarfs any realizable family at
    // this scale (it usually overflows to +inf), but the bound is part of
    // the contract
    let eps_f = crate::group::rational_to_f64(&tree.params.epsilon);
    let ln_n = (tree.params.n as f64).ln();
    let family_cap =
        (65536.0 / (eps_f * eps_f) * (tree.params.m as f64).sqrt() * ln_n.powf(1.5)).exp();
    if (tree.family().len() as f64) > family_cap {
        out.family_size_failures.push(format!(
            "family of {} exceeds cap {family_cap}",
            tree.family().len()
        ));
    }

    for j_set in census_sets {
        let i_set = crate::group::sumset(&group, j_set, j_set)?;
        if i_set.len() as u64 > tree.params.m {
            out.coverage_failures
                .push(format!("census set {j_set} has |J+J| > m"));
            continue;
        }
        let path = tree.trace_to_leaf(&i_set, j_set)?;
        let leaf = tree.node(*path.last().expect("nonempty path"));
        let covered = leaf.a.is_subset(&i_set) && j_set.is_subset(&leaf.b);
        let in_family = leaf.a.len() as u64 <= tree.params.m;
        if !covered || !in_family {
            out.coverage_failures.push(format!(
                "witness J={j_set}: leaf |A|={}, |B|={} does not cover",
                leaf.a.len(),
                leaf.b.len()
            ));
        }
    }

    let eps_sq = &tree.params.epsilon * &tree.params.epsilon;
    for node in tree.nodes() {
        if node.is_leaf() && node.a.len() as u64 <= tree.params.m {
            let b_len = node.b.len();
            let small = tree.params.b_small(b_len);
            if !small {
                let deficient = deficient_pair_count(&group, &node.a, &node.b)?;
                let gate = eps_sq.clone() * rational_from_u64((b_len * b_len) as u64);
                if rational_from_u64(deficient) > gate {
                    out.leaf_condition_failures.push(format!(
                        "leaf |A|={}, |B|={b_len}: {deficient} deficient pairs > eps^2 |B|^2",
                        node.a.len()
                    ));
                }
                // the unordered edge form of the same condition
                let self_deficient = deficient_self_count(&group, &node.a, &node.b)?;
                let unordered = (deficient + self_deficient) / 2;
                let half_gate =
                    eps_sq.clone() * rational_from_u64((b_len * b_len) as u64) / BigInt::from(2);
                if rational_from_u64(unordered) > half_gate {
                    out.leaf_condition_failures.push(format!(
                        "leaf |A|={}, |B|={b_len}: e(H)={unordered} exceeds (eps^2/2)|B|^2",
                        node.a.len()
                    ));
                }
            }
        }
        if (node.depth as f64) > tree.params.depth_bound {
            out.depth_failures
                .push(format!("node depth {} exceeds bound", node.depth));
        }
        let child_cap = (tree.params.n as f64).powf(4.0 * tree.params.b as f64);
        if (node.children.len() as f64) > child_cap {
            out.child_count_failures.push(format!(
                "node has {} children, cap n^(4b) = {child_cap}",
                node.children.len()
            ));
        }
    }
    Ok(out)
}

/// Serializable view of the tree for the --dump-tree flag.
pub fn tree_dump(tree: &ContainerTree) -> serde_json::Value {
    fn node_value(tree: &ContainerTree, id: usize) -> serde_json::Value {
        let node = tree.node(id);
        let children: Vec<serde_json::Value> = node
            .children
            .values()
            .map(|&cid| node_value(tree, cid))
            .collect();
        serde_json::json!({
            "a_size": node.a.len(),
            "b_size": node.b.len(),
            "depth": node.depth,
            "leaf_reason": node.leaf_reason.map(|r| r.to_string()),
            "children_count": node.children.len(),
            "children": children,
        })
    }
    node_value(tree, tree.root())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> GroupDescriptor {
        GroupDescriptor::integer_window(n).unwrap()
    }

    fn eps(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn sum_hypergraph_examples() {
        let g = z(2);
        let y = ElementSet::ints([1, 2]);
        let h = build_sum_hypergraph(&g, &y, &ElementSet::empty(), &y).unwrap();
        assert_eq!(h.edge_count(), 3);
        let edges: Vec<_> = h.edges().to_vec();
        assert!(edges.contains(&Edge::new(ElementSet::ints([2]), ElementSet::ints([1]))));
        assert!(edges.contains(&Edge::new(ElementSet::ints([3]), ElementSet::ints([1, 2]))));
        assert!(edges.contains(&Edge::new(ElementSet::ints([4]), ElementSet::ints([2]))));

        let yy = crate::group::sumset(&g, &y, &y).unwrap();
        let full = build_sum_hypergraph(&g, &y, &yy, &y).unwrap();
        assert_eq!(full.edge_count(), 0);
        assert_eq!(full.v0().len(), 0);

        let none =
            build_sum_hypergraph(&g, &y, &ElementSet::empty(), &ElementSet::empty()).unwrap();
        assert_eq!(none.edge_count(), 0);
    }

    #[test]
    fn tree_params_derivations() {
        let p = TreeParams::new(8, 8, eps(24, 100)).unwrap();
        assert_eq!(p.q, (8.0f64 / 8.0f64.ln()).ceil() as u64);
        assert_eq!(p.b, (8.0f64 / 8.0f64.ln()).sqrt().ceil() as u64);
        assert!(p.b <= p.q && p.q <= p.m);
        assert!(TreeParams::new(8, 8, eps(1, 4)).is_err());
        assert!(TreeParams::new(1, 8, eps(1, 5)).is_err());
    }

    #[test]
    fn trace_lands_on_leaf_with_invariants() {
        let g = z(8);
        let y = ElementSet::ints(1..=8);
        let params = TreeParams::new(8, 8, eps(24, 100)).unwrap();
        let mut tree = ContainerTree::new(g.clone(), y, params).unwrap();
        let j = ElementSet::ints([1, 2]);
        let i = crate::group::sumset(&g, &j, &j).unwrap();
        let path = tree.trace_to_leaf(&i, &j).unwrap();
        let leaf = tree.node(*path.last().unwrap());
        assert!(leaf.is_leaf());
        assert!(leaf.a.is_subset(&i));
        assert!(j.is_subset(&leaf.b));
        // sizes are monotone along the path
        for w in path.windows(2) {
            let (p, c) = (tree.node(w[0]), tree.node(w[1]));
            assert!(c.a.len() >= p.a.len());
            assert!(c.b.len() <= p.b.len());
        }
        // identical witnesses share the memoized path
        let again = tree.trace_to_leaf(&i, &j).unwrap();
        assert_eq!(path, again);
    }

    #[test]
    fn family_covers_all_small_witnesses() {
        let g = z(8);
        let y = ElementSet::ints(1..=8);
        let params = TreeParams::new(8, 4, eps(24, 100)).unwrap();
        let census: Vec<ElementSet> = y
            .subsets_of_size(2)
            .into_iter()
            .filter(|j| {
                let jj = crate::group::sumset(&g, j, j).unwrap();
                jj.len() as u64 <= 4
            })
            .collect();
        let witness_pairs: Vec<(ElementSet, ElementSet)> = census
            .iter()
            .map(|j| {
                let i = crate::group::sumset(&g, j, j).unwrap();
                (i, j.clone())
            })
            .collect();
        let refs: Vec<(&ElementSet, &ElementSet)> =
            witness_pairs.iter().map(|(i, j)| (i, j)).collect();
        let (mut tree, report) = build_container_family(&g, &y, &params, refs).unwrap();
        assert!(report.family_size >= 1);
        let verification = verify_family(&mut tree, &census).unwrap();
        assert!(verification.clean(), "{verification:?}");
    }

    #[test]
    fn empty_witness_set_keeps_root_only() {
        let g = z(8);
        let y = ElementSet::ints(1..=8);
        let params = TreeParams::new(8, 4, eps(24, 100)).unwrap();
        let (tree, report) = build_container_family(&g, &y, &params, Vec::new()).unwrap();
        assert_eq!(tree.node_count(), 1);
        assert!(report.family_size <= 1);
    }
}
