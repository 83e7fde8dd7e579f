//! Hypertree decomposition fragments and their validation.
//!
//! A fragment decomposes an extended subhypergraph `(E', Sp, Conn)`: every
//! edge of `E'` must be covered by some bag, every special edge by a dedicated
//! leaf, and the root bag must contain `Conn`. The validator checks the six
//! defining conditions plus the width bound; for a plain hypergraph
//! (`part = (E(H), ∅)`, `conn = ∅`) they collapse to the four classic
//! hypertree decomposition conditions.
//!
//! Nodes are addressed by their path from the root (sequence of child
//! indices), which keeps violation reports stable without global node ids.

use crate::hypergraph::{EdgeSet, ExtendedComp, Hypergraph, SpecialEdge, VertexSet};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// How a node covers its bag: a set of hypergraph edges, or a single special
/// edge (in which case the node is a leaf and its bag equals the special
/// edge).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cover {
    Edges(EdgeSet),
    Special(SpecialEdge),
}

impl Cover {
    /// Contribution to the width: |λ(u)|, with special covers counting 1.
    pub fn size(&self) -> usize {
        match self {
            Cover::Edges(l) => l.len(),
            Cover::Special(_) => 1,
        }
    }

    /// `⋃λ(u)` as a vertex set.
    pub fn vertices(&self, h: &Hypergraph) -> VertexSet {
        match self {
            Cover::Edges(l) => h.vertices_of(l),
            Cover::Special(s) => s.vertices().clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompNode {
    pub chi: VertexSet,
    pub cover: Cover,
    pub children: Vec<DecompNode>,
}

impl DecompNode {
    pub fn edge_node(chi: VertexSet, lambda: EdgeSet, children: Vec<DecompNode>) -> Self {
        DecompNode {
            chi,
            cover: Cover::Edges(lambda),
            children,
        }
    }

    pub fn special_leaf(s: SpecialEdge) -> Self {
        DecompNode {
            chi: s.vertices().clone(),
            cover: Cover::Special(s),
            children: Vec::new(),
        }
    }
}

/// A rooted decomposition fragment together with its width (the maximum
/// λ-label size over all nodes). The width is recomputed on construction, so
/// it always matches the tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HDFragment {
    root: DecompNode,
    width: usize,
}

impl HDFragment {
    pub fn new(root: DecompNode) -> Self {
        fn walk(n: &DecompNode) -> usize {
            n.children.iter().map(walk).max().unwrap_or(0).max(n.cover.size())
        }
        let width = walk(&root);
        HDFragment { root, width }
    }

    pub fn root(&self) -> &DecompNode {
        &self.root
    }

    pub fn into_root(self) -> DecompNode {
        self.root
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn node_count(&self) -> usize {
        fn walk(n: &DecompNode) -> usize {
            1 + n.children.iter().map(walk).sum::<usize>()
        }
        walk(&self.root)
    }

    pub fn node_at(&self, path: &NodePath) -> Option<&DecompNode> {
        let mut n = &self.root;
        for &i in &path.0 {
            n = n.children.get(i)?;
        }
        Some(n)
    }
}

/// Address of a node: child indices from the root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default, Hash)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        NodePath(p)
    }

    pub fn is_ancestor_or_self_of(&self, other: &NodePath) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        write!(f, "root")?;
        for i in &self.0 {
            write!(f, ".{i}")?;
        }
        Ok(())
    }
}

/// Condition tags for validation findings. `C1..C6` are the defining
/// conditions of decompositions of extended subhypergraphs, `Nf1..Nf3` the
/// per-child normal-form discipline, `Width` the width bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    Nf1,
    Nf2,
    Nf3,
    Width,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub condition: Condition,
    pub path: NodePath,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, condition: Condition, path: NodePath, message: impl Into<String>) {
        self.violations.push(Violation {
            condition,
            path,
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{:?} at {}: {}", v.condition, v.path, v.message)?;
        }
        Ok(())
    }
}

fn collect_nodes<'a>(root: &'a DecompNode) -> Vec<(NodePath, &'a DecompNode)> {
    let mut out = Vec::new();
    let mut stack = vec![(NodePath::root(), root)];
    while let Some((path, n)) = stack.pop() {
        for (i, c) in n.children.iter().enumerate() {
            stack.push((path.child(i), c));
        }
        out.push((path, n));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Check all six conditions of a decomposition of `part` with interface
/// `conn`, plus the width bound `k`. Violations are reported, not thrown.
pub fn validate_extended_hd(
    h: &Hypergraph,
    part: &ExtendedComp,
    conn: &VertexSet,
    hd: &HDFragment,
    k: usize,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let nodes = collect_nodes(&hd.root);

    // (1) label consistency per node.
    for (path, n) in &nodes {
        match &n.cover {
            Cover::Edges(l) => {
                if !n.chi.is_subset_of(&h.vertices_of(l)) {
                    report.push(Condition::C1, path.clone(), "bag not covered by its λ-label");
                }
            }
            Cover::Special(s) => {
                if n.chi != *s.vertices() {
                    report.push(Condition::C1, path.clone(), "bag differs from its special edge");
                }
                if !part.specials.iter().any(|p| p == s) {
                    report.push(
                        Condition::C1,
                        path.clone(),
                        "special cover not drawn from the part's special edges",
                    );
                }
            }
        }
    }

    // (2) coverage of every edge and special edge.
    for e in part.edges.iter() {
        if !nodes.iter().any(|(_, n)| h.edge(e).is_subset_of(&n.chi)) {
            report.push(
                Condition::C2,
                NodePath::root(),
                format!("edge {} covered by no bag", h.edge_name(e)),
            );
        }
    }
    for s in &part.specials {
        let covered = nodes
            .iter()
            .any(|(_, n)| matches!(&n.cover, Cover::Special(t) if t == s));
        if !covered {
            report.push(
                Condition::C2,
                NodePath::root(),
                format!("special edge #{} has no covering leaf", s.origin()),
            );
        }
    }

    // (3) connectedness: for each vertex of the part, the nodes whose bag
    // contains it must form a subtree. A set of m nodes with t parent/child
    // links inside it is connected iff m - t == 1.
    for v in h.vertex_support(part).iter() {
        let mut occurrences = 0usize;
        let mut links = 0usize;
        fn walk(n: &DecompNode, v: usize, occ: &mut usize, links: &mut usize) {
            let here = n.chi.contains(v);
            if here {
                *occ += 1;
            }
            for c in &n.children {
                if here && c.chi.contains(v) {
                    *links += 1;
                }
                walk(c, v, occ, links);
            }
        }
        walk(&hd.root, v, &mut occurrences, &mut links);
        if occurrences > 0 && occurrences - links != 1 {
            report.push(
                Condition::C3,
                NodePath::root(),
                format!("bags containing vertex {} are disconnected", h.vertex_name(v)),
            );
        }
    }

    // (4) special condition: χ(T_u) ∩ ⋃λ(u) ⊆ χ(u), checked bottom-up.
    fn subtree_chi(
        h: &Hypergraph,
        n: &DecompNode,
        path: NodePath,
        report: &mut ValidationReport,
    ) -> VertexSet {
        let mut union = n.chi.clone();
        for (i, c) in n.children.iter().enumerate() {
            union.union_with(&subtree_chi(h, c, path.child(i), report));
        }
        let mut escaped = union.intersection(&n.cover.vertices(h));
        escaped.subtract(&n.chi);
        if !escaped.is_empty() {
            report.push(
                Condition::C4,
                path,
                format!(
                    "λ-vertex {} appears below the node but not in its bag",
                    h.vertex_name(escaped.first().unwrap())
                ),
            );
        }
        union
    }
    subtree_chi(h, &hd.root, NodePath::root(), &mut report);

    // (5) special covers only at leaves.
    for (path, n) in &nodes {
        if matches!(n.cover, Cover::Special(_)) && !n.children.is_empty() {
            report.push(Condition::C5, path.clone(), "special cover at an inner node");
        }
    }

    // (6) the root bag contains the interface.
    if !conn.is_subset_of(&hd.root.chi) {
        report.push(Condition::C6, NodePath::root(), "Conn not contained in the root bag");
    }

    // Width bound and stored-width consistency.
    let recomputed = nodes.iter().map(|(_, n)| n.cover.size()).max().unwrap_or(0);
    if recomputed != hd.width {
        report.push(
            Condition::Width,
            NodePath::root(),
            format!("stored width {} differs from recomputed {}", hd.width, recomputed),
        );
    }
    if recomputed > k {
        report.push(
            Condition::Width,
            NodePath::root(),
            format!("width {recomputed} exceeds the bound {k}"),
        );
    }

    report
}

/// The (special) edges of `part` covered for the first time at each node:
/// `cov(u) = {f | f ⊆ χ(u), f ⊄ χ(u')` for every ancestor `u'}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CovSet {
    pub edges: Vec<usize>,
    pub special_origins: Vec<u64>,
}

impl CovSet {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.special_origins.is_empty()
    }

    fn merge(&mut self, other: &CovSet) {
        self.edges.extend(&other.edges);
        self.special_origins.extend(&other.special_origins);
    }

    fn normalize(&mut self) {
        self.edges.sort_unstable();
        self.special_origins.sort_unstable();
    }
}

pub fn cov(h: &Hypergraph, part: &ExtendedComp, hd: &HDFragment) -> BTreeMap<NodePath, CovSet> {
    let mut map = BTreeMap::new();
    // Tracks which (special) edges some ancestor bag already covers; entries
    // are pushed before descending and popped on the way back up.
    let mut covered_edges: Vec<bool> = vec![false; h.edge_count()];
    let mut covered_specials: Vec<bool> = vec![false; part.specials.len()];

    fn walk(
        h: &Hypergraph,
        part: &ExtendedComp,
        n: &DecompNode,
        path: NodePath,
        covered_edges: &mut Vec<bool>,
        covered_specials: &mut Vec<bool>,
        map: &mut BTreeMap<NodePath, CovSet>,
    ) {
        let mut here = CovSet::default();
        let mut new_edges = Vec::new();
        let mut new_specials = Vec::new();
        for e in part.edges.iter() {
            if !covered_edges[e] && h.edge(e).is_subset_of(&n.chi) {
                covered_edges[e] = true;
                new_edges.push(e);
                here.edges.push(e);
            }
        }
        for (si, s) in part.specials.iter().enumerate() {
            if !covered_specials[si] && s.vertices().is_subset_of(&n.chi) {
                covered_specials[si] = true;
                new_specials.push(si);
                here.special_origins.push(s.origin());
            }
        }
        here.normalize();
        map.insert(path.clone(), here);
        for (i, c) in n.children.iter().enumerate() {
            walk(h, part, c, path.child(i), covered_edges, covered_specials, map);
        }
        for e in new_edges {
            covered_edges[e] = false;
        }
        for si in new_specials {
            covered_specials[si] = false;
        }
    }
    walk(
        h,
        part,
        &hd.root,
        NodePath::root(),
        &mut covered_edges,
        &mut covered_specials,
        &mut map,
    );
    map
}

/// Union of `cov` over the subtree rooted at each node.
fn subtree_cov(cov_map: &BTreeMap<NodePath, CovSet>) -> BTreeMap<NodePath, CovSet> {
    let mut out: BTreeMap<NodePath, CovSet> = BTreeMap::new();
    // Paths sort ancestors before descendants, so accumulate in reverse.
    for (path, set) in cov_map.iter().rev() {
        let mut acc = set.clone();
        let mut child = 0usize;
        loop {
            let cpath = path.child(child);
            match out.get(&cpath) {
                Some(cset) => acc.merge(cset),
                None => break,
            }
            child += 1;
        }
        acc.normalize();
        out.insert(path.clone(), acc);
    }
    out
}

/// Check the per-child normal form of a (valid) decomposition of `part`:
/// each child subtree covers exactly one component of the parent bag, makes
/// progress, and carries the minimal bag.
pub fn check_normal_form(h: &Hypergraph, part: &ExtendedComp, hd: &HDFragment) -> ValidationReport {
    let mut report = ValidationReport::default();
    let cov_map = cov(h, part, hd);
    let sub_cov = subtree_cov(&cov_map);

    fn comp_cov_set(c: &ExtendedComp) -> CovSet {
        let mut s = CovSet {
            edges: c.edges.iter().collect(),
            special_origins: c.specials.iter().map(|s| s.origin()).collect(),
        };
        s.normalize();
        s
    }

    let nodes = collect_nodes(&hd.root);
    for (path, n) in &nodes {
        if n.children.is_empty() {
            continue;
        }
        let comps = h.components(part, &n.chi);
        for (i, child) in n.children.iter().enumerate() {
            let cpath = path.child(i);
            let c_cov = &sub_cov[&cpath];
            let matching = comps.iter().find(|c| comp_cov_set(c) == *c_cov);
            let comp = match matching {
                Some(c) => c,
                None => {
                    report.push(
                        Condition::Nf1,
                        cpath,
                        "subtree cover is not exactly one component of the parent bag",
                    );
                    continue;
                }
            };
            let progress = comp.edges.iter().any(|e| h.edge(e).is_subset_of(&child.chi))
                || comp
                    .specials
                    .iter()
                    .any(|s| s.vertices().is_subset_of(&child.chi));
            if !progress {
                report.push(
                    Condition::Nf2,
                    cpath.clone(),
                    "no component member is fully covered by the child bag",
                );
            }
            let minimal = child.cover.vertices(h).intersection(&h.vertex_support(comp));
            if child.chi != minimal {
                report.push(
                    Condition::Nf3,
                    cpath,
                    "child bag is not ⋃λ(c) restricted to its component",
                );
            }
        }
    }
    report
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StitchError {
    #[error("no leaf covers the placeholder special edge #{0}")]
    PlaceholderNotFound(u64),
    #[error("placeholder special edge #{0} covered by more than one leaf")]
    PlaceholderNotUnique(u64),
}

/// Graft the structure a placeholder special edge stood for into `upper`:
/// the unique leaf covering `placeholder` becomes a node with bag `child_chi`
/// and λ-label `child_lambda`, one fresh leaf per covered special edge is
/// appended below it, and each `lower` fragment's root becomes a further
/// child.
pub fn stitch(
    upper: HDFragment,
    placeholder: &SpecialEdge,
    child_chi: VertexSet,
    child_lambda: EdgeSet,
    covered_specials: &[SpecialEdge],
    lower: Vec<HDFragment>,
) -> Result<HDFragment, StitchError> {
    fn count_placeholders(n: &DecompNode, origin: u64) -> usize {
        let here = matches!(&n.cover, Cover::Special(s) if s.origin() == origin);
        n.children
            .iter()
            .map(|c| count_placeholders(c, origin))
            .sum::<usize>()
            + usize::from(here)
    }
    match count_placeholders(&upper.root, placeholder.origin()) {
        0 => return Err(StitchError::PlaceholderNotFound(placeholder.origin())),
        1 => {}
        _ => return Err(StitchError::PlaceholderNotUnique(placeholder.origin())),
    }

    let mut children: Vec<DecompNode> = covered_specials
        .iter()
        .cloned()
        .map(DecompNode::special_leaf)
        .collect();
    children.extend(lower.into_iter().map(|f| f.root));
    let replacement = DecompNode::edge_node(child_chi, child_lambda, children);

    fn replace(n: &mut DecompNode, origin: u64, replacement: &mut Option<DecompNode>) {
        if matches!(&n.cover, Cover::Special(s) if s.origin() == origin) {
            *n = replacement.take().expect("placeholder visited twice");
            return;
        }
        for c in &mut n.children {
            replace(c, origin, replacement);
        }
    }
    let mut root = upper.root;
    let mut slot = Some(replacement);
    replace(&mut root, placeholder.origin(), &mut slot);
    Ok(HDFragment::new(root))
}
