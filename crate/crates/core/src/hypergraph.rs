//! Immutable hypergraph with interned vertex/edge names, plus the extended
//! subhypergraph machinery (special edges, `[U]`-components) that the
//! decomposition search recurses over.
//!
//! Vertices and edges are interned to dense integer ids at parse time so that
//! the set algebra dominating the search runs on machine words. All types here
//! are immutable after construction and safe to share across threads.

use crate::bitset::BitSet;

macro_rules! dense_set {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
        pub struct $name(BitSet);

        impl $name {
            pub fn new(universe: usize) -> Self {
                $name(BitSet::new(universe))
            }

            pub fn from_ids<I: IntoIterator<Item = usize>>(universe: usize, ids: I) -> Self {
                $name(BitSet::from_ids(universe, ids))
            }

            pub fn all(universe: usize) -> Self {
                $name(BitSet::all(universe))
            }

            pub fn insert(&mut self, id: usize) {
                self.0.insert(id);
            }

            pub fn remove(&mut self, id: usize) {
                self.0.remove(id);
            }

            pub fn contains(&self, id: usize) -> bool {
                self.0.contains(id)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn union_with(&mut self, other: &Self) {
                self.0.union_with(&other.0);
            }

            pub fn intersect_with(&mut self, other: &Self) {
                self.0.intersect_with(&other.0);
            }

            pub fn subtract(&mut self, other: &Self) {
                self.0.subtract(&other.0);
            }

            pub fn union(&self, other: &Self) -> Self {
                $name(self.0.union(&other.0))
            }

            pub fn intersection(&self, other: &Self) -> Self {
                $name(self.0.intersection(&other.0))
            }

            pub fn difference(&self, other: &Self) -> Self {
                $name(self.0.difference(&other.0))
            }

            pub fn is_subset_of(&self, other: &Self) -> bool {
                self.0.is_subset_of(&other.0)
            }

            pub fn intersects(&self, other: &Self) -> bool {
                self.0.intersects(&other.0)
            }

            pub fn first(&self) -> Option<usize> {
                self.0.first()
            }

            /// Iterate members in ascending id order.
            pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
                self.0.iter()
            }
        }
    };
}

dense_set! {
    /// Dense set of vertex ids; houses χ-labels, `Conn` interfaces and `⋃λ` unions.
    VertexSet
}

dense_set! {
    /// Dense set of edge ids; houses λ-labels and allowed-edge sets.
    EdgeSet
}

/// The χ-label of a decomposition node, recorded as the interface between an
/// HD fragment and the fragments below it.
///
/// Identity is the `origin` id, not the vertex content: two special edges with
/// equal vertex sets stay distinct, since the recursion treats the special
/// edge set as a multiset and collapsing them would under-count sizes in
/// balance checks. Origins are unique within one top-level search.
#[derive(Clone, Debug)]
pub struct SpecialEdge {
    vertices: VertexSet,
    origin: u64,
}

impl SpecialEdge {
    pub fn new(vertices: VertexSet, origin: u64) -> Self {
        assert!(!vertices.is_empty(), "special edge must be non-empty");
        SpecialEdge { vertices, origin }
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn origin(&self) -> u64 {
        self.origin
    }
}

impl PartialEq for SpecialEdge {
    fn eq(&self, other: &Self) -> bool {
        self.origin == other.origin
    }
}

impl Eq for SpecialEdge {}

impl PartialOrd for SpecialEdge {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SpecialEdge {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.origin.cmp(&other.origin)
    }
}

/// An extended subhypergraph minus its `Conn` interface: a set of edges plus a
/// sequence of special edges. This is the unit the decomposition search
/// recurses on; the vertex interface travels alongside as a separate argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedComp {
    pub edges: EdgeSet,
    /// Always ordered by origin id, so iteration is deterministic.
    pub specials: Vec<SpecialEdge>,
}

impl ExtendedComp {
    pub fn new(edges: EdgeSet, mut specials: Vec<SpecialEdge>) -> Self {
        specials.sort();
        ExtendedComp { edges, specials }
    }

    /// The whole hypergraph viewed as an extended subhypergraph of itself.
    pub fn whole(h: &Hypergraph) -> Self {
        ExtendedComp {
            edges: EdgeSet::all(h.edge_count()),
            specials: Vec::new(),
        }
    }

    /// Number of edges plus special edges; the quantity all balance checks
    /// compare against.
    pub fn size(&self) -> usize {
        self.edges.len() + self.specials.len()
    }
}

/// Immutable hypergraph: interned vertex and edge names, one vertex set per
/// edge. Construction goes through [`Hypergraph::from_named_edges`] (or the
/// parser), which enforces that edges are non-empty, names are unique and no
/// vertex is isolated — isolated vertices cannot arise since vertices exist
/// only as edge members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    name: String,
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    edges: Vec<VertexSet>,
}

impl Hypergraph {
    /// Build from `(edge name, vertex names)` pairs. Vertices are interned in
    /// first-occurrence order, edges in input order.
    ///
    /// Panics on an empty edge or duplicate edge name; parsed input reports
    /// those as errors before reaching here.
    pub fn from_named_edges<S: AsRef<str>>(name: &str, edges: &[(S, Vec<S>)]) -> Self {
        let mut vertex_names: Vec<String> = Vec::new();
        let mut vertex_ids: std::collections::HashMap<String, usize> =
            std::collections::HashMap::new();
        let mut raw_edges: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
        let mut edge_names: Vec<String> = Vec::with_capacity(edges.len());

        for (ename, verts) in edges {
            assert!(!verts.is_empty(), "edge {} is empty", ename.as_ref());
            assert!(
                !edge_names.iter().any(|n| n == ename.as_ref()),
                "duplicate edge name {}",
                ename.as_ref()
            );
            edge_names.push(ename.as_ref().to_string());
            let mut ids = Vec::with_capacity(verts.len());
            for v in verts {
                let id = *vertex_ids.entry(v.as_ref().to_string()).or_insert_with(|| {
                    vertex_names.push(v.as_ref().to_string());
                    vertex_names.len() - 1
                });
                ids.push(id);
            }
            raw_edges.push(ids);
        }

        let nv = vertex_names.len();
        let edges = raw_edges
            .into_iter()
            .map(|ids| VertexSet::from_ids(nv, ids))
            .collect();
        Hypergraph {
            name: name.to_string(),
            vertex_names,
            edge_names,
            edges,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Same hypergraph under a different instance name (names usually come
    /// from the file stem, which the text format does not carry).
    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: usize) -> &VertexSet {
        &self.edges[id]
    }

    pub fn vertex_name(&self, id: usize) -> &str {
        &self.vertex_names[id]
    }

    pub fn edge_name(&self, id: usize) -> &str {
        &self.edge_names[id]
    }

    pub fn edge_id(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    /// All edge ids as a set; the initial allowed-edge parameter of a search.
    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::all(self.edge_count())
    }

    /// Union of the vertices of an edge set.
    pub fn vertices_of(&self, edges: &EdgeSet) -> VertexSet {
        let mut out = VertexSet::new(self.vertex_count());
        for e in edges.iter() {
            out.union_with(&self.edges[e]);
        }
        out
    }

    /// `V(part)`: every vertex occurring in the part's edges or special edges.
    pub fn vertex_support(&self, part: &ExtendedComp) -> VertexSet {
        let mut out = self.vertices_of(&part.edges);
        for s in &part.specials {
            out.union_with(s.vertices());
        }
        out
    }

    /// The `[U]`-components of `part`: maximal classes of (special) edges
    /// connected through vertices outside `U`. Edges fully contained in `U`
    /// belong to no component.
    ///
    /// Output is canonical: components ordered by their smallest member (edge
    /// ids before special edges, then by id / origin), members in ascending
    /// order within each component.
    pub fn components(&self, part: &ExtendedComp, u: &VertexSet) -> Vec<ExtendedComp> {
        // One slot per participating (special) edge, flood-filled through a
        // vertex -> members index over the residue vertices.
        enum Member {
            Edge(usize),
            Special(usize),
        }
        let mut members: Vec<Member> = Vec::new();
        let mut residues: Vec<VertexSet> = Vec::new();

        for e in part.edges.iter() {
            let r = self.edges[e].difference(u);
            if !r.is_empty() {
                members.push(Member::Edge(e));
                residues.push(r);
            }
        }
        for (si, s) in part.specials.iter().enumerate() {
            let r = s.vertices().difference(u);
            if !r.is_empty() {
                members.push(Member::Special(si));
                residues.push(r);
            }
        }

        let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count()];
        for (mi, r) in residues.iter().enumerate() {
            for v in r.iter() {
                by_vertex[v].push(mi);
            }
        }

        let mut label: Vec<Option<usize>> = vec![None; members.len()];
        let mut n_components = 0;
        let mut queue: Vec<usize> = Vec::new();
        for start in 0..members.len() {
            if label[start].is_some() {
                continue;
            }
            let comp = n_components;
            n_components += 1;
            label[start] = Some(comp);
            queue.push(start);
            while let Some(m) = queue.pop() {
                for v in residues[m].iter() {
                    for &m2 in &by_vertex[v] {
                        if label[m2].is_none() {
                            label[m2] = Some(comp);
                            queue.push(m2);
                        }
                    }
                }
            }
        }

        let mut comps: Vec<ExtendedComp> = (0..n_components)
            .map(|_| ExtendedComp::new(EdgeSet::new(self.edge_count()), Vec::new()))
            .collect();
        for (mi, member) in members.iter().enumerate() {
            let c = &mut comps[label[mi].unwrap()];
            match member {
                Member::Edge(e) => c.edges.insert(*e),
                Member::Special(si) => c.specials.push(part.specials[*si].clone()),
            }
        }
        // Members were visited in ascending order, so specials are already
        // origin-sorted; order components by smallest member.
        comps.sort_by_key(|c| match c.edges.first() {
            Some(e) => (0u8, e as u64),
            None => (1u8, c.specials[0].origin()),
        });
        comps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Hypergraph {
        Hypergraph::from_named_edges(
            "triangle",
            &[
                ("e1", vec!["a", "b"]),
                ("e2", vec!["b", "c"]),
                ("e3", vec!["c", "a"]),
            ],
        )
    }

    #[test]
    fn interning_order() {
        let h = triangle();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 3);
        assert_eq!(h.vertex_name(0), "a");
        assert_eq!(h.vertex_name(2), "c");
        assert_eq!(h.edge_name(1), "e2");
    }

    #[test]
    fn vertex_support_unions_edges_and_specials() {
        let h = triangle();
        // ({e1={a,b}}, Sp=[]) -> {a,b}
        let part = ExtendedComp::new(EdgeSet::from_ids(3, [0]), vec![]);
        let sup = h.vertex_support(&part);
        assert_eq!(sup.iter().collect::<Vec<_>>(), vec![0, 1]);

        // (E=∅, Sp=[{b,c}]) -> {b,c}
        let sp = SpecialEdge::new(VertexSet::from_ids(3, [1, 2]), 0);
        let part = ExtendedComp::new(EdgeSet::new(3), vec![sp.clone()]);
        assert_eq!(h.vertex_support(&part).iter().collect::<Vec<_>>(), vec![1, 2]);

        // ({e1={a,b}}, Sp=[{b,c}]) -> {a,b,c}
        let part = ExtendedComp::new(EdgeSet::from_ids(3, [0]), vec![sp]);
        assert_eq!(h.vertex_support(&part).len(), 3);
    }

    #[test]
    fn components_trivial_cases() {
        let h = triangle();
        let part = ExtendedComp::whole(&h);

        // U = ∅: everything adjacent, one component with all 3 edges.
        let comps = h.components(&part, &VertexSet::new(3));
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].edges.len(), 3);

        // U = {a,b,c}: all edges covered, no components.
        let comps = h.components(&part, &VertexSet::all(3));
        assert!(comps.is_empty());
    }

    #[test]
    fn components_path_split() {
        // path {ab, bc, cd}, U = {b} -> [{ab}], [{bc, cd}]
        let h = Hypergraph::from_named_edges(
            "path",
            &[
                ("e1", vec!["a", "b"]),
                ("e2", vec!["b", "c"]),
                ("e3", vec!["c", "d"]),
            ],
        );
        let part = ExtendedComp::whole(&h);
        let u = VertexSet::from_ids(4, [h.vertex_id("b").unwrap()]);
        let comps = h.components(&part, &u);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].edges.iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(comps[1].edges.iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn lone_special_edge_forms_singleton_component() {
        let h = triangle();
        let sp = SpecialEdge::new(VertexSet::from_ids(3, [0, 1]), 7);
        let part = ExtendedComp::new(EdgeSet::new(3), vec![sp]);
        let comps = h.components(&part, &VertexSet::new(3));
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].specials.len(), 1);
        assert_eq!(comps[0].specials[0].origin(), 7);
    }

    #[test]
    fn special_edges_distinct_by_origin() {
        let v = VertexSet::from_ids(3, [0, 1]);
        let s1 = SpecialEdge::new(v.clone(), 1);
        let s2 = SpecialEdge::new(v, 2);
        assert_ne!(s1, s2);
        assert!(s1 < s2);
    }
}
