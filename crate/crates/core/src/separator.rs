//! Enumeration of λ-label candidates and balance verdicts.
//!
//! Candidates are the subsets of an allowed edge set of size 1..=k, streamed
//! in canonical order: ascending cardinality, then lexicographic on sorted
//! edge ids. Two optional restrictions narrow the space: at least one member
//! must come from a given edge set (the "new edge" rule), and every member
//! must intersect a given vertex set (the parent-label restriction). The
//! space can be cut into strided sub-ranges so workers share it without
//! coordination.

use crate::hypergraph::{EdgeSet, ExtendedComp, Hypergraph, VertexSet};

#[derive(Clone, Debug)]
pub struct CandidateSpace {
    pub allowed: EdgeSet,
    /// When set, a candidate must contain at least one edge from this set.
    pub must_intersect_edges: Option<EdgeSet>,
    /// When set, every candidate member must intersect this vertex set.
    pub must_intersect_vertices: Option<VertexSet>,
    pub k: usize,
}

impl CandidateSpace {
    pub fn new(allowed: EdgeSet, k: usize) -> Self {
        assert!(k >= 1);
        CandidateSpace {
            allowed,
            must_intersect_edges: None,
            must_intersect_vertices: None,
            k,
        }
    }

    pub fn with_new_edge_rule(mut self, edges: EdgeSet) -> Self {
        self.must_intersect_edges = Some(edges);
        self
    }

    pub fn with_vertex_restriction(mut self, vertices: VertexSet) -> Self {
        self.must_intersect_vertices = Some(vertices);
        self
    }

    /// The edges individually admissible as candidate members, ascending.
    fn pool(&self, h: &Hypergraph) -> Vec<usize> {
        self.allowed
            .iter()
            .filter(|&e| match &self.must_intersect_vertices {
                Some(vs) => h.edge(e).intersects(vs),
                None => true,
            })
            .collect()
    }

    /// Stream all candidates in canonical order.
    pub fn candidates<'a>(&'a self, h: &Hypergraph) -> CandidateRange {
        CandidateRange::new(self, h, 0, 1)
    }

    /// Split the stream into `n` disjoint strided sub-ranges whose union is
    /// exactly the full stream (worker `i` takes ordinals ≡ i mod n).
    pub fn partition(&self, h: &Hypergraph, n: usize) -> Vec<CandidateRange> {
        assert!(n >= 1);
        (0..n).map(|i| CandidateRange::new(self, h, i, n)).collect()
    }
}

/// An independently iterable cursor over every `stride`-th candidate of a
/// space, starting at ordinal `offset`.
pub struct CandidateRange {
    pool: Vec<usize>,
    universe: usize,
    must_intersect_edges: Option<EdgeSet>,
    k: usize,
    /// Indices into `pool` of the next combination; empty before the first.
    indices: Vec<usize>,
    cardinality: usize,
    skip_next: usize,
    stride: usize,
    done: bool,
}

impl CandidateRange {
    fn new(space: &CandidateSpace, h: &Hypergraph, offset: usize, stride: usize) -> Self {
        CandidateRange {
            pool: space.pool(h),
            universe: h.edge_count(),
            must_intersect_edges: space.must_intersect_edges.clone(),
            k: space.k,
            indices: Vec::new(),
            cardinality: 1,
            skip_next: offset,
            stride,
            done: false,
        }
    }

    /// Advance to the next combination in (cardinality, lex) order; false
    /// once the space is exhausted.
    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        loop {
            let n = self.pool.len();
            if self.indices.is_empty() {
                // First combination of the current cardinality. Larger
                // cardinalities cannot fit either once this one exceeds the
                // pool.
                if self.cardinality > self.k || self.cardinality > n {
                    self.done = true;
                    return false;
                }
                self.indices = (0..self.cardinality).collect();
                return true;
            }
            let c = self.cardinality;
            // Rightmost index that can still move right; indices[i] may grow
            // up to n - c + i.
            let mut i = c;
            while i > 0 {
                i -= 1;
                if self.indices[i] < n - (c - i) {
                    self.indices[i] += 1;
                    for j in i + 1..c {
                        self.indices[j] = self.indices[j - 1] + 1;
                    }
                    return true;
                }
            }
            // Cardinality exhausted; move to the next one.
            self.cardinality += 1;
            self.indices.clear();
        }
    }

    fn passes_filter(&self, candidate: &EdgeSet) -> bool {
        match &self.must_intersect_edges {
            Some(es) => candidate.intersects(es),
            None => true,
        }
    }
}

impl Iterator for CandidateRange {
    type Item = EdgeSet;

    fn next(&mut self) -> Option<EdgeSet> {
        loop {
            if !self.advance() {
                return None;
            }
            let candidate =
                EdgeSet::from_ids(self.universe, self.indices.iter().map(|&i| self.pool[i]));
            if !self.passes_filter(&candidate) {
                continue;
            }
            if self.skip_next > 0 {
                self.skip_next -= 1;
                continue;
            }
            self.skip_next = self.stride - 1;
            return Some(candidate);
        }
    }
}

/// Verdict on a component split: either every component holds at most half of
/// the split part, or one exceeds it. By pigeonhole at most one component can
/// be oversized, so a single index suffices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BalanceVerdict {
    AllSmall,
    Oversized(usize),
}

/// Strict integer check `2·|comps[i]| > part_size`, no floating point.
pub fn balance_verdict(part_size: usize, comps: &[ExtendedComp]) -> BalanceVerdict {
    for (i, c) in comps.iter().enumerate() {
        if 2 * c.size() > part_size {
            debug_assert!(
                comps
                    .iter()
                    .enumerate()
                    .all(|(j, d)| j == i || 2 * d.size() <= part_size),
                "two oversized components cannot coexist"
            );
            return BalanceVerdict::Oversized(i);
        }
    }
    BalanceVerdict::AllSmall
}
