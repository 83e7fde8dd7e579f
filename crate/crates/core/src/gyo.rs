//! GYO reduction: α-acyclicity test and join-tree construction.
//!
//! A hypergraph is α-acyclic iff repeatedly deleting ear vertices (vertices
//! occurring in a single remaining edge) and contained edges empties it, and
//! α-acyclicity coincides with hypertree width 1. The containment steps also
//! record parent links, yielding a join tree that doubles as a width-1
//! decomposition.

use crate::decomposition::{DecompNode, HDFragment};
use crate::hypergraph::{EdgeSet, Hypergraph, VertexSet};

/// True iff the GYO reduction empties `h`.
pub fn gyo_acyclic(h: &Hypergraph) -> bool {
    reduce(h).is_some()
}

/// A width-1 decomposition shaped like the join tree the reduction produces,
/// or `None` when `h` is cyclic. Disconnected hypergraphs yield one tree per
/// connected part, chained under the first root; distinct parts share no
/// vertices, so the decomposition conditions are unaffected.
pub fn join_tree(h: &Hypergraph) -> Option<HDFragment> {
    let parent = reduce(h)?;
    let m = h.edge_count();
    if m == 0 {
        return Some(HDFragment::new(DecompNode::edge_node(
            VertexSet::new(0),
            EdgeSet::new(0),
            vec![],
        )));
    }

    let mut children: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut roots: Vec<usize> = Vec::new();
    for e in 0..m {
        match parent[e] {
            Some(p) => children[p].push(e),
            None => roots.push(e),
        }
    }

    fn build(h: &Hypergraph, e: usize, children: &Vec<Vec<usize>>) -> DecompNode {
        let kids = children[e]
            .iter()
            .map(|&c| build(h, c, children))
            .collect();
        DecompNode::edge_node(
            h.edge(e).clone(),
            EdgeSet::from_ids(h.edge_count(), [e]),
            kids,
        )
    }

    let mut root = build(h, roots[0], &children);
    for &r in &roots[1..] {
        root.children.push(build(h, r, &children));
    }
    Some(HDFragment::new(root))
}

/// Run the reduction; on success return the parent link recorded when each
/// edge was absorbed (`None` for the surviving roots).
fn reduce(h: &Hypergraph) -> Option<Vec<Option<usize>>> {
    let m = h.edge_count();
    let nv = h.vertex_count();
    let mut reduced: Vec<VertexSet> = (0..m).map(|e| h.edge(e).clone()).collect();
    let mut alive: Vec<bool> = vec![true; m];
    let mut parent: Vec<Option<usize>> = vec![None; m];

    loop {
        let mut changed = false;

        // Ear vertices: occurring in exactly one remaining edge.
        let mut count = vec![0usize; nv];
        let mut owner = vec![usize::MAX; nv];
        for e in 0..m {
            if !alive[e] {
                continue;
            }
            for v in reduced[e].iter() {
                count[v] += 1;
                owner[v] = e;
            }
        }
        for v in 0..nv {
            if count[v] == 1 {
                reduced[owner[v]].remove(v);
                changed = true;
            }
        }

        // Contained edges are absorbed by a containing edge.
        for e in 0..m {
            if !alive[e] {
                continue;
            }
            let target = (0..m)
                .find(|&f| f != e && alive[f] && reduced[e].is_subset_of(&reduced[f]));
            if let Some(f) = target {
                alive[e] = false;
                parent[e] = Some(f);
                changed = true;
            }
        }

        if !changed {
            break;
        }
    }

    let acyclic = (0..m).all(|e| !alive[e] || reduced[e].is_empty());
    acyclic.then_some(parent)
}
