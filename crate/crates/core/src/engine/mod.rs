//! The decomposition search: deciding `hw(H) ≤ k` and materialising a
//! witness.
//!
//! The optimized engine recurses on extended subhypergraphs through balanced
//! separators found child-first; every recursive call handles at most
//! ⌈size/2⌉ of its parent's (special) edges, so the recursion depth is
//! logarithmic in the edge count. Both properties are asserted at runtime on
//! every call. The unoptimized variant (root guessed separately, parent
//! before child, no search-space narrowing) is retained behind
//! [`SearchConfig::reference_mode`] as a differential-testing oracle.

mod cancel;
mod reference;
mod search;

pub use cancel::{CancelToken, Cancelled};

use crate::decomposition::{DecompNode, HDFragment};
use crate::hypergraph::{EdgeSet, ExtendedComp, Hypergraph, VertexSet};
use crate::hybrid::HybridConfig;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Width bound to decide against.
    pub k: usize,
    pub workers: usize,
    /// Wall-clock budget; zero means unlimited.
    pub timeout: Duration,
    /// Subproblem size below which recursion stays on the calling worker.
    pub parallel_recursion_threshold: usize,
    /// Run the unoptimized algorithm instead (single-threaded).
    pub reference_mode: bool,
    pub hybrid: Option<HybridConfig>,
}

impl SearchConfig {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "width parameter must be positive");
        SearchConfig {
            k,
            workers: 1,
            timeout: Duration::ZERO,
            parallel_recursion_threshold: 12,
            reference_mode: false,
            hybrid: None,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        assert!(workers >= 1);
        self.workers = workers;
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn with_hybrid(mut self, hybrid: Option<HybridConfig>) -> Self {
        self.hybrid = hybrid;
        self
    }

    pub fn with_parallel_threshold(mut self, threshold: usize) -> Self {
        self.parallel_recursion_threshold = threshold;
        self
    }

    pub fn with_reference_mode(mut self, on: bool) -> Self {
        self.reference_mode = on;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    TimedOut,
}

#[derive(Clone, Debug, Default)]
pub struct SearchStats {
    pub candidates_tried: u64,
    pub recursive_calls: u64,
    pub max_recursion_depth: u64,
    pub wall_time: Duration,
    pub subsolver_delegations: u64,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub decided: Decision,
    /// Present iff `decided == Yes`.
    pub witness: Option<HDFragment>,
    pub stats: SearchStats,
}

/// Shared counters updated from worker threads.
#[derive(Default)]
pub(crate) struct StatCounters {
    pub candidates_tried: AtomicU64,
    pub recursive_calls: AtomicU64,
    pub max_depth: AtomicU64,
    pub delegations: AtomicU64,
}

impl StatCounters {
    pub fn enter_call(&self, depth: u64) {
        self.recursive_calls.fetch_add(1, Ordering::Relaxed);
        self.max_depth.fetch_max(depth, Ordering::Relaxed);
    }

    fn snapshot(&self, wall_time: Duration) -> SearchStats {
        SearchStats {
            candidates_tried: self.candidates_tried.load(Ordering::Relaxed),
            recursive_calls: self.recursive_calls.load(Ordering::Relaxed),
            max_recursion_depth: self.max_depth.load(Ordering::Relaxed),
            wall_time,
            subsolver_delegations: self.delegations.load(Ordering::Relaxed),
        }
    }
}

/// Outcome of the base-case test at the top of every recursive call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseCase {
    /// At most k edges and no special edges: a single node suffices.
    AcceptSingleNode,
    /// No edges and exactly one special edge: a special leaf.
    AcceptSpecialLeaf,
    /// No edges but several special edges: no label could make progress.
    RejectDeadEnd,
    Continue,
}

pub fn base_case(part: &ExtendedComp, k: usize) -> BaseCase {
    if part.edges.len() <= k && part.specials.is_empty() {
        BaseCase::AcceptSingleNode
    } else if part.edges.is_empty() && part.specials.len() == 1 {
        BaseCase::AcceptSpecialLeaf
    } else if part.edges.is_empty() {
        BaseCase::RejectDeadEnd
    } else {
        BaseCase::Continue
    }
}

/// `ceil(log2(max(2, n))) + 2`: the recursion depth bound enforced on every
/// search over an initial part of `n` (special) edges.
pub fn depth_bound(initial_size: usize) -> u64 {
    let n = initial_size.max(2) as u64;
    let ceil_log2 = u64::BITS as u64 - (n - 1).leading_zeros() as u64;
    ceil_log2 + 2
}

/// Decide whether `hw(H) ≤ cfg.k`; on Yes the outcome carries a full
/// decomposition of width ≤ k. The decision is independent of worker count
/// and scheduling; with one worker the witness is deterministic as well.
pub fn decide_hw_le_k(h: &Hypergraph, cfg: &SearchConfig) -> SearchOutcome {
    assert!(cfg.k >= 1 && cfg.workers >= 1);
    let start = Instant::now();
    let deadline = (!cfg.timeout.is_zero()).then(|| start + cfg.timeout);
    let token = CancelToken::new(deadline);
    let counters = StatCounters::default();

    // A hypergraph without edges decomposes into a single empty node.
    if h.edge_count() == 0 {
        let witness = HDFragment::new(DecompNode::edge_node(
            VertexSet::new(h.vertex_count()),
            EdgeSet::new(0),
            vec![],
        ));
        return SearchOutcome {
            decided: Decision::Yes,
            witness: Some(witness),
            stats: counters.snapshot(start.elapsed()),
        };
    }

    let result = if cfg.reference_mode {
        reference::decide(h, cfg, &token, &counters)
    } else {
        let engine = search::Engine::new(h, cfg, &counters);
        let part = ExtendedComp::whole(h);
        let conn = VertexSet::new(h.vertex_count());
        engine.decomp(&part, &conn, &h.all_edges(), &token, 1)
    };

    let (decided, witness) = match result {
        Ok(Some(w)) => (Decision::Yes, Some(w)),
        Ok(None) => (Decision::No, None),
        Err(Cancelled) => (Decision::TimedOut, None),
    };
    SearchOutcome {
        decided,
        witness,
        stats: counters.snapshot(start.elapsed()),
    }
}

/// Faithful unoptimized search (root guessed separately in the main loop,
/// parent-then-child order, no allowed-set narrowing, no negative base case).
/// Exposed for differential testing against the optimized engine.
pub fn decomp_reference(
    h: &Hypergraph,
    cfg: &SearchConfig,
) -> Result<Option<HDFragment>, Cancelled> {
    let deadline = (!cfg.timeout.is_zero()).then(|| Instant::now() + cfg.timeout);
    let token = CancelToken::new(deadline);
    let counters = StatCounters::default();
    if h.edge_count() == 0 {
        return Ok(Some(HDFragment::new(DecompNode::edge_node(
            VertexSet::new(h.vertex_count()),
            EdgeSet::new(0),
            vec![],
        ))));
    }
    reference::decide(h, cfg, &token, &counters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_hyperbench;

    #[test]
    fn base_cases() {
        let h = parse_hyperbench("e1(a,b),e2(b,c),e3(c,d),e4(d,e),e5(e,f).").unwrap();
        let part = |ids: &[usize], sp: usize| {
            let specials = (0..sp)
                .map(|i| {
                    crate::hypergraph::SpecialEdge::new(
                        VertexSet::from_ids(h.vertex_count(), [i]),
                        i as u64,
                    )
                })
                .collect();
            ExtendedComp::new(EdgeSet::from_ids(5, ids.iter().copied()), specials)
        };
        assert_eq!(base_case(&part(&[0, 1], 0), 2), BaseCase::AcceptSingleNode);
        assert_eq!(base_case(&part(&[], 1), 2), BaseCase::AcceptSpecialLeaf);
        assert_eq!(base_case(&part(&[], 3), 2), BaseCase::RejectDeadEnd);
        assert_eq!(base_case(&part(&[0, 1, 2, 3, 4], 0), 2), BaseCase::Continue);
    }

    #[test]
    fn depth_bound_values() {
        assert_eq!(depth_bound(1), 3);
        assert_eq!(depth_bound(2), 3);
        assert_eq!(depth_bound(3), 4);
        assert_eq!(depth_bound(8), 5);
        assert_eq!(depth_bound(9), 6);
    }
}
