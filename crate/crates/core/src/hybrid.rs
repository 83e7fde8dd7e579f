//! Complexity metrics, threshold switching and the sequential subsolver.
//!
//! When a subproblem's metric falls below the configured threshold the
//! balanced-separator engine hands it to a cached top-down search in the
//! det-k style: guess a λ-label with at least one new edge, fix the bag as
//! `⋃λ ∩ V(part)`, recurse on the `[χ]`-components with no balancedness
//! requirement, memoising success and failure per (component, interface).
//! The subsolver keeps the caller's allowed-edge set and `Conn` interface, so
//! its fragments compose with the engine-built upper parts unchanged.
//!
//! The subsolver is single-threaded by design; the engine runs independent
//! instances on disjoint subproblems, each with its own cache.

use crate::decomposition::{DecompNode, HDFragment};
use crate::engine::{base_case, BaseCase, CancelToken, Cancelled};
use crate::hypergraph::{EdgeSet, ExtendedComp, Hypergraph, VertexSet};
use crate::separator::CandidateSpace;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    EdgeCount,
    RelFill,
}

#[derive(Clone, Debug)]
pub struct HybridConfig {
    pub metric: Metric,
    pub threshold: f64,
    /// Flips the switch direction (delegate complex instead of simple
    /// subproblems); off by default, available for experiments.
    pub invert: bool,
}

impl HybridConfig {
    pub fn new(metric: Metric, threshold: f64) -> Self {
        assert!(threshold > 0.0, "threshold must be positive");
        HybridConfig {
            metric,
            threshold,
            invert: false,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("RelFill is undefined on an empty part")]
    EmptyPart,
}

/// EdgeCount: `|E| + |Sp|`. RelFill: `(|E| + |Sp|) · k / avg (special) edge
/// cardinality`, with special edges counted like ordinary edges.
pub fn metric_value(
    h: &Hypergraph,
    part: &ExtendedComp,
    k: usize,
    metric: Metric,
) -> Result<f64, MetricError> {
    let size = part.size();
    match metric {
        Metric::EdgeCount => Ok(size as f64),
        Metric::RelFill => {
            if size == 0 {
                return Err(MetricError::EmptyPart);
            }
            let total_cardinality: usize = part
                .edges
                .iter()
                .map(|e| h.edge(e).len())
                .chain(part.specials.iter().map(|s| s.vertices().len()))
                .sum();
            let avg = total_cardinality as f64 / size as f64;
            Ok(size as f64 * k as f64 / avg)
        }
    }
}

/// True iff the subproblem should go to the sequential subsolver: its metric
/// is below the threshold, i.e. it has become simple.
pub fn should_delegate(
    h: &Hypergraph,
    part: &ExtendedComp,
    cfg: &HybridConfig,
    k: usize,
) -> Result<bool, MetricError> {
    let value = metric_value(h, part, k, cfg.metric)?;
    Ok(if cfg.invert {
        value >= cfg.threshold
    } else {
        value < cfg.threshold
    })
}

/// Memoises subsolver outcomes per (component, interface) within one
/// delegation. Keys hold the full sorted id sequences, so equal hashes are
/// always confirmed by full comparison before a hit counts.
#[derive(Default)]
pub struct SubsolverCache {
    entries: HashMap<CacheKey, CacheEntry>,
}

#[derive(PartialEq, Eq, Hash, Clone)]
struct CacheKey {
    edges: Vec<usize>,
    special_origins: Vec<u64>,
    conn: Vec<usize>,
}

impl CacheKey {
    fn new(part: &ExtendedComp, conn: &VertexSet) -> Self {
        CacheKey {
            edges: part.edges.iter().collect(),
            special_origins: part.specials.iter().map(|s| s.origin()).collect(),
            conn: conn.iter().collect(),
        }
    }
}

enum CacheEntry {
    Succeeded(HDFragment),
    Failed,
}

impl SubsolverCache {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Sequential top-down search for a width-≤k decomposition of `part` with
/// interface `conn`, decision-equivalent to the balanced engine on every
/// input. Pass `None` as cache to disable memoisation.
pub fn detk_decide(
    h: &Hypergraph,
    part: &ExtendedComp,
    conn: &VertexSet,
    allowed: &EdgeSet,
    k: usize,
    cache: &mut Option<&mut SubsolverCache>,
    token: &CancelToken,
) -> Result<Option<HDFragment>, Cancelled> {
    token.check()?;

    match base_case(part, k) {
        BaseCase::AcceptSingleNode => {
            let chi = h.vertices_of(&part.edges);
            debug_assert!(conn.is_subset_of(&chi));
            return Ok(Some(HDFragment::new(DecompNode::edge_node(
                chi,
                part.edges.clone(),
                vec![],
            ))));
        }
        BaseCase::AcceptSpecialLeaf => {
            return Ok(Some(HDFragment::new(DecompNode::special_leaf(
                part.specials[0].clone(),
            ))));
        }
        BaseCase::RejectDeadEnd => return Ok(None),
        BaseCase::Continue => {}
    }

    let key = CacheKey::new(part, conn);
    if let Some(c) = cache.as_deref_mut() {
        match c.entries.get(&key) {
            Some(CacheEntry::Succeeded(f)) => return Ok(Some(f.clone())),
            Some(CacheEntry::Failed) => return Ok(None),
            None => {}
        }
    }

    let support = h.vertex_support(part);
    let space = CandidateSpace::new(allowed.clone(), k).with_new_edge_rule(part.edges.clone());
    'label: for lambda in space.candidates(h) {
        token.check()?;
        let chi = h.vertices_of(&lambda).intersection(&support);
        if !conn.is_subset_of(&chi) {
            continue;
        }
        let comps = h.components(part, &chi);
        let mut lower = Vec::with_capacity(comps.len());
        for x in &comps {
            // The new edge is covered by χ, so every component shrinks.
            debug_assert!(x.size() < part.size());
            let conn_x = h.vertex_support(x).intersection(&chi);
            match detk_decide(h, x, &conn_x, allowed, k, cache, token)? {
                Some(f) => lower.push(f),
                None => continue 'label,
            }
        }
        let mut children: Vec<DecompNode> = part
            .specials
            .iter()
            .filter(|s| s.vertices().is_subset_of(&chi))
            .cloned()
            .map(DecompNode::special_leaf)
            .collect();
        children.extend(lower.into_iter().map(HDFragment::into_root));
        let frag = HDFragment::new(DecompNode::edge_node(chi, lambda, children));
        if let Some(c) = cache.as_deref_mut() {
            c.entries.insert(key, CacheEntry::Succeeded(frag.clone()));
        }
        return Ok(Some(frag));
    }

    if let Some(c) = cache.as_deref_mut() {
        c.entries.insert(key, CacheEntry::Failed);
    }
    Ok(None)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle guard: instance has {0} edges, limit is {MAX_ORACLE_EDGES}")]
    GuardExceeded(usize),
}

pub const MAX_ORACLE_EDGES: usize = 10;

/// Exhaustive width oracle for desk-scale instances: the smallest `k ≤ kmax`
/// admitting a decomposition, found with caching disabled, or `None` if no
/// such `k` exists. Guarded against large inputs.
pub fn oracle_hw(h: &Hypergraph, kmax: usize) -> Result<Option<usize>, OracleError> {
    if h.edge_count() > MAX_ORACLE_EDGES {
        return Err(OracleError::GuardExceeded(h.edge_count()));
    }
    let part = ExtendedComp::whole(h);
    let conn = VertexSet::new(h.vertex_count());
    let token = CancelToken::none();
    for k in 1..=kmax {
        let found = detk_decide(h, &part, &conn, &h.all_edges(), k, &mut None, &token)
            .expect("oracle search is never cancelled");
        if found.is_some() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
