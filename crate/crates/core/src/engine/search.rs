//! The optimized recursive search.
//!
//! Each call looks for a child separator first: a λ-label whose components
//! are all small enough. If that label also covers the `Conn` interface it
//! roots the current fragment directly; otherwise a parent label is searched
//! for, restricted to edges intersecting `⋃λ_c`, and the part splits into the
//! oversized parent component below and the remainder above, joined by a
//! fresh special edge.
//!
//! Parallelism has two axes: candidate sub-ranges of the child loop are raced
//! across workers, and recursions on distinct components run as independent
//! tasks. Both kick in only above the configured subproblem size threshold.

use super::cancel::{CancelToken, Cancelled};
use super::{base_case, depth_bound, BaseCase, SearchConfig, StatCounters};
use crate::decomposition::{stitch, DecompNode, HDFragment};
use crate::hybrid::{self, SubsolverCache};
use crate::hypergraph::{EdgeSet, ExtendedComp, Hypergraph, SpecialEdge, VertexSet};
use crate::separator::{balance_verdict, BalanceVerdict, CandidateSpace};
use rayon::prelude::*;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

pub(super) struct Engine<'a> {
    h: &'a Hypergraph,
    cfg: &'a SearchConfig,
    counters: &'a StatCounters,
    origins: AtomicU64,
    bound: u64,
    pool: Option<rayon::ThreadPool>,
}

impl<'a> Engine<'a> {
    pub(super) fn new(h: &'a Hypergraph, cfg: &'a SearchConfig, counters: &'a StatCounters) -> Self {
        let pool = (cfg.workers > 1).then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.workers)
                .build()
                .expect("worker pool")
        });
        Engine {
            h,
            cfg,
            counters,
            origins: AtomicU64::new(0),
            bound: depth_bound(h.edge_count()),
            pool,
        }
    }

    fn fresh_special(&self, vertices: VertexSet) -> SpecialEdge {
        SpecialEdge::new(vertices, self.origins.fetch_add(1, Ordering::Relaxed))
    }

    fn parallelize(&self, part_size: usize) -> bool {
        self.pool.is_some() && part_size >= self.cfg.parallel_recursion_threshold
    }

    pub(super) fn decomp(
        &self,
        part: &ExtendedComp,
        conn: &VertexSet,
        allowed: &EdgeSet,
        token: &CancelToken,
        depth: u64,
    ) -> Result<Option<HDFragment>, Cancelled> {
        token.check()?;
        self.counters.enter_call(depth);
        assert!(
            depth <= self.bound,
            "recursion depth {depth} exceeds the bound {}",
            self.bound
        );
        let support = self.h.vertex_support(part);
        assert!(
            conn.is_subset_of(&support),
            "Conn must be covered by the part's vertices"
        );

        match base_case(part, self.cfg.k) {
            BaseCase::AcceptSingleNode => {
                let chi = self.h.vertices_of(&part.edges);
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

        // Simple subproblems go to the sequential subsolver; its fragments
        // honor the same conn/allowed contract, so they compose unchanged.
        if let Some(hy) = &self.cfg.hybrid {
            let delegate = hybrid::should_delegate(self.h, part, hy, self.cfg.k)
                .expect("part is non-empty past the base cases");
            if delegate {
                self.counters.delegations.fetch_add(1, Ordering::Relaxed);
                let mut cache = Some(SubsolverCache::default());
                return hybrid::detk_decide(
                    self.h,
                    part,
                    conn,
                    allowed,
                    self.cfg.k,
                    &mut cache.as_mut(),
                    token,
                );
            }
        }

        let space = CandidateSpace::new(allowed.clone(), self.cfg.k)
            .with_new_edge_rule(part.edges.clone());

        if self.parallelize(part.size()) {
            let group = token.child();
            let winner: Mutex<Option<HDFragment>> = Mutex::new(None);
            let pool = self.pool.as_ref().unwrap();
            let ranges = space.partition(self.h, self.cfg.workers);
            pool.install(|| {
                rayon::scope(|s| {
                    for range in ranges {
                        let group = &group;
                        let winner = &winner;
                        let ctx = SearchFrame {
                            part,
                            conn,
                            allowed,
                            support: &support,
                            depth,
                        };
                        s.spawn(move |_| {
                            for lambda_c in range {
                                if group.is_cancelled() {
                                    return;
                                }
                                match self.try_child_label(&ctx, lambda_c, group) {
                                    Ok(Some(frag)) => {
                                        let mut w = winner.lock().unwrap();
                                        if w.is_none() {
                                            *w = Some(frag);
                                        }
                                        group.cancel();
                                        return;
                                    }
                                    Ok(None) => {}
                                    Err(Cancelled) => return,
                                }
                            }
                        });
                    }
                });
            });
            if let Some(w) = winner.lock().unwrap().take() {
                return Ok(Some(w));
            }
            token.check()?;
            Ok(None)
        } else {
            let ctx = SearchFrame {
                part,
                conn,
                allowed,
                support: &support,
                depth,
            };
            for lambda_c in space.candidates(self.h) {
                if let Some(frag) = self.try_child_label(&ctx, lambda_c, token)? {
                    return Ok(Some(frag));
                }
            }
            Ok(None)
        }
    }

    /// Evaluate one child-label candidate: balance pre-check on its
    /// components, then either root the fragment here or search for a parent
    /// label. `Ok(None)` means the candidate is definitively rejected.
    fn try_child_label(
        &self,
        ctx: &SearchFrame<'_>,
        lambda_c: EdgeSet,
        token: &CancelToken,
    ) -> Result<Option<HDFragment>, Cancelled> {
        token.check()?;
        self.counters.candidates_tried.fetch_add(1, Ordering::Relaxed);
        let part = ctx.part;
        let lambda_c_verts = self.h.vertices_of(&lambda_c);

        // χ_c ⊆ ⋃λ_c, so an oversized [λ_c]-component rules the label out for
        // every possible parent.
        let comps_c = self.h.components(part, &lambda_c_verts);
        if let BalanceVerdict::Oversized(_) = balance_verdict(part.size(), &comps_c) {
            return Ok(None);
        }

        if ctx.conn.is_subset_of(&lambda_c_verts) {
            // The label covers the upward interface: c roots this fragment.
            let chi_c = lambda_c_verts.intersection(ctx.support);
            let subs = self.sub_calls(&comps_c, &chi_c, part.size());
            let frags = match self.solve_all(subs, ctx.allowed, token, ctx.depth, part.size())? {
                Some(f) => f,
                None => return Ok(None),
            };
            let mut children: Vec<DecompNode> = part
                .specials
                .iter()
                .filter(|s| s.vertices().is_subset_of(&chi_c))
                .cloned()
                .map(DecompNode::special_leaf)
                .collect();
            children.extend(frags.into_iter().map(HDFragment::into_root));
            return Ok(Some(HDFragment::new(DecompNode::edge_node(
                chi_c, lambda_c, children,
            ))));
        }

        // Otherwise find a parent label; only edges meeting ⋃λ_c can matter.
        let pspace = CandidateSpace::new(ctx.allowed.clone(), self.cfg.k)
            .with_new_edge_rule(part.edges.clone())
            .with_vertex_restriction(lambda_c_verts.clone());
        for lambda_p in pspace.candidates(self.h) {
            token.check()?;
            self.counters.candidates_tried.fetch_add(1, Ordering::Relaxed);
            let lambda_p_verts = self.h.vertices_of(&lambda_p);
            let comps_p = self.h.components(part, &lambda_p_verts);
            let low = match balance_verdict(part.size(), &comps_p) {
                BalanceVerdict::Oversized(i) => &comps_p[i],
                BalanceVerdict::AllSmall => continue,
            };
            let low_support = self.h.vertex_support(low);
            let chi_c = lambda_c_verts.intersection(&low_support);
            if !low_support.intersection(ctx.conn).is_subset_of(&lambda_p_verts) {
                continue;
            }
            if !low_support.intersection(&lambda_p_verts).is_subset_of(&chi_c) {
                continue;
            }

            // Components below the child; each refines a [λ_c]-component of
            // the part, so the pre-check already bounds them.
            let new_comps = self.h.components(low, &chi_c);
            let subs = self.sub_calls(&new_comps, &chi_c, part.size());
            let lower = match self.solve_all(subs, ctx.allowed, token, ctx.depth, part.size())? {
                Some(f) => f,
                None => continue,
            };

            // Everything not below the child, joined by a fresh special edge
            // standing in for the child's bag.
            let placeholder = self.fresh_special(chi_c.clone());
            let mut up_specials: Vec<SpecialEdge> = part
                .specials
                .iter()
                .filter(|s| !low.specials.contains(s))
                .cloned()
                .collect();
            up_specials.push(placeholder.clone());
            let comp_up = ExtendedComp::new(part.edges.difference(&low.edges), up_specials);
            assert!(
                comp_up.size() <= (part.size() + 1) / 2,
                "upper part must shrink to at most half"
            );
            let allowed_up = ctx.allowed.difference(&low.edges);
            let upper = match self.decomp(&comp_up, ctx.conn, &allowed_up, token, ctx.depth + 1)? {
                Some(u) => u,
                None => continue,
            };

            let covered: Vec<SpecialEdge> = low
                .specials
                .iter()
                .filter(|s| s.vertices().is_subset_of(&chi_c))
                .cloned()
                .collect();
            let frag = stitch(upper, &placeholder, chi_c, lambda_c.clone(), &covered, lower)
                .expect("upper fragment carries the placeholder leaf");
            return Ok(Some(frag));
        }
        Ok(None)
    }

    /// Pair each component with its interface `V(x) ∩ χ_c`, asserting the
    /// balance guarantee the recursion depends on.
    fn sub_calls(
        &self,
        comps: &[ExtendedComp],
        chi_c: &VertexSet,
        parent_size: usize,
    ) -> Vec<(ExtendedComp, VertexSet)> {
        comps
            .iter()
            .map(|x| {
                assert!(
                    x.size() <= (parent_size + 1) / 2,
                    "component must be at most half of its parent part"
                );
                let conn_x = self.h.vertex_support(x).intersection(chi_c);
                (x.clone(), conn_x)
            })
            .collect()
    }

    /// Solve all subproblems, failing fast: `Ok(None)` as soon as any is
    /// definitively unsolvable. Large parts fan out across the pool.
    fn solve_all(
        &self,
        subs: Vec<(ExtendedComp, VertexSet)>,
        allowed: &EdgeSet,
        token: &CancelToken,
        depth: u64,
        parent_size: usize,
    ) -> Result<Option<Vec<HDFragment>>, Cancelled> {
        if subs.is_empty() {
            return Ok(Some(vec![]));
        }
        if subs.len() > 1 && self.parallelize(parent_size) {
            let group = token.child();
            let results: Vec<Result<Option<HDFragment>, Cancelled>> =
                self.pool.as_ref().unwrap().install(|| {
                    subs.par_iter()
                        .map(|(part, conn)| {
                            let r = self.decomp(part, conn, allowed, &group, depth + 1);
                            if !matches!(r, Ok(Some(_))) {
                                group.cancel();
                            }
                            r
                        })
                        .collect()
                });
            if results.iter().any(|r| matches!(r, Ok(None))) {
                return Ok(None);
            }
            if results.iter().any(|r| r.is_err()) {
                // No subproblem failed outright, so the cancellation came
                // from above us.
                return Err(Cancelled);
            }
            Ok(Some(results.into_iter().map(|r| r.unwrap().unwrap()).collect()))
        } else {
            let mut frags = Vec::with_capacity(subs.len());
            for (part, conn) in &subs {
                match self.decomp(part, conn, allowed, token, depth + 1)? {
                    Some(f) => frags.push(f),
                    None => return Ok(None),
                }
            }
            Ok(Some(frags))
        }
    }
}

/// The loop-invariant arguments of one `decomp` activation, bundled so the
/// candidate evaluation can be shared between the sequential and the racing
/// paths.
struct SearchFrame<'a> {
    part: &'a ExtendedComp,
    conn: &'a VertexSet,
    allowed: &'a EdgeSet,
    support: &'a VertexSet,
    depth: u64,
}
