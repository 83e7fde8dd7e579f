//! The unoptimized search, kept as a differential-testing reference.
//!
//! Structure: the main loop guesses the root label over the full hypergraph
//! and recurses into its components; the recursive function guesses a parent
//! label first and a child label second, with no allowed-set narrowing, no
//! new-edge restriction and no negative base case. Sequential on purpose.

use super::cancel::{CancelToken, Cancelled};
use super::{base_case, BaseCase, SearchConfig, StatCounters};
use crate::decomposition::{stitch, DecompNode, HDFragment};
use crate::hypergraph::{ExtendedComp, Hypergraph, SpecialEdge, VertexSet};
use crate::separator::{balance_verdict, BalanceVerdict, CandidateSpace};
use std::sync::atomic::{AtomicU64, Ordering};

pub(super) fn decide(
    h: &Hypergraph,
    cfg: &SearchConfig,
    token: &CancelToken,
    counters: &StatCounters,
) -> Result<Option<HDFragment>, Cancelled> {
    let part = ExtendedComp::whole(h);
    let origins = AtomicU64::new(0);
    let space = CandidateSpace::new(h.all_edges(), cfg.k);

    // RootLoop: guess λ(r); the special condition forces χ(r) = ⋃λ(r).
    'root: for lambda_r in space.candidates(h) {
        token.check()?;
        counters.candidates_tried.fetch_add(1, Ordering::Relaxed);
        let chi_r = h.vertices_of(&lambda_r);
        let comps = h.components(&part, &chi_r);
        let mut children = Vec::with_capacity(comps.len());
        for y in &comps {
            let conn_y = h.vertex_support(y).intersection(&chi_r);
            match decomp_ref(h, cfg.k, y, &conn_y, &origins, token, counters, 2)? {
                Some(f) => children.push(f.into_root()),
                None => continue 'root,
            }
        }
        return Ok(Some(HDFragment::new(DecompNode::edge_node(
            chi_r, lambda_r, children,
        ))));
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn decomp_ref(
    h: &Hypergraph,
    k: usize,
    part: &ExtendedComp,
    conn: &VertexSet,
    origins: &AtomicU64,
    token: &CancelToken,
    counters: &StatCounters,
    depth: u64,
) -> Result<Option<HDFragment>, Cancelled> {
    token.check()?;
    counters.enter_call(depth);

    match base_case(part, k) {
        BaseCase::AcceptSingleNode => {
            let chi = h.vertices_of(&part.edges);
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
        // No negative base case here: dead ends exhaust the loops instead.
        BaseCase::RejectDeadEnd | BaseCase::Continue => {}
    }

    let full_space = CandidateSpace::new(h.all_edges(), k);
    for lambda_p in full_space.candidates(h) {
        token.check()?;
        counters.candidates_tried.fetch_add(1, Ordering::Relaxed);
        let lambda_p_verts = h.vertices_of(&lambda_p);
        let comps_p = h.components(part, &lambda_p_verts);
        let low = match balance_verdict(part.size(), &comps_p) {
            BalanceVerdict::Oversized(i) => &comps_p[i],
            BalanceVerdict::AllSmall => continue,
        };
        let low_support = h.vertex_support(low);
        if !low_support.intersection(conn).is_subset_of(&lambda_p_verts) {
            continue;
        }

        'child: for lambda_c in full_space.candidates(h) {
            token.check()?;
            counters.candidates_tried.fetch_add(1, Ordering::Relaxed);
            let chi_c = h.vertices_of(&lambda_c).intersection(&low_support);
            if !low_support.intersection(&lambda_p_verts).is_subset_of(&chi_c) {
                continue;
            }
            let comps_c = h.components(low, &chi_c);
            if comps_c.iter().any(|x| 2 * x.size() > part.size()) {
                continue;
            }

            let mut lower = Vec::with_capacity(comps_c.len());
            for x in &comps_c {
                let conn_x = h.vertex_support(x).intersection(&chi_c);
                match decomp_ref(h, k, x, &conn_x, origins, token, counters, depth + 1)? {
                    Some(f) => lower.push(f),
                    None => continue 'child,
                }
            }

            let placeholder =
                SpecialEdge::new(chi_c.clone(), origins.fetch_add(1, Ordering::Relaxed));
            let mut up_specials: Vec<SpecialEdge> = part
                .specials
                .iter()
                .filter(|s| !low.specials.contains(s))
                .cloned()
                .collect();
            up_specials.push(placeholder.clone());
            let comp_up = ExtendedComp::new(part.edges.difference(&low.edges), up_specials);
            let upper =
                match decomp_ref(h, k, &comp_up, conn, origins, token, counters, depth + 1)? {
                    Some(u) => u,
                    None => continue 'child,
                };

            let covered: Vec<SpecialEdge> = low
                .specials
                .iter()
                .filter(|s| s.vertices().is_subset_of(&chi_c))
                .cloned()
                .collect();
            let frag = stitch(upper, &placeholder, chi_c, lambda_c, &covered, lower)
                .expect("upper fragment carries the placeholder leaf");
            return Ok(Some(frag));
        }
    }
    Ok(None)
}
