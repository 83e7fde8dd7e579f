//! Property tests for the set machinery: component computation against a
//! brute-force oracle, candidate enumeration against the filtered powerset,
//! partition soundness and parser round-trips.

use hypertree::*;
use proptest::prelude::*;

/// A random hypergraph description: vertex universe size and edge member
/// lists (sets of vertex indices).
fn hypergraph_strategy(
    max_edges: usize,
    max_vertices: usize,
) -> impl Strategy<Value = Hypergraph> {
    (2..=max_vertices).prop_flat_map(move |nv| {
        prop::collection::vec(prop::collection::btree_set(0..nv, 1..=4.min(nv)), 1..=max_edges)
            .prop_map(move |edges| {
                let named: Vec<(String, Vec<String>)> = edges
                    .into_iter()
                    .enumerate()
                    .map(|(i, vs)| {
                        (
                            format!("e{i}"),
                            vs.into_iter().map(|v| format!("v{v}")).collect(),
                        )
                    })
                    .collect();
                Hypergraph::from_named_edges("prop", &named)
            })
    })
}

/// (hypergraph, part = all edges plus a few specials, vertex set U).
fn part_and_u_strategy() -> impl Strategy<Value = (Hypergraph, ExtendedComp, VertexSet)> {
    (hypergraph_strategy(8, 10), any::<u64>()).prop_map(|(h, seed)| {
        // Derive specials and U from the seed so shrinking stays meaningful.
        let nv = h.vertex_count();
        let mut specials = Vec::new();
        let mut s = seed;
        let n_specials = (s % 3) as usize;
        for origin in 0..n_specials {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let mut verts = VertexSet::new(nv);
            for v in 0..nv {
                if (s >> (v % 64)) & 1 == 1 {
                    verts.insert(v);
                }
            }
            if verts.is_empty() {
                verts.insert((s % nv as u64) as usize);
            }
            specials.push(SpecialEdge::new(verts, origin as u64));
        }
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut u = VertexSet::new(nv);
        for v in 0..nv {
            if (s >> ((v + 13) % 64)) & 1 == 1 {
                u.insert(v);
            }
        }
        let part = ExtendedComp::new(EdgeSet::all(h.edge_count()), specials);
        (h, part, u)
    })
}

/// Brute-force component oracle: pairwise `[U]`-adjacency tests closed with
/// union-find over member indices. Members are (edge id | special origin).
fn oracle_components(
    h: &Hypergraph,
    part: &ExtendedComp,
    u: &VertexSet,
) -> Vec<(Vec<usize>, Vec<u64>)> {
    #[derive(Clone)]
    enum M {
        E(usize),
        S(usize),
    }
    let mut members = Vec::new();
    for e in part.edges.iter() {
        if !h.edge(e).difference(u).is_empty() {
            members.push(M::E(e));
        }
    }
    for (i, s) in part.specials.iter().enumerate() {
        if !s.vertices().difference(u).is_empty() {
            members.push(M::S(i));
        }
    }
    let verts = |m: &M| -> VertexSet {
        match m {
            M::E(e) => h.edge(*e).clone(),
            M::S(i) => part.specials[*i].vertices().clone(),
        }
    };

    let n = members.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = !verts(&members[i])
                .intersection(&verts(&members[j]))
                .difference(u)
                .is_empty();
            if adjacent {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }

    let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<u64>)> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        let g = groups.entry(r).or_default();
        match &members[i] {
            M::E(e) => g.0.push(*e),
            M::S(si) => g.1.push(part.specials[*si].origin()),
        }
    }
    let mut out: Vec<(Vec<usize>, Vec<u64>)> = groups.into_values().collect();
    for (es, sps) in &mut out {
        es.sort_unstable();
        sps.sort_unstable();
    }
    out.sort();
    out
}

fn as_key(c: &ExtendedComp) -> (Vec<usize>, Vec<u64>) {
    (
        c.edges.iter().collect(),
        c.specials.iter().map(|s| s.origin()).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// components() equals the pairwise-adjacency union-find oracle, is a
    /// partition of the非-covered members, and is deterministic.
    #[test]
    fn components_match_bruteforce_oracle((h, part, u) in part_and_u_strategy()) {
        let got: Vec<_> = h.components(&part, &u).iter().map(as_key).collect();
        let mut sorted = got.clone();
        sorted.sort();
        let expected = oracle_components(&h, &part, &u);
        prop_assert_eq!(sorted, expected);

        // Determinism: bitwise identical on a second run.
        let again: Vec<_> = h.components(&part, &u).iter().map(as_key).collect();
        prop_assert_eq!(got, again);
    }

    /// Every pair inside one component is linked by a path of [U]-adjacent
    /// members (witnessed by breadth-first search inside the component).
    #[test]
    fn component_members_are_pairwise_connected((h, part, u) in part_and_u_strategy()) {
        for comp in h.components(&part, &u) {
            let mut residues: Vec<VertexSet> = comp
                .edges
                .iter()
                .map(|e| h.edge(e).difference(&u))
                .collect();
            residues.extend(comp.specials.iter().map(|s| s.vertices().difference(&u)));
            let n = residues.len();
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut frontier = vec![0usize];
            while let Some(i) = frontier.pop() {
                for j in 0..n {
                    if !seen[j] && residues[i].intersects(&residues[j]) {
                        seen[j] = true;
                        frontier.push(j);
                    }
                }
            }
            prop_assert!(seen.into_iter().all(|b| b), "component not internally connected");
        }
    }

    /// Monotonicity: every [U']-component with U ⊆ U' refines some
    /// [U]-component.
    #[test]
    fn components_refine_under_growing_u((h, part, u) in part_and_u_strategy(), extra in any::<u64>()) {
        let mut u2 = u.clone();
        for v in 0..h.vertex_count() {
            if (extra >> (v % 64)) & 1 == 1 {
                u2.insert(v);
            }
        }
        let coarse = h.components(&part, &u);
        for fine in h.components(&part, &u2) {
            let inside_some = coarse.iter().any(|c| {
                fine.edges.is_subset_of(&c.edges)
                    && fine.specials.iter().all(|s| c.specials.contains(s))
            });
            prop_assert!(inside_some, "component not contained in a coarser one");
        }
    }

    /// Candidate enumeration equals the brute-force filtered powerset of
    /// sizes 1..=k, in canonical order, without duplicates; strided
    /// partitions reassemble to exactly the stream.
    #[test]
    fn enumeration_matches_filtered_powerset(
        h in hypergraph_strategy(8, 10),
        k in 1..=3usize,
        allowed_mask in any::<u64>(),
        use_new_edge in any::<bool>(),
        use_vertices in any::<bool>(),
    ) {
        let m = h.edge_count();
        let mut allowed = EdgeSet::new(m);
        for e in 0..m {
            if (allowed_mask >> (e % 64)) & 1 == 1 {
                allowed.insert(e);
            }
        }
        if allowed.is_empty() {
            allowed.insert(0);
        }
        let must_edges = EdgeSet::from_ids(m, [m - 1]);
        let must_verts = VertexSet::from_ids(h.vertex_count(), [0]);

        let mut space = CandidateSpace::new(allowed.clone(), k);
        if use_new_edge {
            space = space.with_new_edge_rule(must_edges.clone());
        }
        if use_vertices {
            space = space.with_vertex_restriction(must_verts.clone());
        }

        let stream: Vec<Vec<usize>> =
            space.candidates(&h).map(|c| c.iter().collect()).collect();

        // Brute force over the whole powerset of allowed (m ≤ 8).
        let pool: Vec<usize> = allowed.iter().collect();
        let mut expected: Vec<Vec<usize>> = Vec::new();
        for mask in 1u32..(1 << pool.len()) {
            let subset: Vec<usize> = pool
                .iter()
                .enumerate()
                .filter(|(i, _)| (mask >> i) & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            if subset.len() > k {
                continue;
            }
            if use_new_edge && !subset.iter().any(|e| must_edges.contains(*e)) {
                continue;
            }
            if use_vertices && !subset.iter().all(|&e| h.edge(e).intersects(&must_verts)) {
                continue;
            }
            expected.push(subset);
        }
        expected.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

        prop_assert_eq!(&stream, &expected);

        // No duplicates.
        let mut dedup = stream.clone();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), stream.len());

        // Partition soundness for several worker counts.
        for n in [1usize, 2, 3, 7] {
            let mut merged: Vec<(usize, Vec<usize>)> = Vec::new();
            for (i, range) in space.partition(&h, n).into_iter().enumerate() {
                for (ord, c) in range.enumerate() {
                    merged.push((ord * n + i, c.iter().collect()));
                }
            }
            merged.sort();
            let reassembled: Vec<Vec<usize>> = merged.into_iter().map(|(_, c)| c).collect();
            prop_assert_eq!(&reassembled, &stream, "partition broke for n={}", n);
        }
    }

    /// serialize -> parse reproduces the identical hypergraph (the instance
    /// name travels outside the text format).
    #[test]
    fn serialization_round_trip(h in hypergraph_strategy(10, 12)) {
        let text = serialize_hyperbench(&h);
        let back = parse_hyperbench(&text).unwrap().with_name(h.name());
        prop_assert_eq!(h, back);
    }

    /// On every solvable instance, cov of the witness partitions the part:
    /// each edge attributed exactly once.
    #[test]
    fn cov_partitions_engine_witnesses(h in hypergraph_strategy(6, 8)) {
        let cfg = SearchConfig::new(2);
        let out = decide_hw_le_k(&h, &cfg);
        if let Some(w) = out.witness {
            let part = ExtendedComp::whole(&h);
            let map = cov(&h, &part, &w);
            let mut all_edges: Vec<usize> =
                map.values().flat_map(|c| c.edges.iter().copied()).collect();
            all_edges.sort_unstable();
            let expected: Vec<usize> = part.edges.iter().collect();
            prop_assert_eq!(all_edges, expected);
        }
    }

    /// gyo_acyclic coincides with hypertree width 1 (and the join tree is a
    /// valid witness).
    #[test]
    fn gyo_iff_width_one(h in hypergraph_strategy(8, 10)) {
        let acyclic = gyo_acyclic(&h);
        let hw1 = oracle_hw(&h, 1).unwrap().is_some();
        prop_assert_eq!(acyclic, hw1);
        if acyclic {
            let jt = join_tree(&h).unwrap();
            let report = validate_extended_hd(
                &h,
                &ExtendedComp::whole(&h),
                &VertexSet::new(h.vertex_count()),
                &jt,
                1,
            );
            prop_assert!(report.valid(), "{}", report);
        }
    }
}
