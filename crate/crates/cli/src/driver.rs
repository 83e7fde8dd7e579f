//! Exact-width driver: ascending-k search with adjacent refutation.
//!
//! Width 1 is settled by the GYO fast path (acyclicity is equivalent to
//! width 1 and the join tree is the witness); beyond that the engine decides
//! k = 2, 3, ... until the first Yes, whose optimality is proven by the
//! preceding No. A timeout leaves the tightest established bounds.

use hypertree::{
    decide_hw_le_k, join_tree, Decision, HDFragment, Hypergraph, SearchConfig, SearchOutcome,
};
use std::time::Duration;

/// Exact width, or the bounds established before the search stopped.
/// `upper` is the smallest k with a known Yes, when one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hw {
    Exact(usize),
    Unknown { lower: usize, upper: Option<usize> },
}

#[derive(Clone, Debug)]
pub struct KOutcome {
    pub k: usize,
    pub decided: Decision,
    pub wall_time: Duration,
}

#[derive(Clone, Debug)]
pub struct WidthResult {
    pub hw: Hw,
    pub witness: Option<HDFragment>,
    pub per_k_outcomes: Vec<KOutcome>,
}

impl WidthResult {
    pub fn solved(&self) -> bool {
        matches!(self.hw, Hw::Exact(_))
    }

    pub fn timed_out(&self) -> bool {
        self.per_k_outcomes
            .iter()
            .any(|o| o.decided == Decision::TimedOut)
    }
}

/// `cfg` is a template; its `k` field is overridden per iteration.
pub fn compute_hw(h: &Hypergraph, kmin: usize, kmax: usize, cfg: &SearchConfig) -> WidthResult {
    assert!(1 <= kmin && kmin <= kmax);
    let mut per_k: Vec<KOutcome> = Vec::new();
    // Becomes true once hw > k-1 is established for the k about to run.
    let mut refuted_below = kmin > 1;
    let mut lower = kmin;

    if kmin == 1 {
        let start = std::time::Instant::now();
        let tree = join_tree(h);
        let decided = if tree.is_some() { Decision::Yes } else { Decision::No };
        per_k.push(KOutcome {
            k: 1,
            decided,
            wall_time: start.elapsed(),
        });
        if let Some(witness) = tree {
            return WidthResult {
                hw: Hw::Exact(1),
                witness: Some(witness),
                per_k_outcomes: per_k,
            };
        }
        refuted_below = true;
        lower = 2;
    }

    for k in kmin.max(2)..=kmax {
        let mut kcfg = cfg.clone();
        kcfg.k = k;
        let SearchOutcome {
            decided,
            witness,
            stats,
        } = decide_hw_le_k(h, &kcfg);
        per_k.push(KOutcome {
            k,
            decided,
            wall_time: stats.wall_time,
        });
        match decided {
            Decision::Yes => {
                let hw = if refuted_below {
                    Hw::Exact(k)
                } else {
                    Hw::Unknown {
                        lower,
                        upper: Some(k),
                    }
                };
                return WidthResult {
                    hw,
                    witness,
                    per_k_outcomes: per_k,
                };
            }
            Decision::No => {
                refuted_below = true;
                lower = k + 1;
            }
            Decision::TimedOut => {
                return WidthResult {
                    hw: Hw::Unknown { lower, upper: None },
                    witness: None,
                    per_k_outcomes: per_k,
                };
            }
        }
    }

    WidthResult {
        hw: Hw::Unknown { lower, upper: None },
        witness: None,
        per_k_outcomes: per_k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypertree::{parse_hyperbench, validate_extended_hd, ExtendedComp, VertexSet};

    fn exact_width(text: &str) -> (usize, WidthResult) {
        let h = parse_hyperbench(text).unwrap();
        let r = compute_hw(&h, 1, 10, &SearchConfig::new(1));
        let w = match r.hw {
            Hw::Exact(w) => w,
            ref other => panic!("expected exact width, got {other:?}"),
        };
        let witness = r.witness.as_ref().expect("solved result carries witness");
        assert_eq!(witness.width(), w);
        let report = validate_extended_hd(
            &h,
            &ExtendedComp::whole(&h),
            &VertexSet::new(h.vertex_count()),
            witness,
            w,
        );
        assert!(report.valid(), "{report}");
        (w, r)
    }

    #[test]
    fn single_edge_is_width_one() {
        let (w, r) = exact_width("e1(a,b).");
        assert_eq!(w, 1);
        assert_eq!(r.per_k_outcomes.len(), 1);
    }

    #[test]
    fn triangle_is_width_two_with_refutation() {
        let (w, r) = exact_width("e1(a,b),e2(b,c),e3(c,a).");
        assert_eq!(w, 2);
        // Exactness bookkeeping: No at 1 (cyclicity), Yes at 2.
        assert_eq!(r.per_k_outcomes[0].decided, Decision::No);
        assert_eq!(r.per_k_outcomes[1].decided, Decision::Yes);
    }

    #[test]
    fn q5_is_width_two() {
        let (w, _) = exact_width(
            "customer(CK,NK),orders(OK,CK,ODate),lineitem(OK,SK,LPrice,LDisc),\
             supplier(SK,NK),nation(NK,RK,NName),region(RK,RName).",
        );
        assert_eq!(w, 2);
    }

    #[test]
    fn kmax_exhaustion_reports_bounds() {
        let h = parse_hyperbench("e1(a,b),e2(b,c),e3(c,a).").unwrap();
        let r = compute_hw(&h, 1, 1, &SearchConfig::new(1));
        assert_eq!(r.hw, Hw::Unknown { lower: 2, upper: None });
    }

    #[test]
    fn timeout_reports_partial_bounds() {
        let atoms: Vec<String> = (0..24)
            .map(|i| format!("e{i}(v{i},v{},w{i})", (i + 1) % 24))
            .collect();
        let h = parse_hyperbench(&format!("{}.", atoms.join(","))).unwrap();
        let cfg = SearchConfig::new(1).with_timeout(Duration::from_nanos(1));
        let r = compute_hw(&h, 1, 10, &cfg);
        assert!(matches!(r.hw, Hw::Unknown { .. }));
        assert!(r.timed_out());
    }
}
