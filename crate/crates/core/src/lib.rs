//! Exact hypertree decompositions of hypergraphs arising from conjunctive
//! queries and constraint satisfaction problems.
//!
//! The centrepiece is a parallel decision procedure for `hw(H) ≤ k` built on
//! balanced separators: the search recurses on extended subhypergraphs whose
//! size at least halves at every level, giving logarithmic recursion depth
//! and embarrassingly parallel candidate exploration. Around it sit an
//! instance parser, a full decomposition validator, a GYO-based width-1 fast
//! path, and a sequential cached subsolver for hybrid operation on simple
//! subproblems.
//!
//! The usual entry points are [`parse_hyperbench`], [`decide_hw_le_k`] and
//! [`validate_extended_hd`].

mod bitset;
pub mod decomposition;
pub mod engine;
pub mod format;
pub mod gyo;
pub mod hybrid;
pub mod hypergraph;
pub mod separator;

pub use decomposition::{
    check_normal_form, cov, stitch, validate_extended_hd, Condition, Cover, CovSet, DecompNode,
    HDFragment, NodePath, StitchError, ValidationReport,
};
pub use engine::{
    base_case, decide_hw_le_k, decomp_reference, depth_bound, BaseCase, CancelToken, Cancelled,
    Decision, SearchConfig, SearchOutcome, SearchStats,
};
pub use format::{parse_hyperbench, serialize_hyperbench, ParseError};
pub use gyo::{gyo_acyclic, join_tree};
pub use hybrid::{
    detk_decide, metric_value, oracle_hw, should_delegate, HybridConfig, Metric, MetricError,
    OracleError, SubsolverCache,
};
pub use hypergraph::{EdgeSet, ExtendedComp, Hypergraph, SpecialEdge, VertexSet};
pub use separator::{balance_verdict, BalanceVerdict, CandidateRange, CandidateSpace};
