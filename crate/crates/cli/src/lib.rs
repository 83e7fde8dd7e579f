//! Library backing the `hypertree` command: the exact-width driver, the
//! benchmark runner and the decomposition exporters.

pub mod bench;
pub mod driver;
pub mod export;

pub use bench::{run_benchmark, to_csv, BenchRecord, BenchStatus, CSV_HEADER};
pub use driver::{compute_hw, Hw, KOutcome, WidthResult};
pub use export::{export_dot, export_json, import_json, structurally_equal, ImportError};
