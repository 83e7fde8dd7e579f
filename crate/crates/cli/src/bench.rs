//! Benchmark runner: width computation over an instance directory with CSV
//! output.
//!
//! Instances run sequentially in name order (each run gets all workers), one
//! record per instance. Parse failures become `error` rows and the run
//! continues. The CSV schema is fixed:
//! `instance,vertices,edges,status,hw,total_ms,workers,metric,threshold`.

use crate::driver::{compute_hw, Hw, KOutcome, WidthResult};
use hypertree::{parse_hyperbench, Metric, SearchConfig};
use std::fmt;
use std::path::Path;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchStatus {
    Solved,
    Timeout,
    Error,
}

impl fmt::Display for BenchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BenchStatus::Solved => "solved",
            BenchStatus::Timeout => "timeout",
            BenchStatus::Error => "error",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub instance: String,
    pub vertices: usize,
    pub edges: usize,
    pub status: BenchStatus,
    pub hw: Option<usize>,
    pub total_ms: u128,
    pub per_k: Vec<KOutcome>,
    pub workers: usize,
    pub metric: String,
    pub threshold: String,
}

pub fn hybrid_columns(cfg: &SearchConfig) -> (String, String) {
    match &cfg.hybrid {
        Some(hy) => {
            let metric = match hy.metric {
                Metric::EdgeCount => "edgecount",
                Metric::RelFill => "relfill",
            };
            (metric.to_string(), format!("{}", hy.threshold))
        }
        None => ("off".to_string(), String::new()),
    }
}

/// Run every regular file of `dir` (name-sorted) through the width driver.
/// Unreadable or unparseable instances produce `error` records; only the
/// directory listing itself can fail.
pub fn run_benchmark(
    dir: &Path,
    kmax: usize,
    cfg: &SearchConfig,
) -> std::io::Result<Vec<BenchRecord>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    paths.sort();

    let (metric, threshold) = hybrid_columns(cfg);
    let mut records = Vec::with_capacity(paths.len());
    for path in paths {
        let instance = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let error_record = |instance: String| BenchRecord {
            instance,
            vertices: 0,
            edges: 0,
            status: BenchStatus::Error,
            hw: None,
            total_ms: 0,
            per_k: Vec::new(),
            workers: cfg.workers,
            metric: metric.clone(),
            threshold: threshold.clone(),
        };

        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => {
                records.push(error_record(instance));
                continue;
            }
        };
        let h = match parse_hyperbench(&text) {
            Ok(h) => h.with_name(&instance),
            Err(_) => {
                records.push(error_record(instance));
                continue;
            }
        };

        let start = Instant::now();
        let result: WidthResult = compute_hw(&h, 1, kmax, cfg);
        let total_ms = start.elapsed().as_millis();
        let (status, hw) = match result.hw {
            Hw::Exact(w) => (BenchStatus::Solved, Some(w)),
            Hw::Unknown { .. } => (BenchStatus::Timeout, None),
        };
        records.push(BenchRecord {
            instance,
            vertices: h.vertex_count(),
            edges: h.edge_count(),
            status,
            hw,
            total_ms,
            per_k: result.per_k_outcomes,
            workers: cfg.workers,
            metric: metric.clone(),
            threshold: threshold.clone(),
        });
    }
    Ok(records)
}

pub const CSV_HEADER: &str = "instance,vertices,edges,status,hw,total_ms,workers,metric,threshold";

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let hw = r.hw.map(|w| w.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.instance,
            r.vertices,
            r.edges,
            r.status,
            hw,
            r.total_ms,
            r.workers,
            r.metric,
            r.threshold
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, content: &str) {
        let mut f = std::fs::File::create(dir.join(name)).unwrap();
        f.write_all(content.as_bytes()).unwrap();
    }

    #[test]
    fn benchmark_runs_directory_in_name_order() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "b_triangle.hg", "e1(a,b),e2(b,c),e3(c,a).");
        write_file(dir.path(), "a_edge.hg", "e1(a,b).");
        write_file(dir.path(), "c_cycle4.hg", "e1(a,b),e2(b,c),e3(c,d),e4(d,a).");

        let records = run_benchmark(dir.path(), 10, &SearchConfig::new(1)).unwrap();
        let names: Vec<&str> = records.iter().map(|r| r.instance.as_str()).collect();
        assert_eq!(names, vec!["a_edge", "b_triangle", "c_cycle4"]);
        assert!(records.iter().all(|r| r.status == BenchStatus::Solved));
        assert_eq!(records[0].hw, Some(1));
        assert_eq!(records[1].hw, Some(2));
        assert_eq!(records[2].hw, Some(2));
    }

    #[test]
    fn unparseable_file_becomes_error_row() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "bad.hg", "e1(a,b"); // no terminator
        write_file(dir.path(), "good.hg", "e1(a,b).");

        let records = run_benchmark(dir.path(), 4, &SearchConfig::new(1)).unwrap();
        assert_eq!(records[0].status, BenchStatus::Error);
        assert_eq!(records[1].status, BenchStatus::Solved);

        let csv = to_csv(&records);
        assert!(csv.starts_with(CSV_HEADER));
        assert!(csv.contains("bad,0,0,error,,"));
    }
}
