//! Command-line front end for exact hypertree width computation.
//!
//! Exit codes: 0 decided/completed, 2 timeout, 3 input error.

use clap::Parser;
use hypertree::{parse_hyperbench, Decision, HybridConfig, Hypergraph, Metric, SearchConfig};
use hypertree_cli::{bench, driver, export};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser, Debug)]
#[command(
    name = "hypertree",
    about = "Exact hypertree width via parallel balanced-separator search",
    disable_help_flag = false
)]
struct Cli {
    /// Hypergraph instance to solve.
    #[arg(long, value_name = "path")]
    graph: Option<PathBuf>,

    /// Decide a single width instead of searching for the exact one.
    #[arg(long, value_name = "k")]
    width: Option<usize>,

    /// Search for the exact width (default when --graph is given).
    #[arg(long)]
    exact: bool,

    /// Largest width tried by the exact search.
    #[arg(long, value_name = "n", default_value_t = 10)]
    kmax: usize,

    /// Worker threads (defaults to the machine's cores).
    #[arg(long, value_name = "n")]
    workers: Option<usize>,

    /// Per-decision timeout in seconds (0 disables).
    #[arg(long, value_name = "seconds", default_value_t = 3600)]
    timeout: u64,

    /// Subsolver switching metric: edgecount, relfill or off.
    #[arg(long, value_name = "metric", default_value = "relfill")]
    hybrid: String,

    /// Switching threshold for the hybrid metric.
    #[arg(long, value_name = "T", default_value_t = 400.0)]
    threshold: f64,

    /// Run every instance in a directory and emit CSV statistics.
    #[arg(long, value_name = "dir")]
    bench: Option<PathBuf>,

    /// Output path for the decomposition or the benchmark CSV.
    #[arg(long, value_name = "path")]
    out: Option<PathBuf>,

    /// Decomposition output format: json or dot.
    #[arg(long, value_name = "format")]
    format: Option<String>,

    /// Use the unoptimized algorithm (differential-testing mode).
    #[arg(long)]
    reference: bool,

    /// Reserved; the search is deterministic and takes no seed.
    #[arg(long, value_name = "n")]
    seed: Option<u64>,
}

const EXIT_OK: u8 = 0;
const EXIT_TIMEOUT: u8 = 2;
const EXIT_INPUT: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version are not errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::from(EXIT_OK);
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    let _ = cli.seed;
    let workers = cli.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    if workers == 0 {
        return Err("--workers must be at least 1".into());
    }
    let hybrid = match cli.hybrid.as_str() {
        "edgecount" => Some(HybridConfig::new(Metric::EdgeCount, cli.threshold)),
        "relfill" => Some(HybridConfig::new(Metric::RelFill, cli.threshold)),
        "off" => None,
        other => return Err(format!("unknown hybrid metric '{other}'")),
    };
    let cfg = SearchConfig::new(1)
        .with_workers(workers)
        .with_timeout(Duration::from_secs(cli.timeout))
        .with_hybrid(hybrid)
        .with_reference_mode(cli.reference);

    match (&cli.graph, &cli.bench) {
        (Some(_), Some(_)) => Err("--graph and --bench are mutually exclusive".into()),
        (None, None) => Err("one of --graph or --bench is required".into()),
        (None, Some(dir)) => run_bench(dir, cli.kmax, &cfg, cli.out.as_deref()),
        (Some(path), None) => {
            let h = load_graph(path)?;
            match cli.width {
                Some(k) => {
                    if cli.exact {
                        return Err("--width and --exact are mutually exclusive".into());
                    }
                    run_decision(&h, k, &cfg, &cli)
                }
                None => run_exact(&h, cli.kmax, &cfg, &cli),
            }
        }
    }
}

fn load_graph(path: &std::path::Path) -> Result<Hypergraph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_hyperbench(&text)
        .map(|h| h.with_name(&stem))
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn write_or_print(out: Option<&std::path::Path>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_witness(
    h: &Hypergraph,
    witness: &hypertree::HDFragment,
    cli: &Cli,
) -> Result<(), String> {
    let format = cli.format.as_deref().unwrap_or("json");
    let rendered = match format {
        "json" => export::export_json(h, witness),
        "dot" => export::export_dot(h, witness),
        other => return Err(format!("unknown format '{other}'")),
    };
    if cli.out.is_some() || cli.format.is_some() {
        write_or_print(cli.out.as_deref(), &rendered)?;
        if cli.out.is_some() {
            println!("decomposition written to {}", cli.out.as_ref().unwrap().display());
        }
    }
    Ok(())
}

fn run_decision(h: &Hypergraph, k: usize, cfg: &SearchConfig, cli: &Cli) -> Result<u8, String> {
    if k == 0 {
        return Err("--width must be at least 1".into());
    }
    let mut kcfg = cfg.clone();
    kcfg.k = k;
    let outcome = hypertree::decide_hw_le_k(h, &kcfg);
    match outcome.decided {
        Decision::Yes => {
            println!(
                "hw({}) <= {k}: yes ({} candidates, {:.3}s)",
                h.name(),
                outcome.stats.candidates_tried,
                outcome.stats.wall_time.as_secs_f64()
            );
            if let Some(w) = &outcome.witness {
                emit_witness(h, w, cli)?;
            }
            Ok(EXIT_OK)
        }
        Decision::No => {
            println!(
                "hw({}) <= {k}: no ({} candidates, {:.3}s)",
                h.name(),
                outcome.stats.candidates_tried,
                outcome.stats.wall_time.as_secs_f64()
            );
            Ok(EXIT_OK)
        }
        Decision::TimedOut => {
            println!("hw({}) <= {k}: timeout", h.name());
            Ok(EXIT_TIMEOUT)
        }
    }
}

fn run_exact(h: &Hypergraph, kmax: usize, cfg: &SearchConfig, cli: &Cli) -> Result<u8, String> {
    let result = driver::compute_hw(h, 1, kmax, cfg);
    match result.hw {
        driver::Hw::Exact(w) => {
            let total: f64 = result
                .per_k_outcomes
                .iter()
                .map(|o| o.wall_time.as_secs_f64())
                .sum();
            println!("hw({}) = {w} ({total:.3}s)", h.name());
            if let Some(witness) = &result.witness {
                emit_witness(h, witness, cli)?;
            }
            Ok(EXIT_OK)
        }
        driver::Hw::Unknown { lower, upper } => {
            match upper {
                Some(u) => println!("hw({}) in [{lower}, {u}] (not proven exact)", h.name()),
                None => println!("hw({}) >= {lower} (undecided up to kmax)", h.name()),
            }
            if result.timed_out() {
                Ok(EXIT_TIMEOUT)
            } else {
                Ok(EXIT_OK)
            }
        }
    }
}

fn run_bench(
    dir: &std::path::Path,
    kmax: usize,
    cfg: &SearchConfig,
    out: Option<&std::path::Path>,
) -> Result<u8, String> {
    let records = bench::run_benchmark(dir, kmax, cfg)
        .map_err(|e| format!("cannot read {}: {e}", dir.display()))?;
    let csv = bench::to_csv(&records);
    write_or_print(out, &csv)?;
    Ok(EXIT_OK)
}
