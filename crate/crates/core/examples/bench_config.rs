//! Runs a benchmark config and writes CSV, SVG and the metadata sidecar.
//!
//!     cargo run --example bench_config -- configs/grover.toml /tmp/out

use std::path::PathBuf;

use tdsim::bench::{emit_all, evaluate_checks, run_benchmark, BenchConfig};

fn main() -> tdsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/grover.toml"));
    let mut cfg = BenchConfig::load(&path)?;
    if let Some(dir) = args.next() {
        cfg.output.dir = dir.into();
    } else {
        cfg.output.dir = std::env::temp_dir().join("tdsim-example");
    }

    let rep = run_benchmark(&cfg)?;
    for id in cfg.series_ids() {
        let s = rep.series(&id);
        if let (Some(first), Some(last)) = (s.first(), s.last()) {
            println!("{id:<20} {:.2e} at N={} .. {:.2e} at N={}", first.error, first.n_steps, last.error, last.n_steps);
        }
    }
    for p in emit_all(&cfg, &rep)? {
        println!("wrote {}", p.display());
    }
    for c in evaluate_checks(&cfg, &rep) {
        println!("{c}");
    }
    Ok(())
}
