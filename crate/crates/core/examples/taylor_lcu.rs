//! Second-order Taylor LCU steps: convergence of the post-selected state,
//! per-step success weights and ln 2 segment boundaries.

use tdsim::bench::{run_benchmark, BenchConfig, Family, SchemeSpec};
use tdsim::taylor::{segment_boundaries, success_weight, taylor2_step};
use tdsim::{ProblemDescription, ScheduleKind};

fn main() -> tdsim::Result<()> {
    let desc = ProblemDescription::Grover {
        n_qubits: 2,
        schedule: ScheduleKind::Linear,
        time_scale: 8.0,
        seed: 4,
    };
    let p = desc.build()?;
    let h = &p.hamiltonian;

    let step = taylor2_step(h, 0.25, 0.01);
    println!(
        "one step: coefficient sum {:.6}, success weight {:.6}",
        step.coefficient_sum,
        success_weight(h, 0.25, 0.01)
    );

    let segs = segment_boundaries(h, 1.0)?;
    println!("{} segments over [0, 1]; first boundaries {:.4?}", segs.len() - 1, &segs[..4.min(segs.len())]);

    let mut cfg = BenchConfig::from_toml("n_grid = [64, 128, 256, 512]\nseeds = [4]\n[problem]\nkind = \"ising\"\nsites = 2\nh_x = 1.0\n[[schemes]]\nfamily = \"taylor2\"\n")?;
    cfg.problem = desc;
    cfg.schemes = vec![SchemeSpec::plain(Family::Taylor2)];
    let rep = run_benchmark(&cfg)?;
    for r in &rep.records {
        println!("N={:<4} gates {:<6} error {:.3e}", r.n_steps, r.gates, r.error);
    }
    Ok(())
}
