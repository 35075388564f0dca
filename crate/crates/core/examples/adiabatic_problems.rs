//! Builds the three benchmark problems and reports their sizes, spectra and
//! how well a slow evolution reaches the target state.

use tdsim::operator::pure_trace_distance;
use tdsim::{reference_propagator, ProblemDescription, ScheduleKind};

fn main() -> tdsim::Result<()> {
    let problems = [
        ProblemDescription::Grover {
            n_qubits: 3,
            schedule: ScheduleKind::Linear,
            time_scale: 40.0,
            seed: 7,
        },
        ProblemDescription::Pagerank {
            n_qubits: 2,
            schedule: ScheduleKind::Sin,
            time_scale: 40.0,
            alpha: 0.85,
            edge_probability: 0.5,
            seed: 3,
        },
        ProblemDescription::Ising { sites: 4, h_x: 1.0 },
    ];
    for desc in &problems {
        let p = desc.build()?;
        let h = &p.hamiltonian;
        let (t0, t1) = h.interval();
        let mut ev: Vec<f64> = h.evaluate(t1).eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        println!("{}", desc.to_json());
        println!(
            "  dim {}  terms {}  interval [{t0}, {t1}]  lowest eigenvalues at the end {:.4} {:.4}",
            h.dim(),
            h.n_terms(),
            ev[0],
            ev[1]
        );
        if let Some(target) = &p.target_state {
            let out = reference_propagator(h, t0, t1, 1e-10)?.apply(&p.initial_state)?;
            println!("  distance to target after the sweep {:.3e}", pure_trace_distance(&out, target));
        }
    }
    Ok(())
}
