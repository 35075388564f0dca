//! Pointwise, integrated and Magnus-corrected product formulas on Grover
//! search: gate counts per step and the error of the full evolution.

use tdsim::operator::spectral_norm;
use tdsim::product::{compose_evolution, hdr_step, iacs_step_with, pointwise_step};
use tdsim::{reference_propagator, BaseScheme, ProblemDescription, ScheduleKind};

fn main() -> tdsim::Result<()> {
    let p = ProblemDescription::Grover {
        n_qubits: 2,
        schedule: ScheduleKind::Linear,
        time_scale: 40.0,
        seed: 1,
    }
    .build()?;
    let h = &p.hamiltonian;
    let (t0, t1) = h.interval();
    let exact = reference_propagator(h, t0, t1, 1e-12)?;
    let c = BaseScheme::Ost4.coefficients();
    println!("base {} (order {}, q = {})", c.name, c.order, c.q());

    for n in [32, 64, 128, 256] {
        let pw = compose_evolution(h, n, |h, t, dt| {
            let (s, u) = pointwise_step(h, t, dt, &c, 1)?;
            Ok((u.into_matrix(), s.count()))
        })?;
        let hdr = compose_evolution(h, n, |h, t, dt| {
            let (s, u) = hdr_step(h, t, dt, &c)?;
            Ok((u.into_matrix(), s.count()))
        })?;
        let iacs = compose_evolution(h, n, |h, t, dt| {
            let (s, u) = iacs_step_with(h, t, dt, &c)?;
            Ok((u.into_matrix(), s.count()))
        })?;
        let err = |m: &tdsim::operator::CMatrix| spectral_norm(&(m - exact.matrix()));
        println!(
            "N={n:<4} pointwise {:.3e} ({} gates)  hdr {:.3e} ({})  iacs {:.3e} ({})",
            err(&pw.operator),
            pw.gate_count,
            err(&hdr.operator),
            hdr.gate_count,
            err(&iacs.operator),
            iacs.gate_count
        );
    }
    Ok(())
}
