//! Multi-product coefficients and the local error of the combined step.

use tdsim::bench::studies::local_errors;
use tdsim::bench::fit::fit_all;
use tdsim::mpf::{mpf_coefficients_closed_form, mpf_step_hdr, mpf_step_pointwise};
use tdsim::{mpf_coefficients, ProblemDescription, ScheduleKind};

fn main() -> tdsim::Result<()> {
    for k in [vec![1, 2], vec![1, 2, 3], vec![1, 2, 4, 6]] {
        let m = mpf_coefficients(&k)?;
        println!(
            "k {:?}: alpha {:.5?}  closed form {:.5?}  kappa {:.3}",
            m.k,
            m.alpha,
            mpf_coefficients_closed_form(&k),
            m.kappa
        );
    }

    let p = ProblemDescription::Grover {
        n_qubits: 2,
        schedule: ScheduleKind::Sin,
        time_scale: 10.0,
        seed: 2,
    }
    .build()?;
    let h = &p.hamiltonian;
    let spec = mpf_coefficients(&[1, 2])?;
    let dts: Vec<f64> = (3..8).map(|e| 2f64.powi(-e)).collect();
    for (name, hdr) in [("pointwise", false), ("integrated", true)] {
        let pts = local_errors(h, 0.3, &dts, 1e-13, |dt| {
            let s = if hdr {
                mpf_step_hdr(h, 0.3, dt, &spec)?
            } else {
                mpf_step_pointwise(h, 0.3, dt, &spec)?
            };
            Ok(s.operator)
        })?;
        let fit = fit_all(&pts)?;
        println!("{name}: local error slope {:.3}", fit.slope);
    }
    Ok(())
}
