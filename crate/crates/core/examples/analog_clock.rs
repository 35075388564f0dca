//! Smeared-clock analog model: state error against clock width, and the
//! two-width extrapolation of an observable.

use tdsim::analog::GaussianClock;
use tdsim::bench::fit::fit_all;
use tdsim::bench::studies::{analog_sweep, analog_time_independent_defect};
use tdsim::{ProblemDescription, ScheduleKind};

fn main() -> tdsim::Result<()> {
    let p = ProblemDescription::Grover {
        n_qubits: 2,
        schedule: ScheduleKind::Linear,
        time_scale: 40.0,
        seed: 1,
    }
    .build()?;
    let clock = GaussianClock::new(0.02)?;
    let omegas: Vec<f64> = (0..5).map(|e| 0.02 * 2f64.powi(-e)).collect();
    let pts = analog_sweep(&p, 0.5, &omegas, &clock)?;
    println!("omega       trace-dist  obs-error   extrapolated");
    for q in &pts {
        println!(
            "{:<11.3e} {:<11.3e} {:<11.3e} {:.3e}",
            q.omega, q.trace_distance, q.plain_error, q.richardson_error
        );
    }
    let td = fit_all(&pts.iter().map(|q| (q.omega, q.trace_distance)).collect::<Vec<_>>())?;
    let rich = fit_all(&pts.iter().map(|q| (q.omega, q.richardson_error)).collect::<Vec<_>>())?;
    println!("slopes: trace distance {:.2}, extrapolated observable {:.2}", td.slope, rich.slope);
    println!(
        "constant Hamiltonian defect {:.1e}",
        analog_time_independent_defect(&omegas, &clock)?
    );
    Ok(())
}
