//! qDrift on a driven Ising chain: one-step bias against its bound, the
//! iterated channel, and a sampled estimate of it.

use tdsim::qdrift::{channel_v1, iterate_channel_v1, sample_trajectories, DiscreteMeasure, StepMeasure};
use tdsim::{reference_propagator, trace_distance, ProblemDescription};

fn main() -> tdsim::Result<()> {
    let p = ProblemDescription::Ising { sites: 3, h_x: 1.0 }.build()?;
    let h = &p.hamiltonian;
    let rho = p.initial_state.to_density();

    for e in 4..9 {
        let dt = 2f64.powi(-e);
        let lambda = DiscreteMeasure::proportional(h, 0.2, dt)?;
        let exact = rho.conjugate(reference_propagator(h, 0.2, 0.2 + dt, 1e-13)?.matrix());
        let out = channel_v1(&rho, h, 0.2, dt, &lambda)?;
        println!(
            "dt {dt:<9.3e} bias {:.3e}  bound {:.3e}",
            trace_distance(&out.output, &exact)?,
            out.bias_bound
        );
    }

    let n_steps = 512;
    let channel = iterate_channel_v1(&rho, h, &StepMeasure::Proportional, n_steps)?;
    let (t0, t1) = h.interval();
    let exact = p.initial_state.to_density().conjugate(reference_propagator(h, t0, t1, 1e-12)?.matrix());
    println!("iterated channel, {n_steps} steps: {:.3e}", trace_distance(&channel, &exact)?);
    for samples in [100, 400, 1600] {
        let est = sample_trajectories(&p.initial_state, h, &StepMeasure::Proportional, n_steps, samples, 11)?;
        println!("  {samples:>5} trajectories: {:.3e} from the channel", trace_distance(&est, &channel)?);
    }
    Ok(())
}
