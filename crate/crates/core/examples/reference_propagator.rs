//! Romberg-extrapolated reference propagator for a driven qubit, with its
//! convergence record.

use tdsim::operator::spectral_norm;
use tdsim::problems::pauli;
use tdsim::propagator::{midpoint_product, reference_propagator_report};
use tdsim::{HermitianOperator, LocalTerm, Schedule, TimeDepHamiltonian};

fn main() -> tdsim::Result<()> {
    let h = TimeDepHamiltonian::new(
        vec![
            LocalTerm::new(Schedule::Constant(1.0), HermitianOperator::new(pauli::z())?),
            LocalTerm::new(
                Schedule::Sinusoid {
                    offset: 0.0,
                    amplitude: 2.0,
                    frequency: 3.0,
                    phase: 0.0,
                },
                HermitianOperator::new(pauli::x())?,
            ),
        ],
        (0.0, 2.0),
    )?;

    let rep = reference_propagator_report(&h, 0.0, 2.0, 1e-12)?;
    println!("levels       {:?}", rep.steps);
    let sci = |v: &[f64]| v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" ");
    println!("raw diffs    {}", sci(&rep.raw_differences));
    println!("extrap diffs {}", sci(&rep.extrapolated_differences));
    println!("unitarity defect {:.2e}", rep.operator.unitarity_defect());

    // plain midpoint products converge at second order towards it
    for n in [50, 100, 200, 400] {
        let m = midpoint_product(&h, 0.0, 2.0, n);
        println!("midpoint n={n:<4} error {:.3e}", spectral_norm(&(m - rep.operator.matrix())));
    }
    Ok(())
}
