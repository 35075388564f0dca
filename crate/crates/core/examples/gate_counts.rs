//! Merged gate sequences of one step and the closed-form counts they follow.

use tdsim::bench::studies::audit_gate_counts;
use tdsim::problems::pauli;
use tdsim::product::{hdr_sequence, pointwise_sequence};
use tdsim::splitting::split_windows;
use tdsim::{BaseScheme, HermitianOperator, LocalTerm, Schedule, TimeDepHamiltonian};

fn main() -> tdsim::Result<()> {
    let ramp = Schedule::Affine { offset: 1.0, slope: 0.5 };
    let h = TimeDepHamiltonian::new(
        vec![
            LocalTerm::new(ramp.clone(), HermitianOperator::new(pauli::x())?),
            LocalTerm::new(ramp, HermitianOperator::new(pauli::z())?),
        ],
        (0.0, 1.0),
    )?;

    let c = BaseScheme::Frs.coefficients();
    let lifted = c.lift();
    let w = split_windows(&lifted, 0.1);
    println!("lifted c {:.4?}", lifted.c);
    println!("lifted d {:.4?}", lifted.d);
    println!("windows L {:.4?}", w.left);
    println!("windows R {:.4?}", w.right);

    for lp in 0..=2 {
        let s = pointwise_sequence(&h, 0.0, 0.1, &c, lp)?;
        println!("pointwise L'={lp}: {} gates", s.count());
    }
    let s = hdr_sequence(&h, 0.0, 0.1, &c)?;
    println!("integrated: {} gates", s.count());
    for g in s.gates() {
        println!("  term {} coeff {:+.5}", g.term, g.coeff);
    }

    let rows = audit_gate_counts()?;
    let bad = rows.iter().filter(|r| !r.matches()).count();
    println!("audit: {} configurations, {bad} mismatches", rows.len());
    Ok(())
}
