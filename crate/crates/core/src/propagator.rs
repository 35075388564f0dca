//! Ground-truth time-ordered propagator.
//!
//! The exponential midpoint rule `Π_j exp(-i δ H(t0 + (j + 1/2) δ))` is
//! symmetric, so its global error expands in even powers of `δ`. Successive
//! step halvings are combined in a Romberg table, and the result is accepted
//! once two consecutive diagonal entries agree to `tol` in spectral norm.

use crate::error::{Error, Result};
use crate::hamiltonian::TimeDepHamiltonian;
use crate::operator::{identity, spectral_norm, CMatrix, HermitianOperator, UnitaryOperator};

const MAX_LEVELS: usize = 18;
const MAX_STEPS: usize = 1 << 22;
const INITIAL_PHASE_PER_STEP: f64 = 0.5;
// deeper Romberg columns mostly amplify rounding
const MAX_COLUMNS: usize = 5;

/// Convergence record of one reference computation.
#[derive(Debug, Clone)]
pub struct ReferenceReport {
    pub operator: UnitaryOperator,
    /// Midpoint step counts used at each level.
    pub steps: Vec<usize>,
    /// `‖M(2n) - M(n)‖` of the raw midpoint products.
    pub raw_differences: Vec<f64>,
    /// Differences between the most extrapolated entries of successive rows.
    pub extrapolated_differences: Vec<f64>,
}

/// Time-ordered `U(t1, t0)` to spectral-norm tolerance `tol`.
pub fn reference_propagator(
    h: &TimeDepHamiltonian,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<UnitaryOperator> {
    reference_propagator_report(h, t0, t1, tol).map(|r| r.operator)
}

/// `U(to, from)` for either time order; backward propagation uses `U(from, to)†`.
pub fn propagator_between(
    h: &TimeDepHamiltonian,
    to: f64,
    from: f64,
    tol: f64,
) -> Result<UnitaryOperator> {
    if to >= from {
        reference_propagator(h, from, to, tol)
    } else {
        Ok(reference_propagator(h, to, from, tol)?.adjoint())
    }
}

/// The midpoint product with `n` uniform steps on `[t0, t1]`.
pub fn midpoint_product(h: &TimeDepHamiltonian, t0: f64, t1: f64, n: usize) -> CMatrix {
    let dt = (t1 - t0) / n as f64;
    let mut u = identity(h.dim());
    for j in 0..n {
        let mid = t0 + (j as f64 + 0.5) * dt;
        let g = HermitianOperator::from_hermitian_unchecked(h.evaluate_matrix(mid));
        u = g.expm_matrix(dt) * u;
    }
    u
}

fn initial_steps(h: &TimeDepHamiltonian, t0: f64, t1: f64) -> usize {
    let samples = 17;
    let hmax = (0..samples)
        .map(|i| h.norm_bound(t0 + (t1 - t0) * i as f64 / (samples - 1) as f64))
        .fold(0.0, f64::max);
    (((t1 - t0) * hmax / INITIAL_PHASE_PER_STEP).ceil() as usize).max(1)
}

pub fn reference_propagator_report(
    h: &TimeDepHamiltonian,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<ReferenceReport> {
    if !(t0 <= t1) {
        return Err(Error::InvalidArgument(format!(
            "reference propagator needs t0 <= t1, got [{t0}, {t1}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if t0 == t1 {
        return Ok(ReferenceReport {
            operator: UnitaryOperator::identity(h.dim()),
            steps: vec![0],
            raw_differences: vec![],
            extrapolated_differences: vec![],
        });
    }
    if h.is_time_independent() {
        let g = h.evaluate(0.5 * (t0 + t1));
        return Ok(ReferenceReport {
            operator: UnitaryOperator::from_matrix_unchecked(g.expm_matrix(t1 - t0)),
            steps: vec![1],
            raw_differences: vec![],
            extrapolated_differences: vec![],
        });
    }

    let mut n = initial_steps(h, t0, t1);
    let mut steps = vec![n];
    let mut rows: Vec<Vec<CMatrix>> = vec![vec![midpoint_product(h, t0, t1, n)]];
    let mut raw = Vec::new();
    let mut extrapolated = Vec::new();

    for level in 1..MAX_LEVELS {
        n *= 2;
        if n > MAX_STEPS {
            break;
        }
        steps.push(n);
        let m = midpoint_product(h, t0, t1, n);
        raw.push(spectral_norm(&(&m - &rows[level - 1][0])));
        let mut row = vec![m];
        let width = level.min(MAX_COLUMNS);
        for j in 1..=width {
            let factor = 4f64.powi(j as i32) - 1.0;
            let next = &row[j - 1] + (&row[j - 1] - &rows[level - 1][j - 1]).unscale(factor);
            row.push(next);
        }
        let prev = rows[level - 1].last().expect("nonempty row");
        let diff = spectral_norm(&(&row[width] - prev));
        extrapolated.push(diff);
        rows.push(row);
        // rounding floor reached: further halving only accumulates error
        let k = extrapolated.len();
        if diff >= tol && k >= 4 && diff >= extrapolated[k - 2] && extrapolated[k - 2] >= extrapolated[k - 3] {
            break;
        }
        if diff < tol {
            let best = rows.pop().and_then(|mut r| r.pop()).expect("nonempty row");
            return Ok(ReferenceReport {
                operator: UnitaryOperator::from_matrix_unchecked(best),
                steps,
                raw_differences: raw,
                extrapolated_differences: extrapolated,
            });
        }
    }

    let k = extrapolated.len();
    Err(Error::NoConvergence {
        steps: *steps.last().unwrap_or(&0),
        previous: if k >= 2 { extrapolated[k - 2] } else { f64::NAN },
        last: extrapolated.last().copied().unwrap_or(f64::NAN),
    })
}
