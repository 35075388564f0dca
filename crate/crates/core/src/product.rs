//! Time-dependent product formulas built on a lifted splitting.
//!
//! All three families sweep the windows `[t + L_{k+1}, t + R_k]`,
//! `[t + R_k, t + L_k]` produced by [`split_windows`]. The pointwise family
//! freezes each `f_k` at a window endpoint, the integrated family uses
//! `∫ f_k` over the window, and the Magnus-corrected family uses full-step
//! integrals with a commutator correction on the outermost `h_1` gates.

use crate::error::{Error, Result};
use crate::gates::{Gate, GateKind, GateSequence};
use crate::hamiltonian::TimeDepHamiltonian;
use crate::operator::{identity, CMatrix, HermitianOperator, UnitaryOperator};
use crate::quadrature::adaptive_gl;
use crate::schedule::Schedule;
use crate::splitting::{split_windows, BaseScheme, LiftedCoefficients, SplitCoefficients};

/// The sweep of a time-independent splitting over `Σ_k h_k`.
pub fn lifted_product_sequence(n_terms: usize, lifted: &LiftedCoefficients, dt: f64) -> GateSequence {
    let mut ops = Vec::with_capacity(2 * n_terms * lifted.q());
    for k in 0..lifted.q() {
        for i in 0..n_terms {
            ops.push(pw_gate(i, 0.0, lifted.c[k] * dt, 1.0));
        }
        for i in (0..n_terms).rev() {
            ops.push(pw_gate(i, 0.0, lifted.d[k] * dt, 1.0));
        }
    }
    assemble(ops, |_| true)
}

/// `(Π_k e^{-i c_1 dt h_k})(Π_rev e^{-i d_1 dt h_k}) ⋯` for time-independent terms.
pub fn lifted_product_unitary(
    terms: &[HermitianOperator],
    lifted: &LiftedCoefficients,
    dt: f64,
) -> Result<UnitaryOperator> {
    lifted_product_sequence(terms.len(), lifted, dt).unitary(terms)
}

fn pw_gate(term: usize, eval_time: f64, duration: f64, f: f64) -> Gate {
    Gate {
        term,
        kind: GateKind::Pointwise {
            eval_time,
            duration,
        },
        coeff: duration * f,
    }
}

/// Turns an operator-order list into a merged application-order sequence.
fn assemble(operator_order: Vec<Gate>, constant: impl Fn(usize) -> bool) -> GateSequence {
    let mut seq = GateSequence::new();
    for g in operator_order.into_iter().rev() {
        seq.push(g, constant(g.term));
    }
    seq
}

/// Gate sequence of one pointwise step on `[t, t + dt]`.
///
/// Within the forward sweep the first `lambda_prime` terms are evaluated at the
/// later window endpoint and the rest at the earlier one; the backward sweep
/// mirrors this.
pub fn pointwise_sequence(
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    coeffs: &SplitCoefficients,
    lambda_prime: usize,
) -> Result<GateSequence> {
    let n = h.n_terms();
    if lambda_prime > n {
        return Err(Error::InvalidArgument(format!(
            "lambda_prime = {lambda_prime} exceeds the number of terms {n}"
        )));
    }
    let lifted = coeffs.lift();
    let w = split_windows(&lifted, dt);
    let q = lifted.q();
    let left: Vec<f64> = w.left.iter().map(|x| t + x).collect();
    let right: Vec<f64> = w.right.iter().map(|x| t + x).collect();
    let terms = h.terms();
    let gate = |i: usize, at: f64, duration: f64| pw_gate(i, at, duration, terms[i].schedule.value(at));

    let mut ops = Vec::with_capacity(2 * n * q);
    for k in 0..q {
        let (later, earlier) = (left[k], right[k]);
        for i in 0..n {
            let at = if i < lambda_prime { later } else { earlier };
            ops.push(gate(i, at, lifted.c[k] * dt));
        }
        let (later, earlier) = (right[k], left[k + 1]);
        for i in (0..n).rev() {
            let at = if i >= lambda_prime { later } else { earlier };
            ops.push(gate(i, at, lifted.d[k] * dt));
        }
    }
    Ok(assemble(ops, |i| terms[i].schedule.is_constant()))
}

pub fn pointwise_step(
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    coeffs: &SplitCoefficients,
    lambda_prime: usize,
) -> Result<(GateSequence, UnitaryOperator)> {
    let seq = pointwise_sequence(h, t, dt, coeffs, lambda_prime)?;
    let u = seq.unitary(&h.term_operators())?;
    Ok((seq, u))
}

fn integrated(h: &TimeDepHamiltonian, i: usize, lo: f64, hi: f64) -> Result<Gate> {
    let coeff = h.terms()[i].schedule.integral(lo, hi);
    if !coeff.is_finite() {
        return Err(Error::Unsupported(format!(
            "term {i} has no usable integral on [{lo}, {hi}]"
        )));
    }
    Ok(Gate {
        term: i,
        kind: GateKind::Integrated { t_lo: lo, t_hi: hi },
        coeff,
    })
}

/// Gate sequence of one integrated-coefficient step on `[t, t + dt]`.
///
/// Every local term is `f_k(t) h_k`, so its time-ordered exponential over a
/// window is `exp(-i (∫ f_k) h_k)`.
pub fn hdr_sequence(
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    coeffs: &SplitCoefficients,
) -> Result<GateSequence> {
    let n = h.n_terms();
    let lifted = coeffs.lift();
    let w = split_windows(&lifted, dt);
    let left: Vec<f64> = w.left.iter().map(|x| t + x).collect();
    let right: Vec<f64> = w.right.iter().map(|x| t + x).collect();
    let mut ops = Vec::with_capacity(2 * n * lifted.q());
    for k in 0..lifted.q() {
        for i in 0..n {
            ops.push(integrated(h, i, right[k], left[k])?);
        }
        for i in (0..n).rev() {
            ops.push(integrated(h, i, left[k + 1], right[k])?);
        }
    }
    Ok(assemble(ops, |_| false))
}

pub fn hdr_step(
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    coeffs: &SplitCoefficients,
) -> Result<(GateSequence, UnitaryOperator)> {
    let seq = hdr_sequence(h, t, dt, coeffs)?;
    let u = seq.unitary(&h.term_operators())?;
    Ok((seq, u))
}

/// `u = (1 / 2β₂) ∫_t^{t+dt} ds₁ ∫_t^{s₁} ds₂ [f₁(s₁) f₂(s₂) − f₂(s₁) f₁(s₂)]`.
pub fn iacs_u(h: &TimeDepHamiltonian, t: f64, dt: f64) -> Result<f64> {
    if h.n_terms() != 2 {
        return Err(Error::Unsupported(format!(
            "the Magnus-corrected step needs exactly two terms, got {}",
            h.n_terms()
        )));
    }
    let (s1, s2) = (&h.terms()[0].schedule, &h.terms()[1].schedule);
    let beta2 = s2.integral(t, t + dt);
    if beta2.abs() < 1e-14 {
        return Err(Error::Singular(format!(
            "integral of f_2 over [{t}, {}] is {beta2:e}; u is undefined",
            t + dt
        )));
    }
    // roundoff in f_i(s) is relative to the schedule's size, not its value, so the
    // floor scales with (dt·max|f|)² even where β₁β₂ is far smaller
    let peak = |s: &Schedule| {
        [t, t + 0.5 * dt, t + dt].iter().map(|&x| s.value(x).abs()).fold(0.0, f64::max)
    };
    let scale = (dt * (peak(s1) + peak(s2))).powi(2).max(f64::MIN_POSITIVE);
    let inner = adaptive_gl(
        |s| s1.value(s) * s2.integral(t, s) - s2.value(s) * s1.integral(t, s),
        t,
        t + dt,
        1e-14 * scale,
    )?;
    Ok(inner / (2.0 * beta2))
}

/// Gate sequence of the Magnus-corrected two-term step with base `coeffs`:
/// `e^{-i(a_1 β₁ + u)h₁} e^{-i b_1 β₂ h₂} ⋯ e^{-i b_q β₂ h₂} e^{-i(a_{q+1} β₁ − u)h₁}`.
pub fn iacs_sequence_with(
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    coeffs: &SplitCoefficients,
) -> Result<GateSequence> {
    let u = iacs_u(h, t, dt)?;
    let (lo, hi) = (t, t + dt);
    let beta1 = h.terms()[0].schedule.integral(lo, hi);
    let beta2 = h.terms()[1].schedule.integral(lo, hi);
    let q = coeffs.q();
    let gate = |term, coeff| Gate {
        term,
        kind: GateKind::Integrated { t_lo: lo, t_hi: hi },
        coeff,
    };
    let mut ops = Vec::with_capacity(2 * q + 1);
    for k in 0..q {
        let shift = if k == 0 { u } else { 0.0 };
        ops.push(gate(0, coeffs.a[k] * beta1 + shift));
        ops.push(gate(1, coeffs.b[k] * beta2));
    }
    ops.push(gate(0, coeffs.a[q] * beta1 - u));
    let mut seq = GateSequence::new();
    for g in ops.into_iter().rev() {
        seq.push_raw(g);
    }
    Ok(seq)
}

pub fn iacs_step_with(
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    coeffs: &SplitCoefficients,
) -> Result<(GateSequence, UnitaryOperator)> {
    let seq = iacs_sequence_with(h, t, dt, coeffs)?;
    let u = seq.unitary(&h.term_operators())?;
    Ok((seq, u))
}

/// The seven-gate Magnus-corrected step on the Forest-Ruth-Suzuki base.
pub fn iacs_step(h: &TimeDepHamiltonian, t: f64, dt: f64) -> Result<(GateSequence, UnitaryOperator)> {
    iacs_step_with(h, t, dt, &BaseScheme::Frs.coefficients())
}

/// Result of composing `N` steps over the Hamiltonian's interval.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub operator: CMatrix,
    pub gate_count: usize,
}

/// Grid point `j` of a uniform `n`-step grid on the interval.
pub fn grid_time(h: &TimeDepHamiltonian, n_steps: usize, j: usize) -> f64 {
    let (a, b) = h.interval();
    if j == n_steps {
        b
    } else {
        a + (b - a) * j as f64 / n_steps as f64
    }
}

/// Multiplies `step_fn(h, t_j, t_{j+1} − t_j)` over a uniform grid, latest step leftmost.
pub fn compose_evolution<F>(h: &TimeDepHamiltonian, n_steps: usize, mut step_fn: F) -> Result<Evolution>
where
    F: FnMut(&TimeDepHamiltonian, f64, f64) -> Result<(CMatrix, usize)>,
{
    if n_steps == 0 {
        return Err(Error::InvalidArgument("need at least one step".into()));
    }
    let mut op = identity(h.dim());
    let mut gates = 0;
    for j in 0..n_steps {
        let t0 = grid_time(h, n_steps, j);
        let t1 = grid_time(h, n_steps, j + 1);
        let (m, g) = step_fn(h, t0, t1 - t0)?;
        op = m * op;
        gates += g;
    }
    Ok(Evolution {
        operator: op,
        gate_count: gates,
    })
}

/// Closed-form gate count of one pointwise step per the merging analysis.
pub fn expected_pointwise_count(n_terms: usize, q: usize, lambda_prime: usize) -> usize {
    let raw = 2 * n_terms * q;
    if lambda_prime == 0 {
        raw - q
    } else if lambda_prime == n_terms {
        raw - (q - 1)
    } else {
        raw - (2 * q - 1)
    }
}

/// Gate count of one integrated step, and of any step on time-independent terms.
pub fn expected_merged_count(n_terms: usize, q: usize) -> usize {
    2 * n_terms * q - (2 * q - 1)
}
