//! Multi-product formulas on top of the second-order midpoint and integrated steps.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gates::GateSequence;
use crate::hamiltonian::TimeDepHamiltonian;
use crate::operator::CMatrix;
use crate::product::{hdr_sequence, pointwise_sequence};
use crate::splitting::{BaseScheme, SplitCoefficients};

/// Step counts `k_j` with weights `α_j` cancelling the `k^{-2ℓ}` error terms.
#[derive(Debug, Clone, PartialEq)]
pub struct MpfSpec {
    pub k: Vec<usize>,
    pub alpha: Vec<f64>,
    /// Number of cancelled orders plus one; the local error is `O(dt^{2m+1})`.
    pub m: usize,
    /// Max-norm residual of the linear system.
    pub residual: f64,
    /// `Σ |α_j|`.
    pub kappa: f64,
}

/// Solves `Σ_j α_j k_j^{-2ℓ} = δ_{ℓ0}` for `ℓ = 0..M−1`.
pub fn mpf_coefficients(k: &[usize]) -> Result<MpfSpec> {
    let m = k.len();
    if m == 0 {
        return Err(Error::InvalidArgument("empty k sequence".into()));
    }
    if k.contains(&0) {
        return Err(Error::InvalidArgument("k_j must be positive".into()));
    }
    for i in 0..m {
        for j in i + 1..m {
            if k[i] == k[j] {
                return Err(Error::Singular(format!("duplicate k_j = {}", k[i])));
            }
        }
    }
    if k.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("k must be strictly increasing".into()));
    }
    let x: Vec<f64> = k.iter().map(|&kj| (kj as f64).powi(-2)).collect();
    let a = DMatrix::from_fn(m, m, |l, j| x[j].powi(l as i32));
    let mut rhs = DVector::zeros(m);
    rhs[0] = 1.0;
    let alpha = a
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("Vandermonde system is singular".into()))?;
    let residual = (&a * &alpha - &rhs).amax();
    let alpha: Vec<f64> = alpha.iter().copied().collect();
    let kappa = alpha.iter().map(|a| a.abs()).sum();
    Ok(MpfSpec {
        k: k.to_vec(),
        alpha,
        m,
        residual,
        kappa,
    })
}

/// `α_j = Π_{i≠j} k_j² / (k_j² − k_i²)`.
pub fn mpf_coefficients_closed_form(k: &[usize]) -> Vec<f64> {
    k.iter()
        .enumerate()
        .map(|(j, &kj)| {
            let kj2 = (kj * kj) as f64;
            k.iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &ki)| kj2 / (kj2 - (ki * ki) as f64))
                .product()
        })
        .collect()
}

/// A linear combination of branch operators with its primitive-gate count.
#[derive(Debug, Clone)]
pub struct MpfStep {
    pub operator: CMatrix,
    /// Exponentials summed over all branches.
    pub gate_count: usize,
}

fn combine(
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    spec: &MpfSpec,
    sub: impl Fn(f64, f64, &SplitCoefficients) -> Result<GateSequence>,
) -> Result<MpfStep> {
    let strang = BaseScheme::Strang.coefficients();
    let ops = h.term_operators();
    let dim = h.dim();
    let mut total = CMatrix::zeros(dim, dim);
    let mut gates = 0;
    for (&kj, &aj) in spec.k.iter().zip(&spec.alpha) {
        let grid = |l: usize| if l == kj { t + dt } else { t + dt * l as f64 / kj as f64 };
        let mut branch = GateSequence::new();
        for l in 0..kj {
            let (s0, s1) = (grid(l), grid(l + 1));
            for g in sub(s0, s1 - s0, &strang)?.gates() {
                branch.push(*g, h.terms()[g.term].schedule.is_constant());
            }
        }
        gates += branch.count();
        total += branch.unitary(&ops)?.into_matrix() * nalgebra::Complex::new(aj, 0.0);
    }
    Ok(MpfStep {
        operator: total,
        gate_count: gates,
    })
}

/// `Σ_j α_j Π_ℓ U₂(t + (ℓ+1)dt/k_j, t + ℓ dt/k_j)` with the midpoint `U₂`.
pub fn mpf_step_pointwise(h: &TimeDepHamiltonian, t: f64, dt: f64, spec: &MpfSpec) -> Result<MpfStep> {
    combine(h, t, dt, spec, |s, d, c| pointwise_sequence(h, s, d, c, 0))
}

/// As [`mpf_step_pointwise`] with the integrated second-order step.
pub fn mpf_step_hdr(h: &TimeDepHamiltonian, t: f64, dt: f64, spec: &MpfSpec) -> Result<MpfStep> {
    combine(h, t, dt, spec, |s, d, c| hdr_sequence(h, s, d, c))
}
