//! Reduced system state of the clock-augmented evolution with a Gaussian clock
//! of width `ω`, and extrapolation of observables in `ω`.
//!
//! With `|G(s)|²` the normal density of standard deviation `ω`,
//! `ρ_ω(t) = E_σ[ U(t+σ, t_i+σ) |ψ₀⟩⟨ψ₀| U(t+σ, t_i+σ)† ]`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::TimeDepHamiltonian;
use crate::mpf::MpfSpec;
use crate::operator::{trace_distance, CMatrix, DensityOperator, HermitianOperator, QuantumState};
use crate::propagator::{propagator_between, reference_propagator};
use crate::quadrature::gauss_hermite_normal;

pub const DEFAULT_NODES: usize = 33;
pub const DEFAULT_ACCEPTANCE_TOL: f64 = 1e-9;
const MAX_NODES: usize = 257;
const LONG_TOL: f64 = 1e-12;
const SHORT_TOL: f64 = 1e-12;

/// How schedules are continued outside the Hamiltonian's interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClockExtension {
    /// Schedules keep their own formulas.
    #[default]
    Analytic,
    /// Each `f_k` is held at its endpoint value.
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianClock {
    pub omega: f64,
    /// Initial Gauss-Hermite node count; doubled until two successive
    /// estimates agree to `acceptance_tol` in trace norm.
    pub nodes: usize,
    pub acceptance_tol: f64,
    pub extension: ClockExtension,
}

impl GaussianClock {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidArgument(format!("clock width {omega} must be positive")));
        }
        Ok(Self {
            omega,
            nodes: DEFAULT_NODES,
            acceptance_tol: DEFAULT_ACCEPTANCE_TOL,
            extension: ClockExtension::default(),
        })
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_extension(mut self, extension: ClockExtension) -> Self {
        self.extension = extension;
        self
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        let mut c = Self::new(omega)?;
        c.nodes = self.nodes;
        c.acceptance_tol = self.acceptance_tol;
        c.extension = self.extension;
        Ok(c)
    }

    /// Clock offsets `σ_i` and weights for `n` nodes; the weights sum to one.
    pub fn quadrature(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        Ok(gauss_hermite_normal(n)?
            .into_iter()
            .map(|(x, w)| (self.omega * x, w))
            .collect())
    }

    /// Largest `|σ_i| / ω` of the initial rule.
    pub fn half_width(&self) -> Result<f64> {
        Ok(gauss_hermite_normal(self.nodes)?
            .iter()
            .fold(0.0, |m, p| m.max(p.0.abs())))
    }
}

fn extended(h: &TimeDepHamiltonian, ext: ClockExtension) -> TimeDepHamiltonian {
    match ext {
        ClockExtension::Analytic => h.clone(),
        ClockExtension::Constant => h.with_constant_extension(),
    }
}

/// `U(to, from)`, split at the interval endpoints so a constant continuation
/// never puts a kink inside a single reference solve.
fn propagator_split(h: &TimeDepHamiltonian, to: f64, from: f64) -> Result<CMatrix> {
    let (lo, hi) = if to >= from { (from, to) } else { (to, from) };
    let (a, b) = h.interval();
    let mut points = vec![lo];
    for x in [a, b] {
        if x > lo && x < hi {
            points.push(x);
        }
    }
    points.push(hi);
    let mut u = crate::operator::identity(h.dim());
    for w in points.windows(2) {
        u = propagator_between(h, w[1], w[0], SHORT_TOL)?.into_matrix() * u;
    }
    Ok(if to >= from { u } else { u.adjoint() })
}

fn rho_with_nodes(
    h: &TimeDepHamiltonian,
    t: f64,
    t0: f64,
    middle: &CMatrix,
    psi0: &QuantumState,
    rule: &[(f64, f64)],
) -> Result<DensityOperator> {
    // U(t+σ, t0+σ) = U(t+σ, t) U(t, t0) U(t0, t0+σ)
    let states = rule
        .par_iter()
        .map(|&(sigma, _)| {
            let head = propagator_split(h, t0, t0 + sigma)?;
            let tail = propagator_split(h, t + sigma, t)?;
            Ok(tail * (middle * (head * psi0.amplitudes())))
        })
        .collect::<Result<Vec<_>>>()?;
    let dim = h.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for (v, &(_, w)) in states.iter().zip(rule) {
        acc += (v * v.adjoint()).scale(w);
    }
    let acc = (&acc + acc.adjoint()).scale(0.5);
    DensityOperator::new(acc)
}

/// `ρ_ω(t)` by Gauss-Hermite quadrature over the clock offset.
pub fn rho_omega(
    h: &TimeDepHamiltonian,
    t: f64,
    clock: &GaussianClock,
    psi0: &QuantumState,
) -> Result<DensityOperator> {
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: psi0.dim(),
            right: h.dim(),
        });
    }
    let (t0, t1) = h.interval();
    if !(t >= t0 && t <= t1) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [{t0}, {t1}]")));
    }
    let h = extended(h, clock.extension);
    let middle = reference_propagator(&h, t0, t, LONG_TOL)?.into_matrix();
    let mut n = clock.nodes.max(2);
    let mut prev = rho_with_nodes(&h, t, t0, &middle, psi0, &clock.quadrature(n)?)?;
    let mut last_change = f64::INFINITY;
    while n < MAX_NODES {
        // odd counts keep the σ = 0 node
        n = 2 * n - (n % 2);
        let next = rho_with_nodes(&h, t, t0, &middle, psi0, &clock.quadrature(n)?)?;
        let change = trace_distance(&prev, &next)?;
        if change < clock.acceptance_tol {
            return Ok(next);
        }
        last_change = change;
        prev = next;
    }
    Err(Error::Quadrature(format!(
        "clock average changed by {last_change:e} when doubling to {n} nodes"
    )))
}

/// `Σ_j α_j tr(O ρ_{ω/k_j}(t))`.
pub fn richardson_observable(
    h: &TimeDepHamiltonian,
    t: f64,
    o: &HermitianOperator,
    omega: f64,
    spec: &MpfSpec,
    clock: &GaussianClock,
    psi0: &QuantumState,
) -> Result<f64> {
    if o.spectral_norm() > 1.0 + 1e-12 {
        return Err(Error::Precondition(format!(
            "observable norm {} exceeds 1",
            o.spectral_norm()
        )));
    }
    let mut sum = 0.0;
    for (&k, &a) in spec.k.iter().zip(&spec.alpha) {
        let c = clock.with_omega(omega / k as f64)?;
        sum += a * rho_omega(h, t, &c, psi0)?.expectation(o)?;
    }
    Ok(sum)
}

/// `ω = c / (T ‖h₂‖)`.
pub fn omega_budget(time_scale: f64, h2_norm: f64, epsilon: f64, c: f64) -> Result<f64> {
    for (name, v) in [("T", time_scale), ("‖h₂‖", h2_norm), ("ε", epsilon), ("c", c)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
        }
    }
    Ok(c / (time_scale * h2_norm))
}
