//! Time-dependent qDrift channels, evaluated either as exact expectations over
//! the sampling measure or by Monte Carlo over sampled gate sequences.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::TimeDepHamiltonian;
use crate::operator::{commutator, trace_distance, trace_norm, CMatrix, DensityOperator, QuantumState};
use crate::product::grid_time;
use crate::quadrature::{gauss_legendre, monotone_root};

/// Default Gauss-Legendre node count for the continuous part of a measure.
pub const DEFAULT_QUAD_NODES: usize = 32;
const NORMALIZATION_NODES: usize = 64;
const NORMALIZATION_TOL: f64 = 1e-8;
const TAU_TOL: f64 = 1e-12;

/// Importance weights `λ_k` over the local terms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    lambda: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() || lambda.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "weights must be positive, got {lambda:?}"
            )));
        }
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { lambda })
    }

    pub fn uniform(n_terms: usize) -> Result<Self> {
        Self::new(vec![1.0 / n_terms as f64; n_terms])
    }

    /// `λ_k ∝ |∫_t^{t+dt} f_k|`.
    pub fn proportional(h: &TimeDepHamiltonian, t: f64, dt: f64) -> Result<Self> {
        let w: Vec<f64> = h
            .terms()
            .iter()
            .map(|term| term.schedule.integral(t, t + dt).abs())
            .collect();
        let sum: f64 = w.iter().sum();
        if !(sum > 0.0) || w.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "integrated weights {w:?} on [{t}, {}] are not all positive",
                t + dt
            )));
        }
        let mut lambda: Vec<f64> = w.iter().map(|x| x / sum).collect();
        // absorb rounding so the sum check holds exactly
        let last = lambda.len() - 1;
        lambda[last] = 1.0 - lambda[..last].iter().sum::<f64>();
        Self::new(lambda)
    }

    pub fn weights(&self) -> &[f64] {
        &self.lambda
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (k, &l) in self.lambda.iter().enumerate() {
            acc += l;
            if u < acc {
                return k;
            }
        }
        self.lambda.len() - 1
    }
}

type Density = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// A density `μ(k, r)` on `{0..Λ−1} × [0, 1]`.
#[derive(Clone)]
pub struct HybridMeasure {
    n_terms: usize,
    density: Density,
    marginals: Vec<f64>,
}

impl fmt::Debug for HybridMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HybridMeasure")
            .field("n_terms", &self.n_terms)
            .field("marginals", &self.marginals)
            .finish()
    }
}

impl HybridMeasure {
    pub fn new(n_terms: usize, density: impl Fn(usize, f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::from_arc(n_terms, Arc::new(density))
    }

    fn from_arc(n_terms: usize, density: Density) -> Result<Self> {
        if n_terms == 0 {
            return Err(Error::InvalidArgument("measure over zero terms".into()));
        }
        let rule = gauss_legendre(NORMALIZATION_NODES, 0.0, 1.0)?;
        let mut marginals = Vec::with_capacity(n_terms);
        for k in 0..n_terms {
            let mut m = 0.0;
            for &(r, w) in &rule {
                let d = density(k, r);
                if !(d > 0.0) || !d.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "density must be positive, got μ({k}, {r}) = {d}"
                    )));
                }
                m += w * d;
            }
            marginals.push(m);
        }
        let total: f64 = marginals.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidArgument(format!("measure has total mass {total}")));
        }
        Ok(Self {
            n_terms,
            density,
            marginals,
        })
    }

    /// `μ(k, r) = λ_k`.
    pub fn from_discrete(lambda: &DiscreteMeasure) -> Self {
        let w = lambda.weights().to_vec();
        let marginals = w.clone();
        Self {
            n_terms: w.len(),
            density: Arc::new(move |k, _| w[k]),
            marginals,
        }
    }

    pub fn density(&self, k: usize, r: f64) -> f64 {
        (self.density)(k, r)
    }

    /// `∫_0^1 μ(k, r) dr` for each `k`.
    pub fn marginals(&self) -> &[f64] {
        &self.marginals
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }
}

/// Channel output together with the leading-order bias bound `C dt² / 2`.
#[derive(Debug, Clone)]
pub struct ChannelResult {
    pub output: DensityOperator,
    pub bias_bound: f64,
}

fn check_terms(h: &TimeDepHamiltonian, rho: &DensityOperator, n: usize) -> Result<()> {
    if n != h.n_terms() {
        return Err(Error::InvalidArgument(format!(
            "measure has {n} terms, Hamiltonian has {}",
            h.n_terms()
        )));
    }
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: h.dim(),
        });
    }
    Ok(())
}

/// `Σ_i p_i e^{−iθ_i h_{k_i}} ρ e^{iθ_i h_{k_i}}` with the weights renormalized
/// so the discretized measure is an exact mixture.
fn mixture(h: &TimeDepHamiltonian, rho: &CMatrix, parts: &[(usize, f64, f64)]) -> DensityOperator {
    let dim = h.dim();
    let total: f64 = parts.iter().map(|p| p.1).sum();
    let mut out = CMatrix::zeros(dim, dim);
    for &(k, p, theta) in parts {
        let v = h.terms()[k].operator.expm_matrix(theta);
        out += (&v * rho * v.adjoint()) * crate::operator::C64::new(p / total, 0.0);
    }
    let sym = (&out + out.adjoint()).scale(0.5);
    DensityOperator::from_matrix_unchecked(sym)
}

fn nested_norm(h: &TimeDepHamiltonian, rho: &CMatrix, k1: usize, k2: usize) -> f64 {
    let a = h.terms()[k1].operator.matrix();
    let b = h.terms()[k2].operator.matrix();
    trace_norm(&commutator(a, &commutator(b, rho)))
}

/// `Σ_k λ_k e^{−i(∫f_k/λ_k) h_k} ρ e^{+i(∫f_k/λ_k) h_k}`.
pub fn channel_v1(
    rho: &DensityOperator,
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    lambda: &DiscreteMeasure,
) -> Result<ChannelResult> {
    check_terms(h, rho, lambda.len())?;
    let parts: Vec<_> = h
        .terms()
        .iter()
        .zip(lambda.weights())
        .enumerate()
        .map(|(k, (term, &l))| (k, l, term.schedule.integral(t, t + dt) / l))
        .collect();
    Ok(ChannelResult {
        output: mixture(h, rho.matrix(), &parts),
        bias_bound: bias_constant_v1(rho, h, t, dt, lambda)? * dt * dt / 2.0,
    })
}

/// `C = Σ_{k1,k2} |λ_{k2} − δ| |f_{k1} f_{k2}| / λ_{k2} ‖[h_{k1},[h_{k2},ρ]]‖₁`
/// with schedules at `t + dt`.
pub fn bias_constant_v1(
    rho: &DensityOperator,
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    lambda: &DiscreteMeasure,
) -> Result<f64> {
    check_terms(h, rho, lambda.len())?;
    let f: Vec<f64> = h.terms().iter().map(|x| x.schedule.value(t + dt)).collect();
    let l = lambda.weights();
    let n = h.n_terms();
    let mut c = 0.0;
    for k1 in 0..n {
        for k2 in 0..n {
            let delta = if k1 == k2 { 1.0 } else { 0.0 };
            let w = (l[k2] - delta).abs() * (f[k1] * f[k2]).abs() / l[k2];
            if w != 0.0 {
                c += w * nested_norm(h, rho.matrix(), k1, k2);
            }
        }
    }
    Ok(c)
}

/// Bias constant of the hybrid-measure channel.
///
/// Off-diagonal pairs carry weight `|f_{k1} f_{k2}|`; the diagonal carries
/// `f_k² |1 − ∫_0^1 dr / μ(k, r)|`. With `μ(k, r) = λ_k` this is
/// [`bias_constant_v1`].
pub fn bias_constant_v2(
    rho: &DensityOperator,
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    mu: &HybridMeasure,
    quad_nodes: usize,
) -> Result<f64> {
    check_terms(h, rho, mu.n_terms())?;
    let rule = gauss_legendre(quad_nodes, 0.0, 1.0)?;
    let f: Vec<f64> = h.terms().iter().map(|x| x.schedule.value(t + dt)).collect();
    let n = h.n_terms();
    let mut c = 0.0;
    for k1 in 0..n {
        for k2 in 0..n {
            let w = if k1 == k2 {
                let inv: f64 = rule.iter().map(|&(r, w)| w / mu.density(k1, r)).sum();
                f[k1] * f[k1] * (1.0 - inv).abs()
            } else {
                (f[k1] * f[k2]).abs()
            };
            if w != 0.0 {
                c += w * nested_norm(h, rho.matrix(), k1, k2);
            }
        }
    }
    Ok(c)
}

/// `Σ_k ∫_0^1 dr μ(k,r) e^{−i(∫f_k/μ(k,r)) h_k} ρ e^{+i(∫f_k/μ(k,r)) h_k}` by
/// Gauss-Legendre in `r`.
pub fn channel_v2(
    rho: &DensityOperator,
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    mu: &HybridMeasure,
    quad_nodes: usize,
) -> Result<ChannelResult> {
    check_terms(h, rho, mu.n_terms())?;
    let rule = gauss_legendre(quad_nodes, 0.0, 1.0)?;
    let mut parts = Vec::with_capacity(h.n_terms() * quad_nodes);
    for (k, term) in h.terms().iter().enumerate() {
        let theta = term.schedule.integral(t, t + dt);
        for &(r, w) in &rule {
            let m = mu.density(k, r);
            parts.push((k, w * m, theta / m));
        }
    }
    Ok(ChannelResult {
        output: mixture(h, rho.matrix(), &parts),
        bias_bound: bias_constant_v2(rho, h, t, dt, mu, quad_nodes)? * dt * dt / 2.0,
    })
}

/// `Σ_k ∫_0^1 dτ q(k,τ) e^{−i dt f_k(t+τdt) h_k / q(k,τ)} ρ e^{+i…}`.
pub fn continuous_qdrift_channel(
    rho: &DensityOperator,
    h: &TimeDepHamiltonian,
    t: f64,
    dt: f64,
    q: &HybridMeasure,
    quad_nodes: usize,
) -> Result<ChannelResult> {
    check_terms(h, rho, q.n_terms())?;
    let rule = gauss_legendre(quad_nodes, 0.0, 1.0)?;
    let mut parts = Vec::with_capacity(h.n_terms() * quad_nodes);
    for (k, term) in h.terms().iter().enumerate() {
        for &(tau, w) in &rule {
            let m = q.density(k, tau);
            parts.push((k, w * m, dt * term.schedule.value(t + tau * dt) / m));
        }
    }
    Ok(ChannelResult {
        output: mixture(h, rho.matrix(), &parts),
        bias_bound: bias_constant_v2(rho, h, t, dt, q, quad_nodes)? * dt * dt / 2.0,
    })
}

/// Evaluates `channel(n)` with `n = start, 2 start, …` until two successive
/// outputs differ by less than `tol` in trace norm.
pub fn with_node_doubling(
    start: usize,
    tol: f64,
    max_nodes: usize,
    mut channel: impl FnMut(usize) -> Result<ChannelResult>,
) -> Result<ChannelResult> {
    let mut n = start.max(2);
    let mut prev = channel(n)?;
    let mut last_change = f64::INFINITY;
    while 2 * n <= max_nodes {
        n *= 2;
        let next = channel(n)?;
        let change = trace_distance(&prev.output, &next.output)?;
        if change < tol {
            return Ok(next);
        }
        last_change = change;
        prev = next;
    }
    Err(Error::Quadrature(format!(
        "channel changed by {last_change:e} when doubling to {n} nodes"
    )))
}

/// `F_k(r) = ∫_0^r f_k(t + dt s) ds`.
fn big_f(h: &TimeDepHamiltonian, k: usize, t: f64, dt: f64, r: f64) -> f64 {
    h.terms()[k].schedule.integral(t, t + dt * r) / dt
}

/// `τ_k(r) = F_k^{-1}(F_k(1) r)` by safeguarded Newton on the increasing `F_k`.
pub fn tau_k(h: &TimeDepHamiltonian, k: usize, t: f64, dt: f64, r: f64) -> Result<f64> {
    let s = &h.terms()[k].schedule;
    let total = big_f(h, k, t, dt, 1.0);
    monotone_root(
        |x| big_f(h, k, t, dt, x),
        |x| s.value(t + dt * x),
        total * r,
        0.0,
        1.0,
        TAU_TOL,
    )
}

/// The measure `q` with `q(k, τ_k(r)) = μ(k, r) f_k(t + dt τ_k(r)) / F_k(1)`,
/// under which [`continuous_qdrift_channel`] reproduces [`channel_v2`].
///
/// `q` is evaluated through the forward map `r = F_k(τ) / F_k(1)`; [`tau_k`]
/// is its inverse.
pub fn measure_transform(mu: &HybridMeasure, h: &TimeDepHamiltonian, t: f64, dt: f64) -> Result<HybridMeasure> {
    if mu.n_terms() != h.n_terms() {
        return Err(Error::InvalidArgument("measure and Hamiltonian term counts differ".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::Precondition(format!("step {dt} must be positive")));
    }
    for (k, term) in h.terms().iter().enumerate() {
        if !term.schedule.positive_on(t, t + dt) {
            return Err(Error::Precondition(format!(
                "schedule of term {k} is not positive on [{t}, {}]",
                t + dt
            )));
        }
    }
    let schedules: Vec<_> = h.terms().iter().map(|x| x.schedule.clone()).collect();
    let totals: Vec<f64> = (0..h.n_terms()).map(|k| big_f(h, k, t, dt, 1.0)).collect();
    let mu = mu.clone();
    let density = move |k: usize, tau: f64| {
        let s = &schedules[k];
        let r = (s.integral(t, t + dt * tau) / dt / totals[k]).clamp(0.0, 1.0);
        mu.density(k, r) * s.value(t + dt * tau) / totals[k]
    };
    HybridMeasure::from_arc(h.n_terms(), Arc::new(density))
}

/// How trajectories pick their per-step importance weights.
#[derive(Debug, Clone, PartialEq)]
pub enum StepMeasure {
    Fixed(DiscreteMeasure),
    /// [`DiscreteMeasure::proportional`] on each step.
    Proportional,
}

impl StepMeasure {
    fn at(&self, h: &TimeDepHamiltonian, t: f64, dt: f64) -> Result<DiscreteMeasure> {
        match self {
            StepMeasure::Fixed(m) => Ok(m.clone()),
            StepMeasure::Proportional => DiscreteMeasure::proportional(h, t, dt),
        }
    }
}

/// `channel_v1` applied on each step of a uniform `n_steps` grid over the interval.
pub fn iterate_channel_v1(
    rho: &DensityOperator,
    h: &TimeDepHamiltonian,
    measure: &StepMeasure,
    n_steps: usize,
) -> Result<DensityOperator> {
    let mut out = rho.clone();
    for j in 0..n_steps {
        let t0 = grid_time(h, n_steps, j);
        let dt = grid_time(h, n_steps, j + 1) - t0;
        let lambda = measure.at(h, t0, dt)?;
        out = channel_v1(&out, h, t0, dt, &lambda)?.output;
    }
    Ok(out)
}

/// Monte Carlo estimate of [`iterate_channel_v1`] applied to `|ψ⟩⟨ψ|`.
///
/// Trajectory `i` draws from a ChaCha stream keyed by `(seed, i)` and the
/// outer products are summed in trajectory order, so the result does not
/// depend on thread scheduling.
pub fn sample_trajectories(
    psi: &QuantumState,
    h: &TimeDepHamiltonian,
    measure: &StepMeasure,
    n_steps: usize,
    n_samples: usize,
    seed: u64,
) -> Result<DensityOperator> {
    if n_samples == 0 || n_steps == 0 {
        return Err(Error::InvalidArgument("need at least one sample and one step".into()));
    }
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: h.dim(),
        });
    }
    let mut steps = Vec::with_capacity(n_steps);
    for j in 0..n_steps {
        let t0 = grid_time(h, n_steps, j);
        let dt = grid_time(h, n_steps, j + 1) - t0;
        let lambda = measure.at(h, t0, dt)?;
        let theta: Vec<f64> = h
            .terms()
            .iter()
            .zip(lambda.weights())
            .map(|(term, &l)| term.schedule.integral(t0, t0 + dt) / l)
            .collect();
        steps.push((lambda, theta));
    }
    let finals: Vec<_> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut v = psi.amplitudes().clone();
            for (lambda, theta) in &steps {
                let k = lambda.sample(&mut rng);
                v = h.terms()[k].operator.expm_apply(theta[k], &v);
            }
            v
        })
        .collect();
    let dim = h.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for v in &finals {
        acc += v * v.adjoint();
    }
    let acc = acc.unscale(n_samples as f64);
    Ok(DensityOperator::from_matrix_unchecked((&acc + acc.adjoint()).scale(0.5)))
}
