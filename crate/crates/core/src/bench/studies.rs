//! Fixed experiments behind the CLI subcommands: order sweeps, the gate
//! audit, qDrift bias and sampling sweeps, and the clock-width sweep.

use serde::Serialize;

use super::config::{BenchConfig, Checks, Family, Metric, OutputSpec, SchemeSpec, SlopeCheck};
use crate::analog::{richardson_observable, rho_omega, GaussianClock};
use crate::error::Result;
use crate::hamiltonian::{LocalTerm, TimeDepHamiltonian};
use crate::mpf::mpf_coefficients;
use crate::operator::{
    fidelity, spectral_norm, trace_distance, CMatrix, HermitianOperator, QuantumState,
};
use crate::problems::{pauli, Problem, ProblemDescription, ScheduleKind};
use crate::product::{expected_merged_count, expected_pointwise_count, hdr_sequence, iacs_step, pointwise_sequence};
use crate::propagator::reference_propagator;
use crate::qdrift::{channel_v1, iterate_channel_v1, sample_trajectories, DiscreteMeasure, StepMeasure};
use crate::schedule::Schedule;
use crate::splitting::BaseScheme;

pub fn grover_n2() -> ProblemDescription {
    ProblemDescription::Grover {
        n_qubits: 2,
        schedule: ScheduleKind::Linear,
        time_scale: 40.0,
        seed: 1,
    }
}

pub const DEFAULT_ORDER_GRID: [usize; 11] = [16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512];

/// A benchmark over `families × bases` whose slope checks demand `−order ± 0.5`.
pub fn order_config(
    problem: ProblemDescription,
    families: &[Family],
    bases: &[BaseScheme],
    n_grid: Vec<usize>,
    seeds: Vec<u64>,
) -> BenchConfig {
    let mut schemes = Vec::new();
    let mut slope = Vec::new();
    for &f in families {
        for &b in bases {
            let s = SchemeSpec::product(f, b);
            let order = b.coefficients().order as f64;
            slope.push(SlopeCheck {
                series: s.series_id(),
                min: -order - 0.5,
                max: -order + 0.5,
            });
            schemes.push(s);
        }
    }
    BenchConfig {
        problem,
        n_grid,
        seeds,
        metric: Metric::Trace,
        reference_tol: 1e-12,
        schemes,
        output: OutputSpec::default(),
        checks: Checks {
            slope,
            ordering: Vec::new(),
            monotone: true,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRow {
    pub family: &'static str,
    pub base: &'static str,
    pub n_terms: usize,
    pub q: usize,
    pub lambda_prime: Option<usize>,
    pub expected: usize,
    pub actual: usize,
}

impl AuditRow {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }
}

fn audit_hamiltonian(n_terms: usize) -> Result<TimeDepHamiltonian> {
    let ops = [pauli::x(), pauli::z(), pauli::y()];
    let terms = (0..n_terms)
        .map(|k| {
            let schedule = Schedule::Sinusoid {
                offset: 1.5,
                amplitude: 0.5,
                frequency: 1.0 + k as f64,
                phase: 0.3 * k as f64,
            };
            Ok(LocalTerm::new(schedule, HermitianOperator::new(ops[k % 3].clone())?))
        })
        .collect::<Result<Vec<_>>>()?;
    TimeDepHamiltonian::new(terms, (0.0, 1.0))
}

/// Bases covering cycle counts `q ∈ {1, 3, 4, 5}`.
pub const AUDIT_BASES: [BaseScheme; 5] = [
    BaseScheme::Strang,
    BaseScheme::Frs,
    BaseScheme::Fro,
    BaseScheme::Suz4,
    BaseScheme::Ost4,
];

/// Enumerates `Λ ∈ {2,3,4}`, every audit base and every `Λ′ ∈ 0..=Λ`, comparing
/// built sequences with the closed-form counts.
pub fn audit_gate_counts() -> Result<Vec<AuditRow>> {
    let mut rows = Vec::new();
    for n_terms in 2..=4 {
        let h = audit_hamiltonian(n_terms)?;
        for base in AUDIT_BASES {
            let c = base.coefficients();
            let q = c.q();
            for lp in 0..=n_terms {
                let seq = pointwise_sequence(&h, 0.2, 0.1, &c, lp)?;
                rows.push(AuditRow {
                    family: "pointwise",
                    base: base.name(),
                    n_terms,
                    q,
                    lambda_prime: Some(lp),
                    expected: expected_pointwise_count(n_terms, q, lp),
                    actual: seq.count(),
                });
            }
            rows.push(AuditRow {
                family: "hdr",
                base: base.name(),
                n_terms,
                q,
                lambda_prime: None,
                expected: expected_merged_count(n_terms, q),
                actual: hdr_sequence(&h, 0.2, 0.1, &c)?.count(),
            });
        }
    }
    let h = audit_hamiltonian(2)?;
    rows.push(AuditRow {
        family: "iacs",
        base: "FRS",
        n_terms: 2,
        q: 3,
        lambda_prime: None,
        expected: 7,
        actual: iacs_step(&h, 0.2, 0.1)?.0.count(),
    });
    Ok(rows)
}

/// `‖step(dt) − U(t+dt, t)‖` for each `dt`.
pub fn local_errors(
    h: &TimeDepHamiltonian,
    t: f64,
    dts: &[f64],
    reference_tol: f64,
    mut step: impl FnMut(f64) -> Result<CMatrix>,
) -> Result<Vec<(f64, f64)>> {
    dts.iter()
        .map(|&dt| {
            let u = reference_propagator(h, t, t + dt, reference_tol)?;
            Ok((dt, spectral_norm(&(step(dt)? - u.matrix()))))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasPoint {
    pub dt: f64,
    pub error: f64,
    pub bound: f64,
}

/// One step of the discrete channel with proportional weights from the exact
/// state at `t`, against the exact evolution over `[t, t + dt]`.
pub fn qdrift_bias_sweep(problem: &Problem, t: f64, dts: &[f64]) -> Result<Vec<BiasPoint>> {
    let h = &problem.hamiltonian;
    let (t0, _) = h.interval();
    let psi_t = reference_propagator(h, t0, t, 1e-12)?.apply(&problem.initial_state)?;
    let rho = psi_t.to_density();
    dts.iter()
        .map(|&dt| {
            let lambda = DiscreteMeasure::proportional(h, t, dt)?;
            let out = channel_v1(&rho, h, t, dt, &lambda)?;
            let exact = reference_propagator(h, t, t + dt, 1e-13)?.apply(&psi_t)?.to_density();
            Ok(BiasPoint {
                dt,
                error: trace_distance(&out.output, &exact)?,
                bound: out.bias_bound,
            })
        })
        .collect()
}

/// Mean trace distance between the sampled and exact iterated channels, per sample count.
pub fn qdrift_sampling_sweep(
    problem: &Problem,
    n_steps: usize,
    samples: &[usize],
    seeds: &[u64],
) -> Result<Vec<(usize, f64)>> {
    let h = &problem.hamiltonian;
    let psi = &problem.initial_state;
    let exact = iterate_channel_v1(&psi.to_density(), h, &StepMeasure::Proportional, n_steps)?;
    samples
        .iter()
        .map(|&n| {
            let mut sum = 0.0;
            for &s in seeds {
                let est = sample_trajectories(psi, h, &StepMeasure::Proportional, n_steps, n, s)?;
                sum += trace_distance(&est, &exact)?;
            }
            Ok((n, sum / seeds.len() as f64))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalogPoint {
    pub omega: f64,
    pub trace_distance: f64,
    pub infidelity: f64,
    /// `|tr(O ρ_ω) − tr(O ρ)|`.
    pub plain_error: f64,
    /// The same with the two-branch extrapolation `k = (1, 2)`.
    pub richardson_error: f64,
}

/// Errors of `ρ_ω(t)` against the exact state for each `ω`. The observable is
/// the projector onto the problem's target state, or onto the exact state when
/// there is none.
pub fn analog_sweep(problem: &Problem, t: f64, omegas: &[f64], clock: &GaussianClock) -> Result<Vec<AnalogPoint>> {
    let h = &problem.hamiltonian;
    let psi0 = &problem.initial_state;
    let (t0, _) = h.interval();
    let exact = reference_propagator(h, t0, t, 1e-12)?.apply(psi0)?;
    let projector = problem.target_state.as_ref().unwrap_or(&exact).to_density();
    let o = HermitianOperator::new(projector.matrix().clone())?;
    let exact_rho = exact.to_density();
    let target = exact_rho.expectation(&o)?;
    let spec = mpf_coefficients(&[1, 2])?;
    omegas
        .iter()
        .map(|&w| {
            let c = clock.with_omega(w)?;
            let rho = rho_omega(h, t, &c, psi0)?;
            let rich = richardson_observable(h, t, &o, w, &spec, &c, psi0)?;
            Ok(AnalogPoint {
                omega: w,
                trace_distance: trace_distance(&rho, &exact_rho)?,
                infidelity: 1.0 - fidelity(&exact, &rho)?,
                plain_error: (rho.expectation(&o)? - target).abs(),
                richardson_error: (rich - target).abs(),
            })
        })
        .collect()
}

/// Largest `‖ρ_ω − e^{−iHt}ρ₀e^{iHt}‖₁` over `omegas` for a constant two-term Hamiltonian.
pub fn analog_time_independent_defect(omegas: &[f64], clock: &GaussianClock) -> Result<f64> {
    let h = TimeDepHamiltonian::new(
        vec![
            LocalTerm::new(Schedule::Constant(1.3), HermitianOperator::new(pauli::x())?),
            LocalTerm::new(Schedule::Constant(0.7), HermitianOperator::new(pauli::z())?),
        ],
        (0.0, 1.0),
    )?;
    let psi = QuantumState::basis(2, 0);
    let total = h.evaluate(0.0);
    let exact = QuantumState::normalized(total.expm_apply(0.8, psi.amplitudes())).to_density();
    let mut worst: f64 = 0.0;
    for &w in omegas {
        let rho = rho_omega(&h, 0.8, &clock.with_omega(w)?, &psi)?;
        worst = worst.max(trace_distance(&rho, &exact)?);
    }
    Ok(worst)
}
