//! Benchmark problems: adiabatic Grover search, adiabatic PageRank and a
//! driven transverse-field Ising chain.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{LocalTerm, TimeDepHamiltonian};
use crate::operator::{identity, kron, CMatrix, HermitianOperator, QuantumState, C64};
use crate::schedule::Schedule;

pub const ISING_J: f64 = -1.0;
pub const ISING_HZ: f64 = 0.2;
pub const PAGERANK_ALPHA: f64 = 0.85;

/// Interpolation profile `f(t)` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    /// `f(t) = t`
    Linear,
    /// `f(t) = sin(pi t / 2)`
    Sin,
}

impl ScheduleKind {
    /// `(f1, f2) = (T (1 - f), T f)`.
    pub fn schedules(self, time_scale: f64) -> (Schedule, Schedule) {
        match self {
            ScheduleKind::Linear => (
                Schedule::Affine {
                    offset: time_scale,
                    slope: -time_scale,
                },
                Schedule::Affine {
                    offset: 0.0,
                    slope: time_scale,
                },
            ),
            ScheduleKind::Sin => (
                Schedule::Sinusoid {
                    offset: time_scale,
                    amplitude: -time_scale,
                    frequency: PI / 2.0,
                    phase: 0.0,
                },
                Schedule::Sinusoid {
                    offset: 0.0,
                    amplitude: time_scale,
                    frequency: PI / 2.0,
                    phase: 0.0,
                },
            ),
        }
    }
}

/// `H(t) = f1(t) h1 + f2(t) h2` interpolating between two ground states.
#[derive(Debug, Clone)]
pub struct AdiabaticProblem {
    pub hamiltonian: TimeDepHamiltonian,
    pub initial_state: QuantumState,
    pub target_state: QuantumState,
    pub time_scale: f64,
}

pub mod pauli {
    use super::*;

    pub fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
    }

    pub fn y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0)])
    }

    /// `op` acting on `site` of an `n`-site register; site 0 is the most significant factor.
    pub fn on_site(op: &CMatrix, site: usize, n: usize) -> CMatrix {
        let mut acc = if site == 0 { op.clone() } else { identity(2) };
        for j in 1..n {
            let f = if j == site { op.clone() } else { identity(2) };
            acc = kron(&acc, &f);
        }
        acc
    }
}

fn projector_complement(psi: &QuantumState) -> HermitianOperator {
    let v = psi.amplitudes();
    HermitianOperator::from_hermitian_unchecked(identity(v.len()) - v * v.adjoint())
}

fn check_qubits(dim: usize, n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > 20 || dim != 1usize << n_qubits {
        return Err(Error::DimensionMismatch {
            left: 1usize << n_qubits.min(20),
            right: dim,
        });
    }
    Ok(())
}

/// A product of independent random single-qubit pure states.
pub fn random_product_state<R: Rng>(n_qubits: usize, rng: &mut R) -> QuantumState {
    let factors: Vec<QuantumState> = (0..n_qubits)
        .map(|_| {
            let cos_theta: f64 = rng.gen_range(-1.0..=1.0);
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            let half = 0.5 * cos_theta.acos();
            QuantumState::normalized(nalgebra::DVector::from_vec(vec![
                C64::new(half.cos(), 0.0),
                C64::from_polar(half.sin(), phi),
            ]))
        })
        .collect();
    QuantumState::product(&factors).expect("at least one qubit")
}

/// Adiabatic search from `|+⟩^{⊗n}` to `target`.
pub fn build_grover(
    n_qubits: usize,
    target: &QuantumState,
    time_scale: f64,
    kind: ScheduleKind,
) -> Result<AdiabaticProblem> {
    let norm = target.amplitudes().norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(norm));
    }
    check_qubits(target.dim(), n_qubits)?;
    let plus = QuantumState::plus_state(n_qubits);
    let (f1, f2) = kind.schedules(time_scale);
    let hamiltonian = TimeDepHamiltonian::new(
        vec![
            LocalTerm::new(f1, projector_complement(&plus)),
            LocalTerm::new(f2, projector_complement(target)),
        ],
        (0.0, 1.0),
    )?;
    Ok(AdiabaticProblem {
        hamiltonian,
        initial_state: plus,
        target_state: target.clone(),
        time_scale,
    })
}

/// Random digraph without self-loops; `adj[(i, j)] = 1` encodes the edge `i -> j`.
pub fn random_digraph<R: Rng>(n_nodes: usize, edge_probability: f64, rng: &mut R) -> DMatrix<u8> {
    DMatrix::from_fn(n_nodes, n_nodes, |i, j| {
        u8::from(i != j && rng.gen_bool(edge_probability))
    })
}

/// Row-stochastic transition matrix with uniform rows for dangling nodes.
pub fn transition_matrix(adjacency: &DMatrix<u8>) -> Result<DMatrix<f64>> {
    let n = adjacency.nrows();
    if adjacency.ncols() != n || n == 0 {
        return Err(Error::NotSquare {
            rows: n,
            cols: adjacency.ncols(),
        });
    }
    if adjacency.iter().any(|&a| a > 1) {
        return Err(Error::InvalidArgument("adjacency entries must be 0 or 1".into()));
    }
    let mut p = DMatrix::zeros(n, n);
    for i in 0..n {
        let d: usize = adjacency.row(i).iter().map(|&a| a as usize).sum();
        for j in 0..n {
            p[(i, j)] = if d == 0 {
                1.0 / n as f64
            } else if adjacency[(i, j)] == 1 {
                1.0 / d as f64
            } else {
                0.0
            };
        }
    }
    Ok(p)
}

/// `G = α Pᵀ + (1 − α) E`, column stochastic.
pub fn google_matrix(adjacency: &DMatrix<u8>, alpha: f64) -> Result<DMatrix<f64>> {
    let p = transition_matrix(adjacency)?;
    let n = p.nrows();
    Ok(p.transpose() * alpha + DMatrix::from_element(n, n, (1.0 - alpha) / n as f64))
}

/// Adiabatic PageRank: the target is the kernel vector of `(I − G)ᵀ(I − G)`.
pub fn build_pagerank(
    adjacency: &DMatrix<u8>,
    alpha: f64,
    time_scale: f64,
    kind: ScheduleKind,
) -> Result<AdiabaticProblem> {
    let n = adjacency.nrows();
    if !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "adjacency dimension {n} is not a power of two"
        )));
    }
    let n_qubits = n.trailing_zeros() as usize;
    let g = google_matrix(adjacency, alpha)?;
    let m = DMatrix::<f64>::identity(n, n) - &g;
    let h2 = HermitianOperator::from_real(m.transpose() * &m)?;
    let (_, mut v) = h2.ground_state();
    let s: C64 = v.iter().sum();
    if s.norm() > 0.0 {
        v *= s.conj() / s.norm();
    }
    let target = QuantumState::normalized(v);
    let plus = QuantumState::plus_state(n_qubits.max(1));
    if plus.dim() != n {
        return Err(Error::InvalidArgument("PageRank needs at least two nodes".into()));
    }
    let (f1, f2) = kind.schedules(time_scale);
    let hamiltonian = TimeDepHamiltonian::new(
        vec![
            LocalTerm::new(f1, projector_complement(&plus)),
            LocalTerm::new(f2, h2),
        ],
        (0.0, 1.0),
    )?;
    Ok(AdiabaticProblem {
        hamiltonian,
        initial_state: plus,
        target_state: target,
        time_scale,
    })
}

/// Periodic chain with `f1 = π sin(π t)` on the transverse field and `f2 = π`
/// on the couplings, on `[0, 1]`.
pub fn build_ising(sites: usize, h_x: f64) -> Result<TimeDepHamiltonian> {
    if sites < 2 {
        return Err(Error::InvalidArgument(format!("Ising chain needs L >= 2, got {sites}")));
    }
    let dim = 1usize << sites;
    let mut h1 = CMatrix::zeros(dim, dim);
    let mut h2 = CMatrix::zeros(dim, dim);
    let (x, z) = (pauli::x(), pauli::z());
    for j in 0..sites {
        h1 += pauli::on_site(&x, j, sites) * C64::new(h_x, 0.0);
        let zj = pauli::on_site(&z, j, sites);
        let zk = pauli::on_site(&z, (j + 1) % sites, sites);
        h2 += (&zj * &zk) * C64::new(ISING_J, 0.0) + zj * C64::new(ISING_HZ, 0.0);
    }
    TimeDepHamiltonian::new(
        vec![
            LocalTerm::new(
                Schedule::Sinusoid {
                    offset: 0.0,
                    amplitude: PI,
                    frequency: PI,
                    phase: 0.0,
                },
                HermitianOperator::new(h1)?,
            ),
            LocalTerm::new(Schedule::Constant(PI), HermitianOperator::new(h2)?),
        ],
        (0.0, 1.0),
    )
}

pub fn ising_initial_state(sites: usize) -> QuantumState {
    QuantumState::plus_state(sites)
}

/// A problem ready for simulation.
#[derive(Debug, Clone)]
pub struct Problem {
    pub hamiltonian: TimeDepHamiltonian,
    pub initial_state: QuantumState,
    pub target_state: Option<QuantumState>,
}

impl From<AdiabaticProblem> for Problem {
    fn from(p: AdiabaticProblem) -> Self {
        Self {
            hamiltonian: p.hamiltonian,
            initial_state: p.initial_state,
            target_state: Some(p.target_state),
        }
    }
}

fn default_alpha() -> f64 {
    PAGERANK_ALPHA
}

fn default_edge_probability() -> f64 {
    0.5
}

/// Serializable description of a benchmark instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProblemDescription {
    Grover {
        n_qubits: usize,
        schedule: ScheduleKind,
        time_scale: f64,
        #[serde(default)]
        seed: u64,
    },
    Pagerank {
        n_qubits: usize,
        schedule: ScheduleKind,
        time_scale: f64,
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default = "default_edge_probability")]
        edge_probability: f64,
        #[serde(default)]
        seed: u64,
    },
    Ising {
        sites: usize,
        h_x: f64,
    },
}

impl ProblemDescription {
    pub fn with_seed(&self, new_seed: u64) -> Self {
        let mut d = self.clone();
        match &mut d {
            ProblemDescription::Grover { seed, .. } | ProblemDescription::Pagerank { seed, .. } => {
                *seed = new_seed
            }
            ProblemDescription::Ising { .. } => {}
        }
        d
    }

    /// True when the instance depends on the seed.
    pub fn is_random(&self) -> bool {
        !matches!(self, ProblemDescription::Ising { .. })
    }

    pub fn build(&self) -> Result<Problem> {
        match *self {
            ProblemDescription::Grover {
                n_qubits,
                schedule,
                time_scale,
                seed,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let target = random_product_state(n_qubits, &mut rng);
                Ok(build_grover(n_qubits, &target, time_scale, schedule)?.into())
            }
            ProblemDescription::Pagerank {
                n_qubits,
                schedule,
                time_scale,
                alpha,
                edge_probability,
                seed,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let adj = random_digraph(1 << n_qubits, edge_probability, &mut rng);
                Ok(build_pagerank(&adj, alpha, time_scale, schedule)?.into())
            }
            ProblemDescription::Ising { sites, h_x } => Ok(Problem {
                hamiltonian: build_ising(sites, h_x)?,
                initial_state: ising_initial_state(sites),
                target_state: None,
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("problem description: {e}")))
    }
}
