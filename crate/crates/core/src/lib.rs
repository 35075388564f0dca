//! Dense classical simulation of time-dependent Hamiltonian simulation
//! algorithms: time-dependent product formulas, multi-product formulas,
//! qDrift channels, a second-order Taylor LCU step and a smeared-clock
//! analog model, all checked against a high-accuracy reference propagator.

pub mod analog;
pub mod bench;
pub mod error;
pub mod gates;
pub mod hamiltonian;
pub mod mpf;
pub mod operator;
pub mod problems;
pub mod product;
pub mod propagator;
pub mod qdrift;
pub mod quadrature;
pub mod schedule;
pub mod splitting;
pub mod taylor;

pub use error::{Error, Result};
pub use bench::{run_benchmark, BenchConfig, BenchRecord};
pub use hamiltonian::{LocalTerm, TimeDepHamiltonian};
pub use operator::{
    fidelity, herm_expm, pure_trace_distance, trace_distance, DensityOperator, HermitianOperator,
    QuantumState, UnitaryOperator,
};
pub use mpf::{mpf_coefficients, MpfSpec};
pub use problems::{Problem, ProblemDescription, ScheduleKind};
pub use propagator::reference_propagator;
pub use schedule::Schedule;
pub use splitting::{BaseScheme, SplitCoefficients};
