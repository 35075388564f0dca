//! `H(t) = Σ_k f_k(t) h_k`.

use crate::error::{Error, Result};
use crate::operator::{CMatrix, HermitianOperator};
use crate::schedule::Schedule;

#[derive(Debug, Clone)]
pub struct LocalTerm {
    pub schedule: Schedule,
    pub operator: HermitianOperator,
}

impl LocalTerm {
    pub fn new(schedule: Schedule, operator: HermitianOperator) -> Self {
        Self { schedule, operator }
    }
}

#[derive(Debug, Clone)]
pub struct TimeDepHamiltonian {
    terms: Vec<LocalTerm>,
    interval: (f64, f64),
}

impl TimeDepHamiltonian {
    pub fn new(terms: Vec<LocalTerm>, interval: (f64, f64)) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("a Hamiltonian needs at least one term".into()))?;
        let dim = first.operator.dim();
        for t in &terms {
            if t.operator.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: t.operator.dim(),
                });
            }
        }
        if !(interval.0 <= interval.1) {
            return Err(Error::InvalidArgument(format!(
                "interval [{}, {}] is empty",
                interval.0, interval.1
            )));
        }
        Ok(Self { terms, interval })
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    /// Number of local terms.
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn dim(&self) -> usize {
        self.terms[0].operator.dim()
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn term_operators(&self) -> Vec<HermitianOperator> {
        self.terms.iter().map(|t| t.operator.clone()).collect()
    }

    pub fn is_time_independent(&self) -> bool {
        self.terms.iter().all(|t| t.schedule.is_constant())
    }

    pub fn evaluate_matrix(&self, t: f64) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim(), self.dim());
        for term in &self.terms {
            let f = term.schedule.value(t);
            if f != 0.0 {
                acc.zip_apply(term.operator.matrix(), |a, b| *a += b * f);
            }
        }
        acc
    }

    /// `H(t)`; evaluation outside the interval uses the schedules' own extension.
    pub fn evaluate(&self, t: f64) -> HermitianOperator {
        HermitianOperator::from_hermitian_unchecked(self.evaluate_matrix(t))
    }

    /// `Σ_k |f_k(t)| ‖h_k‖`, an upper bound on `‖H(t)‖`.
    pub fn norm_bound(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| term.schedule.value(t).abs() * term.operator.spectral_norm())
            .sum()
    }

    /// Replaces each schedule by its constant continuation outside the interval.
    pub fn with_constant_extension(&self) -> Self {
        let (lo, hi) = self.interval;
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| LocalTerm::new(t.schedule.clone().clamped(lo, hi), t.operator.clone()))
                .collect(),
            interval: self.interval,
        }
    }

    pub fn with_interval(&self, interval: (f64, f64)) -> Result<Self> {
        Self::new(self.terms.clone(), interval)
    }
}
