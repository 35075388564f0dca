//! Sequences of single-term exponentials `exp(-i θ h_k)`.
//!
//! Gates are stored in application order: the first gate acts first, so the
//! represented operator is `G_n ⋯ G_2 G_1`.
//!
//! One gate per line in text form, with 0-based term indices:
//!
//! ```text
//! k=0 kind=pw t0=0.5 t1=0.75 coeff=10
//! k=1 kind=int t0=0 t1=0.25 coeff=1.25
//! ```
//!
//! For `pw` gates `t0` is the evaluation time and `t1 - t0` the duration; for
//! `int` gates the exponent is `∫_{t0}^{t1} f_k`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::operator::{identity, CMatrix, CVector, HermitianOperator, UnitaryOperator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    /// `exp(-i duration f_k(eval_time) h_k)`
    Pointwise { eval_time: f64, duration: f64 },
    /// `exp(-i (∫_{t_lo}^{t_hi} f_k) h_k)`; the window may be reversed.
    Integrated { t_lo: f64, t_hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub term: usize,
    pub kind: GateKind,
    /// The gate is `exp(-i coeff h_term)`.
    pub coeff: f64,
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::Pointwise {
                eval_time,
                duration,
            } => write!(
                f,
                "k={} kind=pw t0={} t1={} coeff={}",
                self.term,
                eval_time,
                eval_time + duration,
                self.coeff
            ),
            GateKind::Integrated { t_lo, t_hi } => write!(
                f,
                "k={} kind=int t0={} t1={} coeff={}",
                self.term, t_lo, t_hi, self.coeff
            ),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("gate line '{line}': {what}"));
        let mut term = None;
        let mut kind = None;
        let mut t0 = None;
        let mut t1 = None;
        let mut coeff = None;
        for field in line.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let num = || value.parse::<f64>().map_err(|_| bad("bad number"));
            match key {
                "k" => term = Some(value.parse::<usize>().map_err(|_| bad("bad term index"))?),
                "kind" => kind = Some(value.to_string()),
                "t0" => t0 = Some(num()?),
                "t1" => t1 = Some(num()?),
                "coeff" => coeff = Some(num()?),
                _ => return Err(bad("unknown key")),
            }
        }
        let (term, t0, t1, coeff) = (
            term.ok_or_else(|| bad("missing k"))?,
            t0.ok_or_else(|| bad("missing t0"))?,
            t1.ok_or_else(|| bad("missing t1"))?,
            coeff.ok_or_else(|| bad("missing coeff"))?,
        );
        let kind = match kind.as_deref() {
            Some("pw") => GateKind::Pointwise {
                eval_time: t0,
                duration: t1 - t0,
            },
            Some("int") => GateKind::Integrated { t_lo: t0, t_hi: t1 },
            _ => return Err(bad("kind must be pw or int")),
        };
        Ok(Gate { term, kind, coeff })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GateSequence {
    gates: Vec<Gate>,
}

impl GateSequence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends without merging.
    pub fn push_raw(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    /// Appends `gate`, fusing it into the previous gate when both exponentiate
    /// the same term with an identical generator.
    ///
    /// Pointwise gates fuse when their evaluation times are equal, or when
    /// `constant_term` says the schedule does not depend on time. Integrated
    /// gates fuse when the windows are contiguous.
    pub fn push(&mut self, gate: Gate, constant_term: bool) {
        if let Some(prev) = self.gates.last_mut() {
            if prev.term == gate.term {
                match (&mut prev.kind, gate.kind) {
                    (
                        GateKind::Pointwise {
                            eval_time: pe,
                            duration: pd,
                        },
                        GateKind::Pointwise {
                            eval_time,
                            duration,
                        },
                    ) if *pe == eval_time || constant_term => {
                        *pd += duration;
                        prev.coeff += gate.coeff;
                        return;
                    }
                    (
                        GateKind::Integrated { t_hi: ph, .. },
                        GateKind::Integrated { t_lo, t_hi },
                    ) if *ph == t_lo => {
                        *ph = t_hi;
                        prev.coeff += gate.coeff;
                        return;
                    }
                    _ => {}
                }
            }
        }
        self.gates.push(gate);
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn count(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `G_n ⋯ G_1` for the given term operators.
    pub fn unitary(&self, ops: &[HermitianOperator]) -> Result<UnitaryOperator> {
        let dim = ops
            .first()
            .map(HermitianOperator::dim)
            .ok_or_else(|| Error::InvalidArgument("no term operators".into()))?;
        let mut u = identity(dim);
        for g in &self.gates {
            let h = ops
                .get(g.term)
                .ok_or_else(|| Error::InvalidArgument(format!("term index {} out of range", g.term)))?;
            u = h.expm_matrix(g.coeff) * u;
        }
        Ok(UnitaryOperator::from_matrix_unchecked(u))
    }

    /// Applies the sequence to a vector in place.
    pub fn apply(&self, ops: &[HermitianOperator], v: &mut CVector) -> Result<()> {
        for g in &self.gates {
            let h = ops
                .get(g.term)
                .ok_or_else(|| Error::InvalidArgument(format!("term index {} out of range", g.term)))?;
            *v = h.expm_apply(g.coeff, v);
        }
        Ok(())
    }

    /// Applies the sequence to the columns of `m`.
    pub fn apply_matrix(&self, ops: &[HermitianOperator], m: &CMatrix) -> Result<CMatrix> {
        let mut out = m.clone();
        for g in &self.gates {
            let h = ops
                .get(g.term)
                .ok_or_else(|| Error::InvalidArgument(format!("term index {} out of range", g.term)))?;
            out = h.expm_matrix(g.coeff) * out;
        }
        Ok(out)
    }

    /// Reverses into operator (left-to-right) order.
    pub fn operator_order(&self) -> Vec<Gate> {
        self.gates.iter().rev().copied().collect()
    }
}

impl fmt::Display for GateSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for GateSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let gates = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<Vec<Gate>>>()?;
        Ok(Self { gates })
    }
}
