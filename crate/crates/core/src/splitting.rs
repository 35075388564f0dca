//! Two-operator splitting weights and their lifting to `Λ` operators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The built-in base splittings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseScheme {
    Lie,
    Strang,
    #[serde(rename = "FRS")]
    Frs,
    #[serde(rename = "FRO")]
    Fro,
    Suz4,
    Ost4,
}

impl BaseScheme {
    pub const ALL: [BaseScheme; 6] = [
        BaseScheme::Lie,
        BaseScheme::Strang,
        BaseScheme::Frs,
        BaseScheme::Fro,
        BaseScheme::Suz4,
        BaseScheme::Ost4,
    ];

    pub const FOURTH_ORDER: [BaseScheme; 4] =
        [BaseScheme::Frs, BaseScheme::Fro, BaseScheme::Suz4, BaseScheme::Ost4];

    pub fn name(self) -> &'static str {
        match self {
            BaseScheme::Lie => "Lie",
            BaseScheme::Strang => "Strang",
            BaseScheme::Frs => "FRS",
            BaseScheme::Fro => "FRO",
            BaseScheme::Suz4 => "Suz4",
            BaseScheme::Ost4 => "Ost4",
        }
    }

    pub fn coefficients(self) -> SplitCoefficients {
        builtin(self)
    }
}

impl fmt::Display for BaseScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BaseScheme::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown base scheme '{s}'")))
    }
}

/// `e^{A a_1 Δt} e^{B b_1 Δt} ⋯ e^{B b_q Δt} e^{A a_{q+1} Δt}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCoefficients {
    pub name: String,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub order: u32,
}

impl SplitCoefficients {
    pub fn new(name: impl Into<String>, a: Vec<f64>, b: Vec<f64>, order: u32) -> Result<Self> {
        if b.is_empty() || a.len() != b.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "need |a| = |b| + 1 >= 2, got |a| = {}, |b| = {}",
                a.len(),
                b.len()
            )));
        }
        let sa: f64 = a.iter().sum();
        let sb: f64 = b.iter().sum();
        if (sa - 1.0).abs() > 1e-12 || (sb - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "weights must sum to one (sum a = {sa}, sum b = {sb})"
            )));
        }
        Ok(Self {
            name: name.into(),
            a,
            b,
            order,
        })
    }

    /// Number of cycles `q`.
    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn lift(&self) -> LiftedCoefficients {
        lift(self)
    }
}

/// Forward/backward sweep weights: `Π_k (Π_j e^{A_j c_k Δt}) (Π_rev e^{A_j d_k Δt})`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedCoefficients {
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

impl LiftedCoefficients {
    pub fn q(&self) -> usize {
        self.c.len()
    }
}

/// `c_1 = a_1`, `d_k = b_k − c_k`, `c_k = a_k − d_{k−1}`.
pub fn lift(coeffs: &SplitCoefficients) -> LiftedCoefficients {
    let q = coeffs.q();
    let mut c = Vec::with_capacity(q);
    let mut d = Vec::with_capacity(q);
    for k in 0..q {
        let ck = if k == 0 { coeffs.a[0] } else { coeffs.a[k] - d[k - 1] };
        c.push(ck);
        d.push(coeffs.b[k] - ck);
    }
    LiftedCoefficients { c, d }
}

/// Offsets from the step start: `left[k] = L_{k+1}`, `right[k] = R_{k+1}`
/// (0-based), with `left[0] = Δt` and `left[q] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitWindows {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

pub fn split_windows(lifted: &LiftedCoefficients, dt: f64) -> SplitWindows {
    let q = lifted.q();
    let mut suffix = vec![0.0; q + 1];
    for k in (0..q).rev() {
        suffix[k] = suffix[k + 1] + lifted.c[k] + lifted.d[k];
    }
    let mut left: Vec<f64> = suffix.iter().map(|s| dt * s).collect();
    left[0] = dt;
    let right = (0..q).map(|k| dt * (lifted.d[k] + suffix[k + 1])).collect();
    SplitWindows { left, right }
}

pub fn builtin(scheme: BaseScheme) -> SplitCoefficients {
    let (a, b, order) = match scheme {
        BaseScheme::Lie => (vec![1.0, 0.0], vec![1.0], 1),
        BaseScheme::Strang => (vec![0.5, 0.5], vec![1.0], 2),
        BaseScheme::Frs => {
            let g = FRS_GAMMA;
            (
                vec![g / 2.0, (1.0 - g) / 2.0, (1.0 - g) / 2.0, g / 2.0],
                vec![g, 1.0 - 2.0 * g, g],
                4,
            )
        }
        BaseScheme::Fro => {
            let (a1, a2) = (0.1720865590295143, -0.1616217622107222);
            let b1 = 0.5915620307551568;
            (
                vec![a1, a2, 1.0 - 2.0 * (a1 + a2), a2, a1],
                vec![b1, 0.5 - b1, 0.5 - b1, b1],
                4,
            )
        }
        BaseScheme::Suz4 => {
            let (a1, a2) = (0.2072453858971879, 0.4144907717943757);
            let (b1, b2) = (0.4144907717943757, 0.4144907717943757);
            let a3 = 0.5 - (a1 + a2);
            (
                vec![a1, a2, a3, a3, a2, a1],
                vec![b1, b2, 1.0 - 2.0 * (b1 + b2), b2, b1],
                4,
            )
        }
        BaseScheme::Ost4 => {
            let (a1, a2) = (0.09257547473195787, 0.4627160310210738);
            let (b1, b2) = (0.2540996315529392, -0.1676517240119692);
            let a3 = 0.5 - (a1 + a2);
            (
                vec![a1, a2, a3, a3, a2, a1],
                vec![b1, b2, 1.0 - 2.0 * (b1 + b2), b2, b1],
                4,
            )
        }
    };
    SplitCoefficients::new(scheme.name(), a, b, order).expect("built-in weights are consistent")
}

pub const FRS_GAMMA: f64 = 1.3512071919596578;

/// `{Lie, Strang, FRS, FRO, Suz4, Ost4}`.
pub fn builtin_schemes() -> Vec<SplitCoefficients> {
    BaseScheme::ALL.into_iter().map(builtin).collect()
}
