//! Gauss rules, adaptive integration and a monotone root finder.

use std::sync::OnceLock;

use gauss_quad::{GaussHermite, GaussLegendre};

use crate::error::{Error, Result};

const BASE_DEGREE: usize = 15;
const MAX_DEPTH: u32 = 48;
const MAX_SPLITS: usize = 100_000;

fn base_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(BASE_DEGREE)
            .expect("degree >= 2")
            .into_node_weight_pairs()
    })
}

/// Gauss-Legendre nodes and weights mapped onto `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let rule = GaussLegendre::new(n)
        .map_err(|e| Error::InvalidArgument(format!("Gauss-Legendre degree {n}: {e}")))?;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Ok(rule
        .into_node_weight_pairs()
        .into_iter()
        .map(|(x, w)| (mid + half * x, half * w))
        .collect())
}

/// Nodes and weights for an expectation over a standard normal variable.
///
/// The weights sum to one.
pub fn gauss_hermite_normal(n: usize) -> Result<Vec<(f64, f64)>> {
    let rule = GaussHermite::new(n)
        .map_err(|e| Error::InvalidArgument(format!("Gauss-Hermite degree {n}: {e}")))?;
    let norm = std::f64::consts::PI.sqrt();
    Ok(rule
        .into_node_weight_pairs()
        .into_iter()
        .map(|(x, w)| (std::f64::consts::SQRT_2 * x, w / norm))
        .collect())
}

fn fixed(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * base_rule()
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}

/// Adaptive bisection Gauss-Legendre with an absolute error target.
pub fn adaptive_gl(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = fixed(&mut f, a, b);
    let mut splits = 0;
    recurse(&mut f, a, b, whole, abs_tol, abs_tol, 0, &mut splits)
}

fn recurse(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    global_tol: f64,
    depth: u32,
    splits: &mut usize,
) -> Result<f64> {
    *splits += 1;
    if *splits > MAX_SPLITS {
        return Err(Error::Quadrature(format!(
            "adaptive Gauss-Legendre used {MAX_SPLITS} subdivisions without reaching {global_tol:e}"
        )));
    }
    let m = 0.5 * (a + b);
    let left = fixed(f, a, m);
    let right = fixed(f, m, b);
    let err = (left + right - whole).abs();
    if err <= tol || err <= 4.0 * f64::EPSILON * (left.abs() + right.abs()) {
        return Ok(left + right);
    }
    if depth >= MAX_DEPTH {
        // tolerance halving can outrun the rule near integrable endpoint singularities
        if err <= 1e-3 * global_tol {
            return Ok(left + right);
        }
        return Err(Error::Quadrature(format!(
            "adaptive Gauss-Legendre exceeded depth {MAX_DEPTH} on [{a}, {b}] (error estimate {err:e})"
        )));
    }
    Ok(recurse(f, a, m, left, 0.5 * tol, global_tol, depth + 1, splits)?
        + recurse(f, m, b, right, 0.5 * tol, global_tol, depth + 1, splits)?)
}

/// Solves `g(x) = target` for a nondecreasing `g` on `[lo, hi]`.
///
/// Newton steps from `dg` are taken while they stay inside the current
/// bracket, otherwise the bracket is bisected.
pub fn monotone_root(
    g: impl Fn(f64) -> f64,
    dg: impl Fn(f64) -> f64,
    target: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let ga = g(a) - target;
    let gb = g(b) - target;
    if ga > 0.0 || gb < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "target {target} not bracketed by [{lo}, {hi}] (residuals {ga:e}, {gb:e})"
        )));
    }
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let r = g(x) - target;
        if r == 0.0 {
            return Ok(x);
        }
        if r < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let d = dg(x);
        let newton = if d > 0.0 { x - r / d } else { f64::NAN };
        let next = if newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - x).abs() <= tol || b - a <= tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::InvalidArgument(format!(
        "root finder did not converge for target {target}"
    )))
}
