//! Least-squares slopes on log-log data.

use serde::Serialize;

use crate::error::{Error, Result};

/// Errors outside this window are either pre-asymptotic or at the reference floor.
pub const ERROR_WINDOW: (f64, f64) = (1e-10, 1e-2);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Fits `log y = slope · log x + intercept` over the points with `y` in `window`.
pub fn fit_loglog(points: &[(f64, f64)], window: (f64, f64)) -> Result<SlopeFit> {
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 > 0.0 && p.1 >= window.0 && p.1 <= window.1)
        .map(|p| (p.0.ln(), p.1.ln()))
        .collect();
    let n = used.len();
    if n < 3 {
        return Err(Error::Precondition(format!(
            "slope fit needs at least 3 points with error in [{:e}, {:e}], got {n}",
            window.0, window.1
        )));
    }
    let nf = n as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = used.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = used.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Precondition("slope fit needs distinct x values".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(SlopeFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
        points: n,
    })
}

/// Fit without a window, for sweeps whose errors are all trusted.
pub fn fit_all(points: &[(f64, f64)]) -> Result<SlopeFit> {
    fit_loglog(points, (f64::MIN_POSITIVE, f64::INFINITY))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<_> = [16.0, 32.0, 64.0, 128.0].iter().map(|&n: &f64| (n, n.powi(-4))).collect();
        let f = fit_loglog(&pts, ERROR_WINDOW).unwrap();
        assert!((f.slope + 4.0).abs() < 1e-6);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(f.points, 4);
    }

    #[test]
    fn window_filters_points() {
        let pts: Vec<_> = (0..10).map(|e| (2f64.powi(e), 3.0 * 2f64.powi(-2 * e))).collect();
        let f = fit_loglog(&pts, (1e-4, 1e-2)).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-12);
        assert!(f.points < 10);
        assert!(fit_loglog(&pts[..2], ERROR_WINDOW).is_err());
        assert!(fit_loglog(&pts, (1e-30, 1e-29)).is_err());
    }

    proptest! {
        #[test]
        fn recovers_slope_and_constant(p in -6.0f64..-0.5, c in 0.1f64..10.0) {
            let pts: Vec<_> = (3..9).map(|e| {
                let n = 2f64.powi(e);
                (n, c * n.powf(p))
            }).collect();
            let f = fit_all(&pts).unwrap();
            prop_assert!((f.slope - p).abs() < 1e-9);
            prop_assert!((f.intercept - c.ln()).abs() < 1e-8);
        }
    }
}
