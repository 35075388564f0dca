//! Second-order Taylor expansion of the propagator as a linear combination of
//! products of local terms, with its coefficient sum and the segment grid on
//! which that sum stays at 2.

use crate::error::{Error, Result};
use crate::hamiltonian::TimeDepHamiltonian;
use crate::operator::{identity, CMatrix, C64};
use crate::quadrature::monotone_root;

/// A nonunitary step operator and the sum `s` of its LCU coefficients.
#[derive(Debug, Clone)]
pub struct LcuApprox {
    pub operator: CMatrix,
    pub coefficient_sum: f64,
}

/// `(Δt f_j − Δt²/2 f_j′, Δt²/2 f_j f_k)` at `t + Δt`.
fn coefficients(h: &TimeDepHamiltonian, t: f64, dt: f64) -> (Vec<f64>, Vec<f64>) {
    let tau = t + dt;
    let f: Vec<f64> = h.terms().iter().map(|x| x.schedule.value(tau)).collect();
    let first = h
        .terms()
        .iter()
        .zip(&f)
        .map(|(x, &fj)| dt * fj - 0.5 * dt * dt * x.schedule.derivative(tau))
        .collect();
    let n = f.len();
    let mut second = Vec::with_capacity(n * n);
    for fj in &f {
        for fk in &f {
            second.push(0.5 * dt * dt * fj * fk);
        }
    }
    (first, second)
}

/// `I + Σ_j c_j (−i h_j) + Σ_{j,k} c_{jk} (−i h_j)(−i h_k)`, expanded about `t + Δt`.
pub fn taylor2_step(h: &TimeDepHamiltonian, t: f64, dt: f64) -> LcuApprox {
    let (first, second) = coefficients(h, t, dt);
    let n = h.n_terms();
    let ops: Vec<&CMatrix> = h.terms().iter().map(|x| x.operator.matrix()).collect();
    let mut m = identity(h.dim());
    let minus_i = C64::new(0.0, -1.0);
    for j in 0..n {
        m += ops[j] * (minus_i * first[j]);
        for k in 0..n {
            m -= (ops[j] * ops[k]) * C64::new(second[j * n + k], 0.0);
        }
    }
    LcuApprox {
        operator: m,
        coefficient_sum: 1.0 + first.iter().sum::<f64>() + second.iter().sum::<f64>(),
    }
}

/// `1 + Σ_j (Δt f_j − Δt²/2 f_j′) + Σ_{j,k} Δt²/2 f_j f_k`.
pub fn success_weight(h: &TimeDepHamiltonian, t: f64, dt: f64) -> f64 {
    let (first, second) = coefficients(h, t, dt);
    1.0 + first.iter().sum::<f64>() + second.iter().sum::<f64>()
}

/// Grid `t_i = T_0 < T_1 < …` on `[t_i, t_end]` with `Σ_j ∫_{T_k}^{T_{k+1}} f_j = ln 2`
/// for every full segment; the final point is `t_end`, closing a partial
/// segment when the weights do not divide evenly.
pub fn segment_boundaries(h: &TimeDepHamiltonian, t_end: f64) -> Result<Vec<f64>> {
    let start = h.interval().0;
    if !(t_end > start) {
        return Err(Error::InvalidArgument(format!(
            "end time {t_end} must exceed the start {start}"
        )));
    }
    let weight = |x: f64| -> f64 { h.terms().iter().map(|term| term.schedule.integral(start, x)).sum() };
    let rate = |x: f64| -> f64 { h.terms().iter().map(|term| term.schedule.value(x)).sum() };
    let total = weight(t_end);
    if !(total > 0.0) {
        return Err(Error::Precondition(format!(
            "total weight {total} on [{start}, {t_end}] is not positive"
        )));
    }
    let ln2 = std::f64::consts::LN_2;
    let full = (total / ln2).floor() as usize;
    let mut grid = vec![start];
    for b in 1..=full {
        let lo = *grid.last().expect("grid starts nonempty");
        // the cumulative target keeps per-segment errors from accumulating
        let x = monotone_root(weight, rate, b as f64 * ln2, lo, t_end, 1e-15)?;
        grid.push(x);
    }
    if *grid.last().expect("nonempty") < t_end {
        grid.push(t_end);
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::LocalTerm;
    use crate::operator::testutil::random_hermitian;
    use crate::operator::spectral_norm;
    use crate::schedule::Schedule;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single(f: Schedule) -> TimeDepHamiltonian {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        TimeDepHamiltonian::new(vec![LocalTerm::new(f, random_hermitian(&mut rng, 3))], (0.0, 1.0)).unwrap()
    }

    #[test]
    fn constant_single_term_is_plain_taylor() {
        let h = single(Schedule::Constant(1.7));
        let dt = 0.05;
        let a = h.terms()[0].operator.matrix();
        let expect = identity(3) - a * C64::new(0.0, dt * 1.7) - (a * a) * C64::new(0.5 * (dt * 1.7).powi(2), 0.0);
        let got = taylor2_step(&h, 0.3, dt);
        assert!(spectral_norm(&(got.operator - expect)) < 1e-15);
        let s = 1.0 + 1.7 * dt + 0.5 * (1.7 * dt).powi(2);
        assert!((got.coefficient_sum - s).abs() < 1e-15);
        assert!((success_weight(&h, 0.3, dt) - s).abs() < 1e-15);
    }

    #[test]
    fn zero_step_is_identity() {
        let h = single(Schedule::Affine { offset: 1.0, slope: 3.0 });
        let got = taylor2_step(&h, 0.4, 0.0);
        assert_eq!(got.operator, identity(3));
        assert_eq!(got.coefficient_sum, 1.0);
        assert_eq!(success_weight(&h, 0.4, 0.0), 1.0);
    }

    #[test]
    fn forward_and_backward_steps_nearly_cancel() {
        let h = single(Schedule::Sinusoid {
            offset: 1.0,
            amplitude: 0.5,
            frequency: 2.0,
            phase: 0.0,
        });
        let mut prev = f64::NAN;
        for e in 4..9 {
            let dt = 2f64.powi(-e);
            let fwd = taylor2_step(&h, 0.3, dt);
            let back = taylor2_step(&h, 0.3 + dt, -dt);
            let err = spectral_norm(&(&back.operator * &fwd.operator - identity(3)));
            if prev.is_finite() {
                assert!(err < prev / 3.0, "{err} vs {prev}");
            }
            prev = err;
        }
    }

    #[test]
    fn uniform_segments_for_constant_rate() {
        let h = single(Schedule::Constant(5.0)).with_interval((0.0, 2.0)).unwrap();
        let g = segment_boundaries(&h, 2.0).unwrap();
        let len = std::f64::consts::LN_2 / 5.0;
        assert_eq!(g.len(), 16);
        for (k, x) in g.iter().take(15).enumerate() {
            assert!((x - k as f64 * len).abs() < 1e-13);
        }
        assert_eq!(*g.last().unwrap(), 2.0);
    }

    #[test]
    fn short_interval_is_one_partial_segment() {
        let h = single(Schedule::Constant(0.1));
        assert_eq!(segment_boundaries(&h, 1.0).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn zero_weight_is_rejected() {
        let h = single(Schedule::Constant(0.0));
        assert!(segment_boundaries(&h, 1.0).is_err());
    }

    #[test]
    fn segments_carry_ln2_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = TimeDepHamiltonian::new(
            vec![
                LocalTerm::new(Schedule::Affine { offset: 40.0, slope: -40.0 }, random_hermitian(&mut rng, 2)),
                LocalTerm::new(
                    Schedule::Sinusoid {
                        offset: 0.0,
                        amplitude: 40.0,
                        frequency: std::f64::consts::FRAC_PI_2,
                        phase: 0.0,
                    },
                    random_hermitian(&mut rng, 2),
                ),
            ],
            (0.0, 1.0),
        )
        .unwrap();
        let g = segment_boundaries(&h, 1.0).unwrap();
        let w = |a: f64, b: f64| -> f64 { h.terms().iter().map(|t| t.schedule.integral(a, b)).sum() };
        let full = g.len() - 2;
        assert!(full > 30);
        for k in 0..full {
            assert!((w(g[k], g[k + 1]) - std::f64::consts::LN_2).abs() < 1e-10);
            assert!((w(0.0, g[k + 1]) - (k + 1) as f64 * std::f64::consts::LN_2).abs() < 1e-10);
        }
        assert!(w(g[full], 1.0) < std::f64::consts::LN_2);
    }
}
