//! Scalar coefficient functions `f_k(t)`.

use std::fmt;
use std::sync::Arc;

use crate::quadrature::adaptive_gl;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied schedule; derivative and integral are numerical.
#[derive(Clone)]
pub struct CustomSchedule {
    name: String,
    f: ScalarFn,
}

impl CustomSchedule {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for CustomSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Custom({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum Schedule {
    Constant(f64),
    /// `offset + slope * t`
    Affine { offset: f64, slope: f64 },
    /// `offset + amplitude * sin(frequency * t + phase)`
    Sinusoid {
        offset: f64,
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// `inner(clamp(t, lo, hi))`: constant continuation outside `[lo, hi]`.
    Clamped {
        inner: Box<Schedule>,
        lo: f64,
        hi: f64,
    },
    Custom(CustomSchedule),
}

impl Schedule {
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Schedule::Custom(CustomSchedule::new(name, f))
    }

    pub fn clamped(self, lo: f64, hi: f64) -> Self {
        Schedule::Clamped {
            inner: Box::new(self),
            lo,
            hi,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Schedule::Constant(c) => *c,
            Schedule::Affine { offset, slope } => offset + slope * t,
            Schedule::Sinusoid {
                offset,
                amplitude,
                frequency,
                phase,
            } => offset + amplitude * (frequency * t + phase).sin(),
            Schedule::Clamped { inner, lo, hi } => inner.value(t.clamp(*lo, *hi)),
            Schedule::Custom(c) => (c.f)(t),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Schedule::Constant(_) => 0.0,
            Schedule::Affine { slope, .. } => *slope,
            Schedule::Sinusoid {
                amplitude,
                frequency,
                phase,
                ..
            } => amplitude * frequency * (frequency * t + phase).cos(),
            Schedule::Clamped { inner, lo, hi } => {
                if t < *lo || t > *hi {
                    0.0
                } else {
                    inner.derivative(t)
                }
            }
            Schedule::Custom(c) => {
                // five-point stencil
                let h = 1e-3 * t.abs().max(1.0);
                let f = &c.f;
                (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
            }
        }
    }

    /// `∫_a^b f(t) dt`, signed.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        match self {
            Schedule::Constant(c) => c * (b - a),
            Schedule::Affine { offset, slope } => offset * (b - a) + 0.5 * slope * (b - a) * (b + a),
            Schedule::Sinusoid {
                offset,
                amplitude,
                frequency,
                phase,
            } => {
                let base = offset * (b - a);
                if *frequency == 0.0 {
                    base + amplitude * phase.sin() * (b - a)
                } else {
                    // cos x - cos y = -2 sin((x+y)/2) sin((x-y)/2), stable for short windows
                    let x = frequency * a + phase;
                    let y = frequency * b + phase;
                    let diff = -2.0 * (0.5 * (x + y)).sin() * (0.5 * (x - y)).sin();
                    base + amplitude * diff / frequency
                }
            }
            Schedule::Clamped { inner, lo, hi } => {
                if a > b {
                    return -self.integral(b, a);
                }
                let mut total = 0.0;
                if a < *lo {
                    total += inner.value(*lo) * (b.min(*lo) - a);
                }
                let (ma, mb) = (a.max(*lo), b.min(*hi));
                if ma < mb {
                    total += inner.integral(ma, mb);
                }
                if b > *hi {
                    total += inner.value(*hi) * (b - a.max(*hi));
                }
                total
            }
            Schedule::Custom(c) => adaptive_gl(|t| (c.f)(t), a, b, 1e-12).unwrap_or(f64::NAN),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Schedule::Constant(_) => true,
            Schedule::Affine { slope, .. } => *slope == 0.0,
            Schedule::Sinusoid {
                amplitude,
                frequency,
                ..
            } => *amplitude == 0.0 || *frequency == 0.0,
            Schedule::Clamped { inner, .. } => inner.is_constant(),
            Schedule::Custom(_) => false,
        }
    }

    /// True iff `f > 0` on the open interval `(a, b)`.
    pub fn positive_in_interior(&self, a: f64, b: f64) -> bool {
        let (a, b) = (a.min(b), a.max(b));
        match self {
            Schedule::Constant(c) => *c > 0.0,
            Schedule::Affine { .. } => {
                let (fa, fb) = (self.value(a), self.value(b));
                fa >= 0.0 && fb >= 0.0 && (fa > 0.0 || fb > 0.0)
            }
            Schedule::Sinusoid {
                frequency, phase, ..
            } => {
                if self.is_constant() {
                    return self.value(a) > 0.0;
                }
                if self.value(a) < 0.0 || self.value(b) < 0.0 {
                    return false;
                }
                // interior stationary points: frequency * t + phase = pi/2 + k pi
                let w = *frequency;
                let (u0, u1) = {
                    let (x, y) = (w * a + phase, w * b + phase);
                    (x.min(y), x.max(y))
                };
                let pi = std::f64::consts::PI;
                let mut k = ((u0 - pi / 2.0) / pi).floor();
                loop {
                    let u = pi / 2.0 + k * pi;
                    if u >= u1 {
                        break;
                    }
                    if u > u0 && self.value((u - phase) / w) <= 0.0 {
                        return false;
                    }
                    k += 1.0;
                }
                true
            }
            Schedule::Clamped { inner, lo, hi } => {
                let (ia, ib) = (a.max(*lo), b.min(*hi));
                let mut ok = true;
                if ia < ib {
                    ok &= inner.positive_in_interior(ia, ib);
                }
                if a < *lo {
                    ok &= inner.value(*lo) > 0.0;
                }
                if b > *hi {
                    ok &= inner.value(*hi) > 0.0;
                }
                ok
            }
            Schedule::Custom(c) => {
                let n = 1024;
                (1..n).all(|i| (c.f)(a + (b - a) * i as f64 / n as f64) > 0.0)
            }
        }
    }

    /// True iff `f > 0` on the closed interval `[a, b]`.
    pub fn positive_on(&self, a: f64, b: f64) -> bool {
        self.value(a) > 0.0 && self.value(b) > 0.0 && self.positive_in_interior(a, b)
    }
}
