//! Oscillator parameters, the exponential relaxation kernel and the
//! pre-initial velocity histories that drive the hereditary force.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Error, Result};
use crate::poly;

/// Relative slack accepted on the ends of `[-a, 0]` when evaluating a history.
const DOMAIN_SLACK: f64 = 1e-12;

/// Mass, viscous coefficient, stiffness and kernel rate of
/// `m x'' + c ∫ G(t-τ) x'(τ) dτ + k x = f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    m: f64,
    c: f64,
    k: f64,
    mu: f64,
}

impl OscillatorParams {
    pub fn new(m: f64, c: f64, k: f64, mu: f64) -> Result<Self> {
        positive("m", m)?;
        positive("k", k)?;
        positive("mu", mu)?;
        if !c.is_finite() || c < 0.0 {
            return Err(invalid("c", format!("must be finite and >= 0, got {c}")));
        }
        Ok(Self { m, c, k, mu })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kernel(&self) -> ExponentialKernel {
        ExponentialKernel { mu: self.mu }
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

/// Unit-mass relaxation kernel `G(t) = μ e^{-μt}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialKernel {
    mu: f64,
}

impl ExponentialKernel {
    pub fn new(mu: f64) -> Result<Self> {
        positive("mu", mu)?;
        Ok(Self { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain {
                t,
                domain: "[0, inf)".into(),
            });
        }
        Ok(self.mu * (-self.mu * t).exp())
    }
}

/// Shape of the velocity history `v(τ)` on `[-a, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub enum HistoryShape {
    Constant {
        value: f64,
    },
    /// `A sin(ωτ + φ)`.
    Sine {
        amplitude: f64,
        omega: f64,
        phase: f64,
    },
    /// Ascending powers of `τ` (which is non-positive on the history window).
    Polynomial {
        coefficients: Vec<f64>,
    },
    /// Uniform samples from `τ = -a` to `τ = 0`, linearly interpolated.
    Samples {
        values: Vec<f64>,
    },
}

/// Velocity prescribed over `[-a, 0]`; the system is at rest before `-a`.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryProfile {
    duration: f64,
    shape: HistoryShape,
}

impl HistoryProfile {
    pub fn new(duration: f64, shape: HistoryShape) -> Result<Self> {
        positive("a", duration)?;
        let finite = |name, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, format!("must be finite, got {v}")))
            }
        };
        match &shape {
            HistoryShape::Constant { value } => finite("value", *value)?,
            HistoryShape::Sine {
                amplitude,
                omega,
                phase,
            } => {
                finite("amplitude", *amplitude)?;
                finite("omega", *omega)?;
                finite("phase", *phase)?;
            }
            HistoryShape::Polynomial { coefficients } => {
                if coefficients.is_empty() {
                    return Err(invalid("coefficients", "at least one coefficient required"));
                }
                for &c in coefficients {
                    finite("coefficients", c)?;
                }
            }
            HistoryShape::Samples { values } => {
                if values.len() < 2 {
                    return Err(invalid("values", "at least two samples required"));
                }
                for &v in values {
                    finite("values", v)?;
                }
            }
        }
        Ok(Self { duration, shape })
    }

    /// Samples on `[-a, 0]` with an explicit spacing; `spacing * (n - 1)` must equal `a`.
    pub fn sampled_with_spacing(duration: f64, spacing: f64, values: Vec<f64>) -> Result<Self> {
        let profile = Self::new(duration, HistoryShape::Samples { values })?;
        let span = spacing * (profile.sample_count() - 1) as f64;
        if !((span - duration).abs() <= 1e-12 * duration) {
            return Err(invalid(
                "dt",
                format!("spacing {spacing} times {} intervals is {span}, not a = {duration}", profile.sample_count() - 1),
            ));
        }
        Ok(profile)
    }

    pub fn constant(duration: f64, value: f64) -> Result<Self> {
        Self::new(duration, HistoryShape::Constant { value })
    }

    pub fn sine(duration: f64, amplitude: f64, omega: f64, phase: f64) -> Result<Self> {
        Self::new(
            duration,
            HistoryShape::Sine {
                amplitude,
                omega,
                phase,
            },
        )
    }

    pub fn polynomial(duration: f64, coefficients: Vec<f64>) -> Result<Self> {
        Self::new(duration, HistoryShape::Polynomial { coefficients })
    }

    pub fn samples(duration: f64, values: Vec<f64>) -> Result<Self> {
        Self::new(duration, HistoryShape::Samples { values })
    }

    /// A system that was at rest before the initial time.
    pub fn quiescent() -> Self {
        Self {
            duration: 1.0,
            shape: HistoryShape::Constant { value: 0.0 },
        }
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn shape(&self) -> &HistoryShape {
        &self.shape
    }

    pub fn is_zero(&self) -> bool {
        match &self.shape {
            HistoryShape::Constant { value } => *value == 0.0,
            HistoryShape::Sine { amplitude, .. } => *amplitude == 0.0,
            HistoryShape::Polynomial { coefficients } => coefficients.iter().all(|&c| c == 0.0),
            HistoryShape::Samples { values } => values.iter().all(|&v| v == 0.0),
        }
    }

    fn sample_count(&self) -> usize {
        match &self.shape {
            HistoryShape::Samples { values } => values.len(),
            _ => 0,
        }
    }

    /// Grid spacing of a sampled history.
    pub fn spacing(&self) -> Option<f64> {
        match &self.shape {
            HistoryShape::Samples { values } => Some(self.duration / (values.len() - 1) as f64),
            _ => None,
        }
    }

    /// Velocity `v(t)` for `t` in `[-a, 0]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let a = self.duration;
        let slack = DOMAIN_SLACK * a;
        if !(t >= -a - slack && t <= slack) {
            return Err(Error::Domain {
                t,
                domain: format!("[{}, 0]", -a),
            });
        }
        let t = t.clamp(-a, 0.0);
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        match &self.shape {
            HistoryShape::Constant { value } => *value,
            HistoryShape::Sine {
                amplitude,
                omega,
                phase,
            } => amplitude * (omega * t + phase).sin(),
            HistoryShape::Polynomial { coefficients } => poly::eval(coefficients, t),
            HistoryShape::Samples { values } => {
                let n = values.len() - 1;
                let pos = (t + self.duration) / self.duration * n as f64;
                let i = (pos.floor() as usize).min(n - 1);
                let frac = pos - i as f64;
                values[i] + (values[i + 1] - values[i]) * frac
            }
        }
    }

    /// `M = sup |v(t)|` over `[-a, 0]`.
    pub fn sup_norm(&self) -> f64 {
        let a = self.duration;
        match &self.shape {
            HistoryShape::Constant { value } => value.abs(),
            HistoryShape::Sine {
                amplitude,
                omega,
                phase,
            } => {
                // phase sweeps the interval between φ - ωa and φ
                let (lo, hi) = {
                    let start = phase - omega * a;
                    (start.min(*phase), start.max(*phase))
                };
                let n = ((lo - FRAC_PI_2) / PI).ceil();
                if FRAC_PI_2 + n * PI <= hi {
                    amplitude.abs()
                } else {
                    amplitude.abs() * lo.sin().abs().max(hi.sin().abs())
                }
            }
            HistoryShape::Polynomial { coefficients } => {
                let critical = poly::real_roots_in(&poly::derivative(coefficients), -a, 0.0);
                critical
                    .into_iter()
                    .chain([-a, 0.0])
                    .map(|t| poly::eval(coefficients, t).abs())
                    .fold(0.0, f64::max)
            }
            HistoryShape::Samples { values } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }
}

/// Displacement and velocity at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub x0: f64,
    pub v0: f64,
}

impl InitialState {
    pub fn new(x0: f64, v0: f64) -> Result<Self> {
        if !x0.is_finite() {
            return Err(invalid("x0", format!("must be finite, got {x0}")));
        }
        if !v0.is_finite() {
            return Err(invalid("v0", format!("must be finite, got {v0}")));
        }
        Ok(Self { x0, v0 })
    }

    pub fn rest() -> Self {
        Self { x0: 0.0, v0: 0.0 }
    }
}
