//! Initialization force generated by the pre-initial motion.
//!
//! For the exponential kernel the hereditary force factorizes:
//!
//! ```text
//! ψ(t) = ∫_{-a}^{0} μ e^{-μ(t-τ)} v(τ) dτ = W e^{-μt},   W = μ ∫_{-a}^{0} e^{μτ} v(τ) dτ
//! ```
//!
//! so the whole history enters the dynamics through the single scalar `W`.

use crate::eigen::check_time;
use crate::error::Result;
use crate::model::{ExponentialKernel, HistoryProfile, HistoryShape};

/// Kernel-weighted history integral `W`, the value of `ψ` at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryWeight(f64);

impl HistoryWeight {
    pub fn new(value: f64) -> Self {
        Self(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `ψ(t) = W e^{-μt}`.
    pub fn psi(self, kernel: &ExponentialKernel, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.0 * (-kernel.mu() * t).exp())
    }
}

pub fn history_weight(kernel: &ExponentialKernel, history: &HistoryProfile) -> HistoryWeight {
    let mu = kernel.mu();
    let a = history.duration();
    let w = match history.shape() {
        HistoryShape::Constant { value } => -value * (-mu * a).exp_m1(),
        HistoryShape::Sine {
            amplitude,
            omega,
            phase,
        } => {
            // antiderivative of e^{μτ} sin(ωτ + φ)
            let anti = |tau: f64| {
                let arg = omega * tau + phase;
                (mu * tau).exp() * (mu * arg.sin() - omega * arg.cos()) / (mu * mu + omega * omega)
            };
            mu * amplitude * (anti(0.0) - anti(-a))
        }
        HistoryShape::Polynomial { coefficients } => {
            // τ^n on [-a, 0] maps to (-1)^n u^n on [0, a]
            let sum: f64 = coefficients
                .iter()
                .enumerate()
                .map(|(n, &c)| {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    sign * c * gamma_moment(n, mu, a)
                })
                .sum();
            mu * sum
        }
        HistoryShape::Samples { values } => {
            let h = a / (values.len() - 1) as f64;
            let sum: f64 = values
                .windows(2)
                .enumerate()
                .map(|(i, pair)| {
                    let tau0 = -a + i as f64 * h;
                    let tau1 = if i + 2 == values.len() { 0.0 } else { tau0 + h };
                    linear_panel(mu, tau0, tau1, pair[0], pair[1])
                })
                .sum();
            mu * sum
        }
    };
    HistoryWeight(w)
}

/// `ψ(t)` evaluated through the factorization `W e^{-μt}`.
pub fn psi(kernel: &ExponentialKernel, history: &HistoryProfile, t: f64) -> Result<f64> {
    history_weight(kernel, history).psi(kernel, t)
}

/// `∫_0^a e^{-μu} u^n du`, the lower incomplete gamma function `γ(n+1, μa) / μ^{n+1}`.
fn gamma_moment(n: usize, mu: f64, a: f64) -> f64 {
    let x = mu * a;
    let order = (n + 1) as f64;
    if x < order + 30.0 {
        // positive series: γ(n+1, x) = x^{n+1} e^{-x} Σ_k x^k / ((n+1)(n+2)...(n+1+k))
        let mut term = 1.0 / order;
        let mut sum = term;
        let mut k = 1.0;
        while term > 1e-17 * sum {
            term *= x / (order + k);
            sum += term;
            k += 1.0;
        }
        a.powi(n as i32 + 1) * (-x).exp() * sum
    } else {
        // complement: γ(n+1, x) = n! (1 - e^{-x} Σ_{j<=n} x^j / j!), no cancellation for x >> n
        let mut term = (-x).exp();
        let mut tail = term;
        let mut factorial = 1.0;
        for j in 1..=n {
            term *= x / j as f64;
            tail += term;
            factorial *= j as f64;
        }
        factorial / mu.powi(n as i32 + 1) * (1.0 - tail)
    }
}

/// Exact `∫_{τ0}^{τ1} e^{μτ} v(τ) dτ` for `v` linear between `v0` and `v1`.
fn linear_panel(mu: f64, tau0: f64, tau1: f64, v0: f64, v1: f64) -> f64 {
    let h = tau1 - tau0;
    let x = mu * h;
    // weights ∫_0^1 e^{xs} ds and ∫_0^1 s e^{xs} ds, each scaled by e^{μτ0}
    let (w_flat, w_ramp) = if x < 0.5 {
        let mut flat = 0.0;
        let mut ramp = 0.0;
        let mut power = 1.0;
        for k in 0..20 {
            flat += power / (k + 1) as f64;
            ramp += power / (k + 2) as f64;
            power *= x / (k + 1) as f64;
        }
        let e0 = (mu * tau0).exp();
        (e0 * flat, e0 * ramp)
    } else {
        let e0 = (mu * tau0).exp();
        let e1 = (mu * tau1).exp();
        ((e1 - e0) / x, (e1 * (x - 1.0) + e0) / (x * x))
    };
    h * (v0 * (w_flat - w_ramp) + v1 * w_ramp)
}
