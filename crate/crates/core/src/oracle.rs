//! Time-domain reference solution.
//!
//! The exponential kernel admits an internal variable
//! `y(t) = ∫_{-a}^{t} G(t-τ) x'(τ) dτ` with `y' = μ (x' - y)`, which turns the
//! integro-differential equation into the first-order system
//!
//! ```text
//! x' = v,   m v' = f - c y - k x,   y' = μ (v - y),   y(0) = W
//! ```
//!
//! integrated here with the classical fixed-step fourth-order Runge-Kutta scheme.
//! Nothing in this module uses the spectral solution.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::history::history_weight;
use crate::model::{HistoryProfile, InitialState, OscillatorParams};
use crate::response::{grid_steps, Forcing, Trajectory, TrajectorySample};

/// `(x, v, y)`: displacement, velocity and the hereditary damping variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentedState {
    pub x: f64,
    pub v: f64,
    pub y: f64,
}

impl AugmentedState {
    fn axpy(self, h: f64, d: AugmentedState) -> AugmentedState {
        AugmentedState {
            x: self.x + h * d.x,
            v: self.v + h * d.v,
            y: self.y + h * d.y,
        }
    }
}

/// Oracle output: the trajectory plus the internal variable at every grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRun {
    pub trajectory: Trajectory,
    pub internal: Vec<f64>,
}

/// Largest step accepted by [`integrate`].
///
/// Uses `0.05 min(1/μ, 2π/ρ)` with ρ the Fujiwara bound on the root moduli of
/// the characteristic cubic, an upper bound on the fastest frequency that does
/// not require solving for the spectrum.
pub fn max_step(params: &OscillatorParams) -> f64 {
    let (m, c, k, mu) = (params.m(), params.c(), params.k(), params.mu());
    let a2 = mu;
    let a1 = (k + c * mu) / m;
    let a0 = k * mu / m;
    let radius = 2.0 * a2.max(a1.sqrt()).max((0.5 * a0).cbrt());
    0.05 * (1.0 / mu).min(2.0 * PI / radius)
}

fn rhs(params: &OscillatorParams, f: f64, s: AugmentedState) -> AugmentedState {
    AugmentedState {
        x: s.v,
        v: (f - params.c() * s.y - params.k() * s.x) / params.m(),
        y: params.mu() * (s.v - s.y),
    }
}

/// Integrates from an explicit augmented state; `psi0` is the history weight
/// reported in the `psi` column as `psi0 e^{-μt}`.
pub fn integrate_state(
    params: &OscillatorParams,
    start: AugmentedState,
    psi0: f64,
    forcing: &Forcing,
    t_end: f64,
    dt: f64,
) -> Result<OracleRun> {
    let steps = grid_steps(t_end, dt)?;
    let limit = max_step(params);
    if dt > limit {
        return Err(Error::StepTooLarge { dt, limit });
    }
    let mu = params.mu();
    let mut samples = Vec::with_capacity(steps + 1);
    let mut internal = Vec::with_capacity(steps + 1);
    let mut s = start;
    for n in 0..=steps {
        let t = n as f64 * dt;
        samples.push(TrajectorySample {
            t,
            x: s.x,
            xdot: s.v,
            psi: psi0 * (-mu * t).exp(),
        });
        internal.push(s.y);
        if n == steps {
            break;
        }
        let f0 = forcing.eval(t)?;
        let f_half = forcing.eval(t + 0.5 * dt)?;
        let f1 = forcing.eval(t + dt)?;
        let k1 = rhs(params, f0, s);
        let k2 = rhs(params, f_half, s.axpy(0.5 * dt, k1));
        let k3 = rhs(params, f_half, s.axpy(0.5 * dt, k2));
        let k4 = rhs(params, f1, s.axpy(dt, k3));
        s = AugmentedState {
            x: s.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            v: s.v + dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
            y: s.y + dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
        };
    }
    Ok(OracleRun {
        trajectory: Trajectory { dt, samples },
        internal,
    })
}

/// RK4 solution with the history entering through `y(0) = W`.
pub fn integrate(
    params: &OscillatorParams,
    state: &InitialState,
    history: &HistoryProfile,
    forcing: &Forcing,
    t_end: f64,
    dt: f64,
) -> Result<OracleRun> {
    let w = history_weight(&params.kernel(), history).value();
    let start = AugmentedState {
        x: state.x0,
        v: state.v0,
        y: w,
    };
    integrate_state(params, start, w, forcing, t_end, dt)
}

/// Largest gap between the integrated internal variable and the trapezoid
/// convolution `W e^{-μt_n} + ∫_0^{t_n} G(t_n - τ) x'(τ) dτ` over the stored velocities.
pub fn convolution_check(params: &OscillatorParams, history: &HistoryProfile, run: &OracleRun) -> f64 {
    let mu = params.mu();
    let kernel = params.kernel();
    let w = history_weight(&kernel, history).value();
    let samples = &run.trajectory.samples;
    let dt = run.trajectory.dt;
    let decay = (-mu * dt).exp();

    let v0 = samples.first().map_or(0.0, |s| s.xdot);
    // running = Σ_{i<=n} e^{-μ(t_n - t_i)} v_i
    let mut running = v0;
    let mut worst: f64 = 0.0;
    for (n, (sample, &y_state)) in samples.iter().zip(&run.internal).enumerate() {
        if n > 0 {
            running = decay * running + sample.xdot;
        }
        let history_part = w * (-mu * sample.t).exp();
        let conv = if n == 0 {
            0.0
        } else {
            mu * dt * (running - 0.5 * (-mu * sample.t).exp() * v0 - 0.5 * sample.xdot)
        };
        worst = worst.max((y_state - history_part - conv).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(m: f64, c: f64, k: f64, mu: f64) -> OscillatorParams {
        OscillatorParams::new(m, c, k, mu).unwrap()
    }

    #[test]
    fn undamped_period() {
        let p = params(1.0, 0.0, 1.0, 2.0);
        let state = InitialState::new(1.0, 0.0).unwrap();
        let run = integrate(&p, &state, &HistoryProfile::quiescent(), &Forcing::None, 2.0 * PI, 1e-3).unwrap();
        // 2π/1e-3 rounds to 6283 steps, slightly short of the period
        let last = run.trajectory.samples.last().unwrap();
        assert_abs_diff_eq!(last.x, last.t.cos(), epsilon = 1e-8);
        let exact_period = integrate(&p, &state, &HistoryProfile::quiescent(), &Forcing::None, 2.0 * PI, 2.0 * PI / 6000.0).unwrap();
        assert_abs_diff_eq!(exact_period.trajectory.samples.last().unwrap().x, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn impulse_surrogate_is_sine() {
        let p = params(1.0, 0.0, 1.0, 2.0);
        let start = AugmentedState { x: 0.0, v: 1.0, y: 0.0 };
        let run = integrate_state(&p, start, 0.0, &Forcing::None, 10.0, 1e-3).unwrap();
        for s in run.trajectory.samples.iter().step_by(250) {
            assert_abs_diff_eq!(s.x, s.t.sin(), epsilon = 1e-8);
        }
    }

    #[test]
    fn step_halving_converges() {
        let p = params(1.0, 0.5, 4.0, 2.0);
        let state = InitialState::new(1.0, 0.3).unwrap();
        let hist = HistoryProfile::constant(1.0, 1.0).unwrap();
        let coarse = integrate(&p, &state, &hist, &Forcing::None, 5.0, 1e-3).unwrap();
        let fine = integrate(&p, &state, &hist, &Forcing::None, 5.0, 5e-4).unwrap();
        let xc = coarse.trajectory.samples.last().unwrap().x;
        let xf = fine.trajectory.samples.last().unwrap().x;
        assert!((xc - xf).abs() < 1e-9);
    }

    #[test]
    fn fourth_order_contraction() {
        let p = params(1.0, 0.5, 4.0, 2.0);
        let state = InitialState::new(1.0, 0.0).unwrap();
        let hist = HistoryProfile::constant(1.0, 1.0).unwrap();
        let end = |dt: f64| {
            integrate(&p, &state, &hist, &Forcing::None, 4.0, dt)
                .unwrap()
                .trajectory
                .samples
                .last()
                .unwrap()
                .x
        };
        let (a, b, c) = (end(0.02), end(0.01), end(0.005));
        let ratio = (a - b).abs() / (b - c).abs();
        assert!((13.0..19.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn energy_conserved_without_damping() {
        let p = params(2.0, 0.0, 3.0, 5.0);
        let state = InitialState::new(0.4, -0.9).unwrap();
        let run = integrate(&p, &state, &HistoryProfile::quiescent(), &Forcing::None, 10.0 * 2.0 * PI / 1.5f64.sqrt(), 1e-3).unwrap();
        let energy = |s: &TrajectorySample| 0.5 * (p.m() * s.xdot * s.xdot + p.k() * s.x * s.x);
        let e0 = energy(&run.trajectory.samples[0]);
        for s in &run.trajectory.samples {
            assert!((energy(s) - e0).abs() <= 1e-8 * e0);
        }
    }

    #[test]
    fn step_guard() {
        let p = params(1.0, 0.5, 4.0, 2.0);
        let err = integrate(&p, &InitialState::rest(), &HistoryProfile::quiescent(), &Forcing::None, 1.0, 0.1).unwrap_err();
        assert!(matches!(err, Error::StepTooLarge { .. }));
        assert!(max_step(&p) >= 1e-3);
    }

    #[test]
    fn internal_variable_matches_convolution() {
        let p = params(1.0, 0.0, 1.0, 2.0);
        let run = integrate(&p, &InitialState::new(1.0, 0.0).unwrap(), &HistoryProfile::quiescent(), &Forcing::None, 10.0, 1e-3).unwrap();
        assert!(convolution_check(&p, &HistoryProfile::quiescent(), &run) < 1e-6);

        let p = params(1.0, 0.5, 4.0, 2.0);
        let hist = HistoryProfile::constant(1.0, 1.0).unwrap();
        let run = integrate(&p, &InitialState::new(1.0, 0.3).unwrap(), &hist, &Forcing::None, 10.0, 1e-3).unwrap();
        assert!(convolution_check(&p, &hist, &run) < 1e-5);
    }

    #[test]
    fn single_sample_check_is_zero() {
        let p = params(1.0, 0.5, 4.0, 2.0);
        let hist = HistoryProfile::constant(1.0, 1.0).unwrap();
        let w = history_weight(&p.kernel(), &hist).value();
        let run = OracleRun {
            trajectory: Trajectory {
                dt: 1e-3,
                samples: vec![TrajectorySample { t: 0.0, x: 1.0, xdot: 0.3, psi: w }],
            },
            internal: vec![w],
        };
        assert_eq!(convolution_check(&p, &hist, &run), 0.0);
    }
}
