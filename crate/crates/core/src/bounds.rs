//! Decay bounds for the history-driven part of the response.
//!
//! With an oscillatory spectrum the history term `-c ∫ h(t-τ) ψ(τ) dτ` splits
//! into the contribution `I1` of the complex pair and `I2` of the real root.
//! For `|v| <= M` on `[-a, 0]`:
//!
//! ```text
//! |I1(t)| <= 2c|R1| M (1 - e^{-μa}) |e^{-μt} - e^{-αt}| / |α - μ|
//! |I2(t)| <=  c|R3| M (1 - e^{-μa}) |e^{-μt} - e^{-γt}| / |γ - μ|
//! ```
//!
//! Both right-hand sides vanish as `t → ∞`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::eigen::{check_time, solve_eigen, EigenSolution};
use crate::error::{Error, Result};
use crate::history::{history_weight, HistoryWeight};
use crate::model::{HistoryProfile, InitialState, OscillatorParams};
use crate::response::{exp_diff_quotient, grid_steps, InitializationResponse};

/// Slack allowed when comparing `|I|` against its bound.
pub const BOUND_SLACK: f64 = 1e-10;
/// Tail values must fall below this fraction of the amplitude scale.
pub const TAIL_TOLERANCE: f64 = 1e-6;
/// Tail horizon in units of `1/ρ`, `ρ = min(α, γ, μ)`.
pub const TAIL_HORIZON: f64 = 30.0;
/// Envelope comparisons start at this many `1/ρ`.
pub const ENVELOPE_START: f64 = 10.0;
/// Floor added to the amplitude scale so an all-zero scenario still has a positive tolerance.
pub const AMPLITUDE_FLOOR: f64 = 1e-300;

const WINDOW_POINTS: usize = 128;

/// `(e^{-μt} - e^{-rt}) / (r - μ)`, with the limit `t e^{-μt}` at `r = μ`.
fn decay_gap(r: f64, mu: f64, t: f64) -> f64 {
    exp_diff_quotient(Complex64::new(-r, 0.0), mu, t).re.abs()
}

fn require_oscillatory(eig: &EigenSolution) -> Result<()> {
    if eig.is_oscillatory() {
        Ok(())
    } else {
        Err(Error::NotOscillatory)
    }
}

/// `(I1, I2)` at time `t` for a known history weight.
pub fn split_with_weight(
    params: &OscillatorParams,
    eig: &EigenSolution,
    weight: HistoryWeight,
    t: f64,
) -> Result<(f64, f64)> {
    require_oscillatory(eig)?;
    check_time(t)?;
    let c = params.c();
    let w = weight.value();
    if c == 0.0 || w == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mu = params.mu();
    let [s1, _, s3] = eig.roots();
    let [r1, _, r3] = eig.residues();
    let pair = 2.0 * (r1 * exp_diff_quotient(s1, mu, t)).re;
    let real = (r3 * exp_diff_quotient(s3, mu, t)).re;
    Ok((-c * w * pair, -c * w * real))
}

pub fn split_history_term(
    params: &OscillatorParams,
    eig: &EigenSolution,
    history: &HistoryProfile,
    t: f64,
) -> Result<(f64, f64)> {
    split_with_weight(params, eig, history_weight(&params.kernel(), history), t)
}

/// Analytic bounds `(B1, B2)` on `|I1|` and `|I2|`, using `|R1|` and `|R3|`.
pub fn decay_bounds(
    params: &OscillatorParams,
    eig: &EigenSolution,
    sup_norm: f64,
    duration: f64,
    t: f64,
) -> Result<(f64, f64)> {
    require_oscillatory(eig)?;
    check_time(t)?;
    let (c, mu) = (params.c(), params.mu());
    let reach = sup_norm * -(-mu * duration).exp_m1();
    let [r1, _, r3] = eig.residues();
    let alpha = eig.alpha().unwrap();
    let gamma = eig.gamma().unwrap();
    let b1 = 2.0 * c * r1.norm() * reach * decay_gap(alpha, mu, t);
    let b2 = c * r3.norm() * reach * decay_gap(gamma, mu, t);
    Ok((b1, b2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub t: f64,
    pub i1_abs: f64,
    pub b1: f64,
    pub i2_abs: f64,
    pub b2: f64,
    pub ok1: bool,
    pub ok2: bool,
}

/// Largest `|I1|`, `|I2|`, `|x|` over one oscillation period starting at the tail horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailValues {
    pub i1: f64,
    pub i2: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    /// `c = 0`: the pair sits on the imaginary axis and nothing decays.
    pub undamped: bool,
    pub rho: Option<f64>,
    pub horizon: Option<f64>,
    pub amplitude_scale: f64,
    pub tail: Option<TailValues>,
    pub tail_ok: Option<bool>,
    pub envelope_decreasing: Option<bool>,
}

impl BoundReport {
    pub fn bounds_satisfied(&self) -> bool {
        self.rows.iter().all(|r| r.ok1 && r.ok2)
    }

    pub fn all_satisfied(&self) -> bool {
        self.bounds_satisfied()
            && self.tail_ok != Some(false)
            && self.envelope_decreasing != Some(false)
    }
}

/// Scale `max(|x0|, |v0|/β, |W| c/k)` against which tail values are judged.
pub fn amplitude_scale(
    params: &OscillatorParams,
    eig: &EigenSolution,
    state: &InitialState,
    weight: HistoryWeight,
) -> f64 {
    let beta = eig.beta().unwrap_or(f64::INFINITY);
    state
        .x0
        .abs()
        .max(state.v0.abs() / beta)
        .max(weight.value().abs() * params.c() / params.k())
        + AMPLITUDE_FLOOR
}

/// Evaluates the bounds on the grid `0, dt, ..., t_end` and checks that the
/// response recedes: the envelope of `|x|` shrinks window by window after
/// `10/ρ`, and `|I1|`, `|I2|`, `|x|` are negligible at `30/ρ`.
pub fn verify_decay(
    params: &OscillatorParams,
    state: &InitialState,
    history: &HistoryProfile,
    t_end: f64,
    dt: f64,
) -> Result<BoundReport> {
    let eig = solve_eigen(params)?;
    require_oscillatory(&eig)?;
    let steps = grid_steps(t_end, dt)?;
    let weight = history_weight(&params.kernel(), history);
    let sup = history.sup_norm();
    let duration = history.duration();

    let row = |t: f64| -> Result<BoundRow> {
        let (i1, i2) = split_with_weight(params, &eig, weight, t)?;
        let (b1, b2) = decay_bounds(params, &eig, sup, duration, t)?;
        Ok(BoundRow {
            t,
            i1_abs: i1.abs(),
            b1,
            i2_abs: i2.abs(),
            b2,
            ok1: i1.abs() <= b1 + BOUND_SLACK,
            ok2: i2.abs() <= b2 + BOUND_SLACK,
        })
    };
    let rows = (0..=steps)
        .map(|n| row(n as f64 * dt))
        .collect::<Result<Vec<_>>>()?;

    let scale = amplitude_scale(params, &eig, state, weight);
    let undamped = params.c() == 0.0;
    if undamped {
        return Ok(BoundReport {
            rows,
            undamped,
            rho: None,
            horizon: None,
            amplitude_scale: scale,
            tail: None,
            tail_ok: None,
            envelope_decreasing: None,
        });
    }

    let response = InitializationResponse::with_weight(params, &eig, state, weight);
    let (alpha, beta, gamma) = (eig.alpha().unwrap(), eig.beta().unwrap(), eig.gamma().unwrap());
    let rho = alpha.min(gamma).min(params.mu());
    let horizon = TAIL_HORIZON / rho;
    let period = 2.0 * PI / beta;

    let window_max = |start: f64, f: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
        (0..=WINDOW_POINTS).try_fold(0.0f64, |acc, i| {
            let t = start + period * i as f64 / WINDOW_POINTS as f64;
            Ok(acc.max(f(t)?.abs()))
        })
    };
    let x_at = |t: f64| response.displacement(t);

    let tail = TailValues {
        i1: window_max(horizon, &|t| Ok(split_with_weight(params, &eig, weight, t)?.0))?,
        i2: window_max(horizon, &|t| Ok(split_with_weight(params, &eig, weight, t)?.1))?,
        x: window_max(horizon, &x_at)?,
    };
    let limit = TAIL_TOLERANCE * scale;
    let tail_ok = tail.i1 < limit && tail.i2 < limit && tail.x < limit;

    let mut envelope_decreasing = true;
    // the first comparison window must not reach back before t = 0
    let mut start = (ENVELOPE_START / rho).max(period);
    let mut previous = window_max(start - period, &x_at)?;
    while start + period <= horizon {
        let current = window_max(start, &x_at)?;
        if !(current < previous || (current == 0.0 && previous == 0.0)) {
            envelope_decreasing = false;
            break;
        }
        previous = current;
        start += period;
    }

    Ok(BoundReport {
        rows,
        undamped,
        rho: Some(rho),
        horizon: Some(horizon),
        amplitude_scale: scale,
        tail: Some(tail),
        tail_ok: Some(tail_ok),
        envelope_decreasing: Some(envelope_decreasing),
    })
}
