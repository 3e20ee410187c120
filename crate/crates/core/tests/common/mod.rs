//! Helpers shared by the integration tests.

#![allow(dead_code)]

use nvosc::oracle::{integrate_state, AugmentedState};
use nvosc::{Forcing, OscillatorParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Draws `exp(U(ln lo, ln hi))`.
pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Adaptive Simpson quadrature on `[a, b]` to absolute tolerance `tol`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Impulse response from the time-domain integrator: unit impulse means
/// `x(0) = 0`, `x'(0) = 1/m`, no history. Calls `visit(t, x)` at every step,
/// integrating in chunks so long horizons do not hold the whole trajectory.
pub fn impulse_surrogate(params: &OscillatorParams, t_end: f64, dt: f64, mut visit: impl FnMut(f64, f64)) {
    const CHUNK: usize = 100_000;
    let total = (t_end / dt).round() as usize;
    let mut state = AugmentedState { x: 0.0, v: 1.0 / params.m(), y: 0.0 };
    let mut done = 0;
    while done < total {
        let steps = CHUNK.min(total - done);
        let run = integrate_state(params, state, 0.0, &Forcing::None, steps as f64 * dt, dt).unwrap();
        let skip = usize::from(done > 0);
        for s in &run.trajectory.samples[skip..] {
            visit(done as f64 * dt + s.t, s.x);
        }
        let last = run.trajectory.samples.last().unwrap();
        state = AugmentedState { x: last.x, v: last.xdot, y: *run.internal.last().unwrap() };
        done += steps;
    }
}
