//! Initialization response of the exponentially damped oscillator.
//!
//! The free response after `t = 0` is
//!
//! ```text
//! x(t) = -c ∫_0^t h(t-τ) ψ(τ) dτ + m x0 h'(t) + cμ x0 ∫_0^t h(t-τ) e^{-μτ} dτ + m v0 h(t)
//! ```
//!
//! Because `ψ(τ) = W e^{-μτ}`, the first and third terms share the convolution
//! `E(t) = ∫_0^t h(t-τ) e^{-μτ} dτ` and combine to `c (μ x0 - W) E(t)`.

use num_complex::Complex64;

use crate::eigen::{check_time, solve_eigen, EigenSolution};
use crate::error::{invalid, Error, Result};
use crate::history::{history_weight, HistoryWeight};
use crate::model::{HistoryProfile, InitialState, OscillatorParams};

/// `(e^{st} - e^{-μt}) / (s + μ)`, continuous through `s = -μ` where it equals `t e^{-μt}`.
pub(crate) fn exp_diff_quotient(s: Complex64, mu: f64, t: f64) -> Complex64 {
    let z = (s + mu) * t;
    if z.norm() < 0.5 {
        // e^{-μt} t (e^z - 1)/z by its Taylor series
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..=20 {
            sum += term;
            term *= z / (k + 1) as f64;
        }
        sum * t * (-mu * t).exp()
    } else {
        ((s * t).exp() - (-mu * t).exp()) / (s + mu)
    }
}

/// `E(t) = ∫_0^t h(t-τ) e^{-rate τ} dτ = Σ R_j (e^{s_j t} - e^{-rate t}) / (s_j + rate)`.
pub fn exp_convolution(eig: &EigenSolution, rate: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(eig.modal_sum(|s| exp_diff_quotient(s, rate, t)))
}

/// The four parts of the initialization response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseTerms {
    /// `-c ∫ h(t-τ) ψ(τ) dτ`
    pub history: f64,
    /// `m x0 h'(t)`
    pub displacement: f64,
    /// `cμ x0 ∫ h(t-τ) e^{-μτ} dτ`
    pub kernel: f64,
    /// `m v0 h(t)`
    pub velocity: f64,
}

impl ResponseTerms {
    pub fn total(&self) -> f64 {
        self.history + self.displacement + self.kernel + self.velocity
    }
}

/// One grid point of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub xdot: f64,
    pub psi: f64,
}

/// Uniformly sampled `(t, x, x', ψ)` records starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn t0(&self) -> f64 {
        0.0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }
}

/// Number of steps of the uniform grid `0, dt, ..., n dt` approximating `[0, t_end]`.
pub fn grid_steps(t_end: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("dt", format!("must be finite and > 0, got {dt}")));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(invalid("t_end", format!("must be finite and > 0, got {t_end}")));
    }
    let steps = (t_end / dt).round();
    if steps < 1.0 {
        return Err(Error::Grid(format!("t_end {t_end} is shorter than one step {dt}")));
    }
    if steps > 1e9 {
        return Err(Error::Grid(format!("{steps} steps requested")));
    }
    Ok(steps as usize)
}

/// External force `f(t)` acting for `t >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Forcing {
    None,
    Constant(f64),
    Sine {
        amplitude: f64,
        omega: f64,
        phase: f64,
    },
    Samples(SampledSignal),
}

impl Forcing {
    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Forcing::None => Ok(0.0),
            Forcing::Constant(v) => Ok(*v),
            Forcing::Sine {
                amplitude,
                omega,
                phase,
            } => Ok(amplitude * (omega * t + phase).sin()),
            Forcing::Samples(signal) => signal.eval(t),
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Forcing::None)
    }
}

/// Piecewise-linear signal through `(t_i, f_i)` with strictly increasing `t_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(invalid("forcing", "time and value columns differ in length"));
        }
        if times.len() < 2 {
            return Err(invalid("forcing", "at least two samples required"));
        }
        if times.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(invalid("forcing", "non-finite sample"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("forcing", "sample times must be strictly increasing"));
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let (first, last) = (self.times[0], self.times[self.times.len() - 1]);
        let slack = 1e-12 * (last - first);
        if !(t >= first - slack && t <= last + slack) {
            return Err(Error::Domain {
                t,
                domain: format!("[{first}, {last}] (forcing samples)"),
            });
        }
        let i = self
            .times
            .partition_point(|&ti| ti <= t)
            .clamp(1, self.times.len() - 1);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let frac = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        Ok(self.values[i - 1] + (self.values[i] - self.values[i - 1]) * frac)
    }
}

/// Closed-form initialization response for one scenario.
#[derive(Debug, Clone, Copy)]
pub struct InitializationResponse {
    params: OscillatorParams,
    eig: EigenSolution,
    state: InitialState,
    weight: HistoryWeight,
}

impl InitializationResponse {
    pub fn new(
        params: &OscillatorParams,
        state: &InitialState,
        history: &HistoryProfile,
    ) -> Result<Self> {
        let eig = solve_eigen(params)?;
        let weight = history_weight(&params.kernel(), history);
        Ok(Self::with_weight(params, &eig, state, weight))
    }

    pub fn with_weight(
        params: &OscillatorParams,
        eig: &EigenSolution,
        state: &InitialState,
        weight: HistoryWeight,
    ) -> Self {
        Self {
            params: *params,
            eig: *eig,
            state: *state,
            weight,
        }
    }

    pub fn eigen(&self) -> &EigenSolution {
        &self.eig
    }

    pub fn weight(&self) -> HistoryWeight {
        self.weight
    }

    /// Coefficient `c (μ x0 - W)` of the merged convolution term.
    fn convolution_coefficient(&self) -> f64 {
        let p = &self.params;
        p.c() * (p.mu() * self.state.x0 - self.weight.value())
    }

    pub fn displacement(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 {
            // h(0) = 0, m h'(0) = 1, E(0) = 0: the sum reduces to x0 up to rounding
            return Ok(self.state.x0);
        }
        let m = self.params.m();
        let conv = exp_convolution(&self.eig, self.params.mu(), t)?;
        Ok(m * self.state.x0 * self.eig.impulse_response_derivative(t)?
            + m * self.state.v0 * self.eig.impulse_response(t)?
            + self.convolution_coefficient() * conv)
    }

    /// `x'(t)`, using `E'(t) = h(t) - μ E(t)`.
    pub fn velocity(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 {
            return Ok(self.state.v0);
        }
        let m = self.params.m();
        let h = self.eig.impulse_response(t)?;
        let conv = exp_convolution(&self.eig, self.params.mu(), t)?;
        let conv_rate = h - self.params.mu() * conv;
        Ok(m * self.state.x0 * self.eig.impulse_response_second_derivative(t)?
            + m * self.state.v0 * self.eig.impulse_response_derivative(t)?
            + self.convolution_coefficient() * conv_rate)
    }

    pub fn psi(&self, t: f64) -> Result<f64> {
        self.weight.psi(&self.params.kernel(), t)
    }

    pub fn terms(&self, t: f64) -> Result<ResponseTerms> {
        let p = &self.params;
        let m = p.m();
        let conv = exp_convolution(&self.eig, p.mu(), t)?;
        let (history, kernel) = if p.c() == 0.0 {
            (0.0, 0.0)
        } else {
            (
                -p.c() * self.weight.value() * conv,
                p.c() * p.mu() * self.state.x0 * conv,
            )
        };
        Ok(ResponseTerms {
            history,
            displacement: m * self.state.x0 * self.eig.impulse_response_derivative(t)?,
            kernel,
            velocity: m * self.state.v0 * self.eig.impulse_response(t)?,
        })
    }

    pub fn trajectory(&self, t_end: f64, dt: f64) -> Result<Trajectory> {
        let steps = grid_steps(t_end, dt)?;
        let samples = (0..=steps)
            .map(|i| {
                let t = i as f64 * dt;
                Ok(TrajectorySample {
                    t,
                    x: self.displacement(t)?,
                    xdot: self.velocity(t)?,
                    psi: self.psi(t)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory { dt, samples })
    }
}

pub fn initialization_response(
    params: &OscillatorParams,
    state: &InitialState,
    history: &HistoryProfile,
    t: f64,
) -> Result<f64> {
    InitializationResponse::new(params, state, history)?.displacement(t)
}

pub fn response_terms(
    params: &OscillatorParams,
    state: &InitialState,
    history: &HistoryProfile,
    t: f64,
) -> Result<ResponseTerms> {
    InitializationResponse::new(params, state, history)?.terms(t)
}

/// Initialization response plus `∫_0^t h(t-τ) f(τ) dτ`, the latter by the
/// trapezoid rule on the output grid.
///
/// Each exponential mode of `h` is accumulated recursively, which reproduces
/// the direct trapezoid sum in O(n) work.
pub fn forced_response(
    params: &OscillatorParams,
    state: &InitialState,
    history: &HistoryProfile,
    forcing: &Forcing,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    let free = InitializationResponse::new(params, state, history)?;
    let mut trajectory = free.trajectory(t_end, dt)?;
    if forcing.is_none() {
        return Ok(trajectory);
    }
    let eig = free.eigen();
    let roots = eig.roots();
    let residues = eig.residues();
    let decay = roots.map(|s| (s * dt).exp());

    let f0 = forcing.eval(0.0)?;
    let mut running = [Complex64::new(f0, 0.0); 3];
    for (n, sample) in trajectory.samples.iter_mut().enumerate().skip(1) {
        let fn_ = forcing.eval(sample.t)?;
        let mut x = Complex64::new(0.0, 0.0);
        let mut xdot = Complex64::new(0.0, 0.0);
        for j in 0..3 {
            running[j] = decay[j] * running[j] + fn_;
            let trap = dt * (running[j] - 0.5 * (roots[j] * (n as f64 * dt)).exp() * f0 - 0.5 * fn_);
            x += residues[j] * trap;
            xdot += residues[j] * roots[j] * trap;
        }
        sample.x += x.re;
        sample.xdot += xdot.re;
    }
    Ok(trajectory)
}
