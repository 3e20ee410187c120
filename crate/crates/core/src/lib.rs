//! Single-degree-of-freedom oscillators with exponential hereditary damping.
//!
//! The equation of motion
//!
//! ```text
//! m x''(t) + c ∫_{-a}^{t} μ e^{-μ(t-τ)} x'(τ) dτ + k x(t) = f(t),   t > 0
//! ```
//!
//! needs, besides `x(0)` and `x'(0)`, the velocity history on `[-a, 0]`. The
//! crate computes the spectrum and pole-residue impulse response, the
//! closed-form initialization response driven by the history, the decay bounds
//! on the history-driven part, and an independent Runge-Kutta reference
//! solution used to cross-check all of them.

pub mod bounds;
pub mod cli;
pub mod config;
pub mod eigen;
pub mod error;
pub mod history;
pub mod model;
pub mod oracle;
mod poly;
pub mod response;

pub use bounds::{decay_bounds, split_history_term, verify_decay, BoundReport, BoundRow};
pub use eigen::{characteristic_poly, solve_eigen, CharacteristicPolynomial, EigenSolution};
pub use error::{Error, Result};
pub use history::{history_weight, psi, HistoryWeight};
pub use model::{ExponentialKernel, HistoryProfile, HistoryShape, InitialState, OscillatorParams};
pub use response::{
    exp_convolution, forced_response, initialization_response, response_terms, Forcing,
    InitializationResponse, ResponseTerms, SampledSignal, Trajectory, TrajectorySample,
};
