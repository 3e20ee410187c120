//! C interface to `nvosc`.
//!
//! Every function returns an [`NvoscStatus`]; results go through caller-owned
//! out-pointers. Handles are created by `*_new` functions and released with the
//! matching `*_free`. After a non-OK status, `nvosc_last_error_message` describes
//! the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nvosc::{
    history_weight, oracle, solve_eigen, verify_decay, EigenSolution, Error, Forcing, HistoryProfile,
    InitialState, InitializationResponse, OscillatorParams, Trajectory,
};

/// Result codes shared by all entry points.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NvoscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    DegenerateSpectrum = 4,
    NotOscillatory = 5,
    StepTooLarge = 6,
    Grid = 7,
    /// The output buffers cannot hold the requested grid; the required length is reported.
    BufferTooSmall = 8,
    Panic = 9,
}

/// Oscillator parameters together with their solved spectrum.
pub struct NvoscSystem {
    params: OscillatorParams,
    eig: EigenSolution,
}

/// Velocity history on `[-a, 0]`.
pub struct NvoscHistory {
    profile: HistoryProfile,
}

/// Outcome of `nvosc_verify_decay`. Tri-state flags use 1 = true, 0 = false,
/// -1 = not evaluated (undamped system).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NvoscDecaySummary {
    pub rows: usize,
    pub bounds_satisfied: bool,
    pub undamped: bool,
    pub tail_ok: i32,
    pub envelope_decreasing: i32,
    /// `min(alpha, gamma, mu)`, NaN when undamped.
    pub rho: f64,
    pub amplitude_scale: f64,
    /// Largest `|x|` over one period at the tail horizon, NaN when undamped.
    pub tail_x: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn status_of(err: &Error) -> NvoscStatus {
    match err {
        Error::InvalidParameter { .. } => NvoscStatus::InvalidArgument,
        Error::Domain { .. } => NvoscStatus::Domain,
        Error::DegenerateSpectrum(..) => NvoscStatus::DegenerateSpectrum,
        Error::NotOscillatory => NvoscStatus::NotOscillatory,
        Error::StepTooLarge { .. } => NvoscStatus::StepTooLarge,
        Error::Grid(_) => NvoscStatus::Grid,
    }
}

enum Failure {
    Status(NvoscStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::Core(err)
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(NvoscStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording the error message and containing panics.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> NvoscStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            NvoscStatus::Ok
        }
        Ok(Err(Failure::Status(status, message))) => {
            set_last_error(message);
            status
        }
        Ok(Err(Failure::Core(err))) => {
            set_last_error(err.to_string());
            status_of(&err)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            NvoscStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn system<'a>(sys: *const NvoscSystem) -> Result<&'a NvoscSystem, Failure> {
    sys.as_ref().ok_or_else(|| null("system"))
}

/// A null history pointer means a quiescent past.
unsafe fn history_or_quiet(history: *const NvoscHistory) -> HistoryProfile {
    history.as_ref().map_or_else(HistoryProfile::quiescent, |h| h.profile.clone())
}

unsafe fn slice<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

/// Message for the most recent failure on this thread, or null after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nvosc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Validates `m, k, mu > 0`, `c >= 0` and solves the characteristic cubic.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn nvosc_system_new(m: f64, c: f64, k: f64, mu: f64, out: *mut *mut NvoscSystem) -> NvoscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = OscillatorParams::new(m, c, k, mu)?;
        let eig = solve_eigen(&params)?;
        out.write(Box::into_raw(Box::new(NvoscSystem { params, eig })));
        Ok(())
    })
}

/// # Safety
/// `sys` must come from `nvosc_system_new` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nvosc_system_free(sys: *mut NvoscSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Writes the three roots; the complex pair comes first, positive imaginary part leading.
///
/// # Safety
/// `re` and `im` must each point to three writable doubles.
#[no_mangle]
pub unsafe extern "C" fn nvosc_system_roots(sys: *const NvoscSystem, re: *mut f64, im: *mut f64) -> NvoscStatus {
    guard(|| {
        let sys = system(sys)?;
        for (j, z) in sys.eig.roots().iter().enumerate() {
            write(re.wrapping_add(j), z.re, "re")?;
            write(im.wrapping_add(j), z.im, "im")?;
        }
        Ok(())
    })
}

/// Writes the residues matching the order of `nvosc_system_roots`.
///
/// # Safety
/// `re` and `im` must each point to three writable doubles.
#[no_mangle]
pub unsafe extern "C" fn nvosc_system_residues(sys: *const NvoscSystem, re: *mut f64, im: *mut f64) -> NvoscStatus {
    guard(|| {
        let sys = system(sys)?;
        for (j, z) in sys.eig.residues().iter().enumerate() {
            write(re.wrapping_add(j), z.re, "re")?;
            write(im.wrapping_add(j), z.im, "im")?;
        }
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nvosc_system_is_oscillatory(sys: *const NvoscSystem, out: *mut bool) -> NvoscStatus {
    guard(|| write(out, system(sys)?.eig.is_oscillatory(), "out"))
}

/// Impulse response `h(t)`, `t >= 0`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nvosc_impulse_response(sys: *const NvoscSystem, t: f64, out: *mut f64) -> NvoscStatus {
    guard(|| write(out, system(sys)?.eig.impulse_response(t)?, "out"))
}

unsafe fn new_history(out: *mut *mut NvoscHistory, make: impl FnOnce() -> nvosc::Result<HistoryProfile>) -> NvoscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let profile = make()?;
        out.write(Box::into_raw(Box::new(NvoscHistory { profile })));
        Ok(())
    })
}

/// `v(t) = value` on `[-a, 0]`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn nvosc_history_constant(a: f64, value: f64, out: *mut *mut NvoscHistory) -> NvoscStatus {
    new_history(out, || HistoryProfile::constant(a, value))
}

/// `v(t) = amplitude sin(omega t + phase)` on `[-a, 0]`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn nvosc_history_sine(
    a: f64,
    amplitude: f64,
    omega: f64,
    phase: f64,
    out: *mut *mut NvoscHistory,
) -> NvoscStatus {
    new_history(out, || HistoryProfile::sine(a, amplitude, omega, phase))
}

/// `v(t) = sum coefficients[n] t^n` on `[-a, 0]`.
///
/// # Safety
/// `coefficients` must point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nvosc_history_polynomial(
    a: f64,
    coefficients: *const f64,
    len: usize,
    out: *mut *mut NvoscHistory,
) -> NvoscStatus {
    let data = match slice(coefficients, len, "coefficients") {
        Ok(data) => data.to_vec(),
        Err(failure) => return guard(|| Err(failure)),
    };
    new_history(out, || HistoryProfile::polynomial(a, data))
}

/// Velocities at `len >= 2` equally spaced times from `-a` to `0`, linearly interpolated.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nvosc_history_samples(
    a: f64,
    values: *const f64,
    len: usize,
    out: *mut *mut NvoscHistory,
) -> NvoscStatus {
    let data = match slice(values, len, "values") {
        Ok(data) => data.to_vec(),
        Err(failure) => return guard(|| Err(failure)),
    };
    new_history(out, || HistoryProfile::samples(a, data))
}

/// # Safety
/// `history` must come from an `nvosc_history_*` constructor and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nvosc_history_free(history: *mut NvoscHistory) {
    if !history.is_null() {
        drop(Box::from_raw(history));
    }
}

/// Largest `|v|` on `[-a, 0]`.
///
/// # Safety
/// `history` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn nvosc_history_sup_norm(history: *const NvoscHistory, out: *mut f64) -> NvoscStatus {
    guard(|| {
        let history = history.as_ref().ok_or_else(|| null("history"))?;
        write(out, history.profile.sup_norm(), "out")
    })
}

/// History weight `W = mu * integral of e^{mu tau} v(tau)`; the initialization force is `W e^{-mu t}`.
///
/// # Safety
/// `sys` and `out` must be valid; `history` may be null for a quiescent past.
#[no_mangle]
pub unsafe extern "C" fn nvosc_history_weight(
    sys: *const NvoscSystem,
    history: *const NvoscHistory,
    out: *mut f64,
) -> NvoscStatus {
    guard(|| {
        let sys = system(sys)?;
        let w = history_weight(&sys.params.kernel(), &history_or_quiet(history));
        write(out, w.value(), "out")
    })
}

/// Closed-form free response `x(t)` and `x'(t)`.
///
/// # Safety
/// `sys`, `x` and `xdot` must be valid; `history` may be null.
#[no_mangle]
pub unsafe extern "C" fn nvosc_response(
    sys: *const NvoscSystem,
    history: *const NvoscHistory,
    x0: f64,
    v0: f64,
    t: f64,
    x: *mut f64,
    xdot: *mut f64,
) -> NvoscStatus {
    guard(|| {
        let sys = system(sys)?;
        let state = InitialState::new(x0, v0)?;
        let weight = history_weight(&sys.params.kernel(), &history_or_quiet(history));
        let response = InitializationResponse::with_weight(&sys.params, &sys.eig, &state, weight);
        write(x, response.displacement(t)?, "x")?;
        write(xdot, response.velocity(t)?, "xdot")
    })
}

/// Number of grid points `0, dt, ..., t_end` used by the trajectory functions.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nvosc_grid_len(t_end: f64, dt: f64, out: *mut usize) -> NvoscStatus {
    guard(|| write(out, nvosc::response::grid_steps(t_end, dt)? + 1, "out"))
}

/// Copies `trajectory` into the caller's columns.
unsafe fn export(
    trajectory: &Trajectory,
    t: *mut f64,
    x: *mut f64,
    xdot: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> Result<(), Failure> {
    let n = trajectory.len();
    write(written, n, "written")?;
    if n > capacity {
        return Err(Failure::Status(
            NvoscStatus::BufferTooSmall,
            format!("grid has {n} points, buffers hold {capacity}"),
        ));
    }
    if t.is_null() || x.is_null() || xdot.is_null() {
        return Err(null("output column"));
    }
    for (i, s) in trajectory.samples.iter().enumerate() {
        t.add(i).write(s.t);
        x.add(i).write(s.x);
        xdot.add(i).write(s.xdot);
    }
    Ok(())
}

/// Closed-form trajectory on `0, dt, ..., t_end`. `written` receives the point
/// count even when the buffers are too small.
///
/// # Safety
/// `t`, `x`, `xdot` must each hold `capacity` doubles; `written` must be valid;
/// `history` may be null.
#[no_mangle]
pub unsafe extern "C" fn nvosc_trajectory(
    sys: *const NvoscSystem,
    history: *const NvoscHistory,
    x0: f64,
    v0: f64,
    t_end: f64,
    dt: f64,
    t: *mut f64,
    x: *mut f64,
    xdot: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> NvoscStatus {
    guard(|| {
        let sys = system(sys)?;
        let state = InitialState::new(x0, v0)?;
        let weight = history_weight(&sys.params.kernel(), &history_or_quiet(history));
        let response = InitializationResponse::with_weight(&sys.params, &sys.eig, &state, weight);
        export(&response.trajectory(t_end, dt)?, t, x, xdot, capacity, written)
    })
}

/// Runge-Kutta reference trajectory, same layout as `nvosc_trajectory`.
///
/// # Safety
/// As for `nvosc_trajectory`.
#[no_mangle]
pub unsafe extern "C" fn nvosc_oracle_trajectory(
    sys: *const NvoscSystem,
    history: *const NvoscHistory,
    x0: f64,
    v0: f64,
    t_end: f64,
    dt: f64,
    t: *mut f64,
    x: *mut f64,
    xdot: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> NvoscStatus {
    guard(|| {
        let sys = system(sys)?;
        let state = InitialState::new(x0, v0)?;
        let run = oracle::integrate(&sys.params, &state, &history_or_quiet(history), &Forcing::None, t_end, dt)?;
        export(&run.trajectory, t, x, xdot, capacity, written)
    })
}

/// Checks the decay bounds on the grid and the tail behaviour.
///
/// # Safety
/// `sys` and `out` must be valid; `history` may be null.
#[no_mangle]
pub unsafe extern "C" fn nvosc_verify_decay(
    sys: *const NvoscSystem,
    history: *const NvoscHistory,
    x0: f64,
    v0: f64,
    t_end: f64,
    dt: f64,
    out: *mut NvoscDecaySummary,
) -> NvoscStatus {
    guard(|| {
        let sys = system(sys)?;
        let state = InitialState::new(x0, v0)?;
        let report = verify_decay(&sys.params, &state, &history_or_quiet(history), t_end, dt)?;
        let flag = |v: Option<bool>| v.map_or(-1, i32::from);
        let summary = NvoscDecaySummary {
            rows: report.rows.len(),
            bounds_satisfied: report.bounds_satisfied(),
            undamped: report.undamped,
            tail_ok: flag(report.tail_ok),
            envelope_decreasing: flag(report.envelope_decreasing),
            rho: report.rho.unwrap_or(f64::NAN),
            amplitude_scale: report.amplitude_scale,
            tail_x: report.tail.map_or(f64::NAN, |t| t.x),
        };
        write(out, summary, "out")
    })
}
