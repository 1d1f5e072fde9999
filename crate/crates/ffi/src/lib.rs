//! C ABI over the `tribloch` core.
//!
//! Every fallible function returns a [`TriblochStatus`]; on failure the
//! message is kept per thread and can be read with
//! [`tribloch_last_error_message`]. Objects are opaque handles released with
//! the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tribloch::dynamics::{self, FieldKind, FieldSpec, IntegratorConfig, Method, TimeSeries};
use tribloch::measures::Channel;
use tribloch::pauli::{initial_state, StateName};
use tribloch::{CouplingConstants, Error, RTensor};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriblochStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Validation = 4,
    Physicality = 5,
    Accuracy = 6,
    OracleMismatch = 7,
    Parse = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriblochFieldKind {
    Resonant = 0,
    NonResonant = 1,
    ConstantZ = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriblochMethod {
    Rk4 = 0,
    Rk45 = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriblochFieldSpec {
    pub kind: TriblochFieldKind,
    pub omega0: f64,
    pub omega1: f64,
    /// Field multipliers for qubits e, p, n.
    pub multipliers: [f64; 3],
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriblochCouplings {
    pub j_ep: f64,
    pub j_en: f64,
    pub j_pn: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriblochIntegratorConfig {
    pub tau_max: f64,
    pub dt: f64,
    pub sample_every: usize,
    pub method: TriblochMethod,
    /// Local error tolerance of the adaptive method.
    pub tolerance: f64,
    pub drift_tolerance: f64,
}

/// Opaque three-qubit state (64 real coefficients).
pub struct TriblochState {
    inner: RTensor,
}

/// Opaque sampled trajectory.
pub struct TriblochTrajectory {
    inner: TimeSeries,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &Error) -> TriblochStatus {
    match err {
        Error::Domain(_) => TriblochStatus::Domain,
        Error::Validation(_) => TriblochStatus::Validation,
        Error::Physicality(_) => TriblochStatus::Physicality,
        Error::Accuracy { .. } => TriblochStatus::Accuracy,
        Error::OracleMismatch { .. } => TriblochStatus::OracleMismatch,
        Error::Parse { .. } => TriblochStatus::Parse,
        Error::Io(_) => TriblochStatus::Io,
    }
}

struct Fail(TriblochStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TriblochStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(TriblochStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TriblochStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TriblochStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TriblochStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_slot<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

fn index(i: usize) -> Result<usize, Fail> {
    if i > 3 {
        Err(invalid(format!("index {i} outside 0..=3")))
    } else {
        Ok(i)
    }
}

fn field_spec(f: &TriblochFieldSpec) -> FieldSpec {
    let kind = match f.kind {
        TriblochFieldKind::Resonant => FieldKind::Resonant,
        TriblochFieldKind::NonResonant => FieldKind::NonResonant,
        TriblochFieldKind::ConstantZ => FieldKind::ConstantZ,
    };
    FieldSpec { kind, omega0: f.omega0, omega1: f.omega1, multipliers: f.multipliers }
}

fn integrator_config(c: &TriblochIntegratorConfig) -> IntegratorConfig {
    IntegratorConfig {
        tau_max: c.tau_max,
        dt: c.dt,
        sample_every: c.sample_every,
        method: match c.method {
            TriblochMethod::Rk4 => Method::Rk4,
            TriblochMethod::Rk45 => Method::Rk45,
        },
        tolerance: c.tolerance,
        drift_tolerance: c.drift_tolerance,
    }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn tribloch_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tribloch_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn tribloch_field_spec_default(kind: TriblochFieldKind) -> TriblochFieldSpec {
    TriblochFieldSpec {
        kind,
        omega0: FieldSpec::DEFAULT_OMEGA0,
        omega1: FieldSpec::DEFAULT_OMEGA1,
        multipliers: FieldSpec::DEFAULT_MULTIPLIERS,
    }
}

#[no_mangle]
pub extern "C" fn tribloch_couplings_reference() -> TriblochCouplings {
    let j = CouplingConstants::reference();
    TriblochCouplings { j_ep: j.j_ep, j_en: j.j_en, j_pn: j.j_pn }
}

#[no_mangle]
pub extern "C" fn tribloch_integrator_config_default() -> TriblochIntegratorConfig {
    let c = IntegratorConfig::default();
    TriblochIntegratorConfig {
        tau_max: c.tau_max,
        dt: c.dt,
        sample_every: c.sample_every,
        method: match c.method {
            Method::Rk4 => TriblochMethod::Rk4,
            Method::Rk45 => TriblochMethod::Rk45,
        },
        tolerance: c.tolerance,
        drift_tolerance: c.drift_tolerance,
    }
}

/// Creates a named initial state (`S`, `BS`, `GHZ`, `W`, `V`, `Mix`,
/// `Polarized`). `x` is used only for `Mix`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tribloch_state_initial(
    name: *const c_char,
    x: f64,
    out: *mut *mut TriblochState,
) -> TriblochStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let name: StateName = str_arg(name, "name")?.parse()?;
        let x = (name == StateName::Mix).then_some(x);
        let (_, r) = initial_state(name, x)?;
        *out = Box::into_raw(Box::new(TriblochState { inner: r }));
        Ok(())
    })
}

/// Creates a state from 64 coefficients ordered `16·α + 4·β + γ`.
///
/// # Safety
/// `coeffs` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tribloch_state_from_coeffs(
    coeffs: *const f64,
    len: usize,
    out: *mut *mut TriblochState,
) -> TriblochStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        if coeffs.is_null() {
            return Err(null("coeffs"));
        }
        let r = RTensor::from_slice(std::slice::from_raw_parts(coeffs, len))?;
        *out = Box::into_raw(Box::new(TriblochState { inner: r }));
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tribloch_state_free(state: *mut TriblochState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tribloch_state_get(
    state: *const TriblochState,
    alpha: usize,
    beta: usize,
    gamma: usize,
    out: *mut f64,
) -> TriblochStatus {
    guard(|| {
        let s = borrow(state, "state")?;
        let out = out_slot(out, "out")?;
        *out = s.inner.get(index(alpha)?, index(beta)?, index(gamma)?);
        Ok(())
    })
}

/// Sets one coefficient. `R000` is fixed at 1 and cannot be changed.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tribloch_state_set(
    state: *mut TriblochState,
    alpha: usize,
    beta: usize,
    gamma: usize,
    value: f64,
) -> TriblochStatus {
    guard(|| {
        let s = state.as_mut().ok_or_else(|| null("state"))?;
        let (a, b, c) = (index(alpha)?, index(beta)?, index(gamma)?);
        if (a, b, c) == (0, 0, 0) {
            return Err(invalid("R000 is fixed at 1"));
        }
        let mut coeffs = *s.inner.coeffs();
        coeffs[16 * a + 4 * b + c] = value;
        s.inner = RTensor::from_coeffs(coeffs)?;
        Ok(())
    })
}

/// Copies all 64 coefficients into `out`.
///
/// # Safety
/// `state` must be a live handle; `out` must point to 64 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tribloch_state_coeffs(state: *const TriblochState, out: *mut f64) -> TriblochStatus {
    guard(|| {
        let s = borrow(state, "state")?;
        if out.is_null() {
            return Err(null("out"));
        }
        std::ptr::copy_nonoverlapping(s.inner.coeffs().as_ptr(), out, 64);
        Ok(())
    })
}

/// Evaluates a named measure (`m_sm`, `c3`, `c3_formal`, `m_b`, `m_k`,
/// `m_l`, `b`, `p_flip`, `p_flip_e`, `rho11`, `rho88`).
///
/// # Safety
/// `state` must be a live handle, `channel` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tribloch_state_measure(
    state: *const TriblochState,
    channel: *const c_char,
    out: *mut f64,
) -> TriblochStatus {
    guard(|| {
        let s = borrow(state, "state")?;
        let ch: Channel = str_arg(channel, "channel")?.parse()?;
        let out = out_slot(out, "out")?;
        *out = ch.evaluate(&s.inner)?;
        Ok(())
    })
}

/// Integrates the coefficient equations from `state`.
///
/// # Safety
/// All pointers must be valid; `out` receives a new trajectory handle.
#[no_mangle]
pub unsafe extern "C" fn tribloch_integrate(
    state: *const TriblochState,
    field: *const TriblochFieldSpec,
    couplings: *const TriblochCouplings,
    config: *const TriblochIntegratorConfig,
    out: *mut *mut TriblochTrajectory,
) -> TriblochStatus {
    guard(|| {
        let s = borrow(state, "state")?;
        let f = borrow(field, "field")?;
        let j = borrow(couplings, "couplings")?;
        let c = borrow(config, "config")?;
        let out = out_slot(out, "out")?;
        let j = CouplingConstants::new(j.j_ep, j.j_en, j.j_pn);
        let series = dynamics::integrate(&s.inner, &field_spec(f), &j, &integrator_config(c))?;
        *out = Box::into_raw(Box::new(TriblochTrajectory { inner: series }));
        Ok(())
    })
}

/// # Safety
/// `traj` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tribloch_trajectory_free(traj: *mut TriblochTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Number of samples, or 0 for a null handle.
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tribloch_trajectory_len(traj: *const TriblochTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.inner.len())
}

/// # Safety
/// `traj` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tribloch_trajectory_tau(
    traj: *const TriblochTrajectory,
    i: usize,
    out: *mut f64,
) -> TriblochStatus {
    guard(|| {
        let t = borrow(traj, "trajectory")?;
        let out = out_slot(out, "out")?;
        *out = *t.inner.taus().get(i).ok_or_else(|| invalid(format!("sample {i} out of range")))?;
        Ok(())
    })
}

/// Copies sample `i` into a new state handle.
///
/// # Safety
/// `traj` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tribloch_trajectory_state(
    traj: *const TriblochTrajectory,
    i: usize,
    out: *mut *mut TriblochState,
) -> TriblochStatus {
    guard(|| {
        let t = borrow(traj, "trajectory")?;
        let out = out_slot(out, "out")?;
        let r = t.inner.states().get(i).ok_or_else(|| invalid(format!("sample {i} out of range")))?;
        *out = Box::into_raw(Box::new(TriblochState { inner: *r }));
        Ok(())
    })
}

/// Evaluates a named measure on every sample, writing `len` values.
///
/// # Safety
/// `traj` must be a live handle, `channel` a NUL-terminated string and `out`
/// must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tribloch_trajectory_measure(
    traj: *const TriblochTrajectory,
    channel: *const c_char,
    out: *mut f64,
    len: usize,
) -> TriblochStatus {
    guard(|| {
        let t = borrow(traj, "trajectory")?;
        let ch: Channel = str_arg(channel, "channel")?.parse()?;
        if out.is_null() {
            return Err(null("out"));
        }
        if len != t.inner.len() {
            return Err(invalid(format!("buffer holds {len} values, trajectory has {}", t.inner.len())));
        }
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (d, r) in dst.iter_mut().zip(t.inner.states()) {
            *d = ch.evaluate(r)?;
        }
        Ok(())
    })
}
