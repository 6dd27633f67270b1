//! C ABI over `mana_lab`.
//!
//! States are opaque handles created by the `ml_state_*` constructors and
//! released with [`ml_state_free`]. Every fallible call returns an
//! [`MlStatus`]; on failure [`ml_last_error_message`] describes the error
//! for the calling thread. All logarithms are natural.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mana_lab::circuits::{beamsplitter, BeamsplitterSpec};
use mana_lab::error::Error;
use mana_lab::measures;
use mana_lab::phasespace::{wigner, PrimeDim};
use mana_lab::states::{basis, named_state, noisy_mix, parse_state_json, tensor, DensityState};

/// Opaque state handle.
pub struct MlState {
    rho: DensityState,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidDimension = 3,
    InvalidState = 4,
    InvalidArgument = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(MlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NotOddPrime(_)
            | Error::DimensionTooLarge(..)
            | Error::DimensionMismatch(_)
            | Error::NotBipartite(_) => MlStatus::InvalidDimension,
            Error::InvalidState(_)
            | Error::NegativeEigenvalue(_)
            | Error::ImaginaryResidue(_)
            | Error::Format(_) => MlStatus::InvalidState,
            _ => MlStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MlStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MlStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(MlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(p: *const MlState) -> Result<&'a DensityState, Failure> {
    p.as_ref().map(|s| &s.rho).ok_or_else(|| null("state"))
}

unsafe fn slice_arg<'a>(p: *const f64, n: usize) -> Result<&'a [f64], Failure> {
    match (p.is_null(), n) {
        (_, 0) => Ok(&[]),
        (true, _) => Err(null("params")),
        (false, n) => Ok(std::slice::from_raw_parts(p, n)),
    }
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = value;
    Ok(())
}

unsafe fn put_state(out: *mut *mut MlState, rho: DensityState) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(MlState { rho }));
    Ok(())
}

/// Named pure state (`strange`, `norrell`, `t`, `h`, `phi_lambda`,
/// `psi_theta`, `max_coherent`, `basis`). `params` may be null when
/// `n_params` is 0.
///
/// # Safety
/// `name` must be a nul-terminated string, `params` must point to
/// `n_params` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_state_named(
    name: *const c_char,
    params: *const f64,
    n_params: usize,
    out: *mut *mut MlState,
) -> MlStatus {
    guard(|| {
        let psi = named_state(text(name, "name")?, slice_arg(params, n_params)?)?;
        put_state(out, DensityState::pure(&psi)?)
    })
}

/// `p|ψ⟩⟨ψ| + (1−p)·1/d` for a named pure state.
///
/// # Safety
/// As for [`ml_state_named`].
#[no_mangle]
pub unsafe extern "C" fn ml_state_noisy(
    name: *const c_char,
    params: *const f64,
    n_params: usize,
    p: f64,
    out: *mut *mut MlState,
) -> MlStatus {
    guard(|| {
        let psi = named_state(text(name, "name")?, slice_arg(params, n_params)?)?;
        put_state(out, noisy_mix(&psi, p)?)
    })
}

/// State from the JSON interchange document
/// `{"dims": [...], "kind": "pure"|"mixed", "data": ...}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_state_from_json(
    json: *const c_char,
    out: *mut *mut MlState,
) -> MlStatus {
    guard(|| {
        let rho = parse_state_json(text(json, "json")?)?.into_density()?;
        put_state(out, rho)
    })
}

/// New handle holding `CSUM (ρ ⊗ |0⟩⟨0|) CSUM†` for a single-qudit `state`.
///
/// # Safety
/// `state` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_state_csum(state: *const MlState, out: *mut *mut MlState) -> MlStatus {
    guard(|| {
        let rho = handle(state)?;
        if rho.subsystems() != 1 {
            return Err(Failure(
                MlStatus::InvalidDimension,
                "CSUM needs a single-qudit input".into(),
            ));
        }
        let d = rho.dims()[0];
        let spec = BeamsplitterSpec::csum(PrimeDim::new(d as u64)?);
        let ancilla = DensityState::pure(&basis(d, 0))?;
        put_state(out, tensor(rho, &ancilla).evolve(&beamsplitter(&spec))?)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ml_state_free(state: *mut MlState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of subsystems and total Hilbert-space dimension.
///
/// # Safety
/// `state` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_state_shape(
    state: *const MlState,
    subsystems: *mut usize,
    total_dim: *mut usize,
) -> MlStatus {
    guard(|| {
        let rho = handle(state)?;
        put(subsystems, rho.subsystems())?;
        put(total_dim, rho.dims().iter().product())
    })
}

unsafe fn scalar(
    state: *const MlState,
    out: *mut f64,
    f: impl FnOnce(&DensityState) -> mana_lab::error::Result<f64>,
) -> MlStatus {
    guard(|| put(out, f(handle(state)?)?))
}

/// # Safety
/// `state` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_mana(state: *const MlState, out: *mut f64) -> MlStatus {
    scalar(state, out, measures::mana)
}

/// `Mana(ρ_ab) − Mana(ρ_a) − Mana(ρ_b)` of a two-qudit state.
///
/// # Safety
/// `state` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_mutual_mana(state: *const MlState, out: *mut f64) -> MlStatus {
    scalar(state, out, measures::mutual_mana)
}

/// Stabilizer Rényi entropy of order `alpha` (`alpha != 1`).
///
/// # Safety
/// `state` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_sre(state: *const MlState, alpha: f64, out: *mut f64) -> MlStatus {
    scalar(state, out, |rho| measures::sre_alpha(rho, alpha))
}

/// `Σ |tr(ρ D)|` over the Weyl operators (not logged).
///
/// # Safety
/// `state` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_l1_magic(state: *const MlState, out: *mut f64) -> MlStatus {
    scalar(state, out, measures::l1_magic)
}

/// # Safety
/// `state` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_mutual_information(state: *const MlState, out: *mut f64) -> MlStatus {
    scalar(state, out, measures::mutual_information)
}

/// Copies the Wigner function into `buf` in row-major `(k₁, l₁, k₂, l₂, …)`
/// order. `written` always receives the required length; when `len` is too
/// small nothing is copied and `ML_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `state` must be a live handle, `buf` must hold `len` doubles (or be null
/// when `len` is 0) and `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_wigner(
    state: *const MlState,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> MlStatus {
    guard(|| {
        let table = wigner(handle(state)?)?;
        let values = table.values();
        put(written, values.len())?;
        if len < values.len() {
            return Err(Failure(
                MlStatus::BufferTooSmall,
                format!("buffer holds {len} values, {} needed", values.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn ml_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ml_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
