//! C ABI over `walklab`.
//!
//! Objects are opaque handles created by `walk_*` constructors and released with the
//! matching `*_free`. Every fallible call returns a [`WalkStatus`]; on failure the
//! message is available from [`walk_last_error`] on the same thread. Panics never
//! cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use walklab::closed_forms::{build_initial, InitialKind, InitialSpec};
use walklab::evolution::{detect_period, evolve_torus, measure, return_probability_series};
use walklab::io::{certificate_to_json, state_from_json, state_to_csv, state_to_json};
use walklab::momentum::evolve_via_momentum;
use walklab::spectra::{constant_root_certificate, Verdict};
use walklab::{fourier_coin, grover_coin, Amplitude4, Coin, ShiftKind, TorusState, WalkError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotUnitary = 3,
    NotNormalized = 4,
    Parse = 5,
    Numerical = 6,
    Panic = 7,
}

pub const WALK_SHIFT_MS: u32 = 0;
pub const WALK_SHIFT_FF: u32 = 1;

pub const WALK_INIT_DELTA: u32 = 0;
pub const WALK_INIT_UNIFORM: u32 = 1;
pub const WALK_INIT_DIAGONAL: u32 = 2;

pub const WALK_ENGINE_POSITION: u32 = 0;
pub const WALK_ENGINE_MOMENTUM: u32 = 1;

/// Opaque coin handle.
pub struct WalkCoin(Coin);

/// Opaque position- or momentum-space state on the N×N torus.
pub struct WalkState(TorusState);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

fn fail(status: WalkStatus, msg: impl AsRef<str>) -> WalkStatus {
    set_error(msg.as_ref());
    status
}

fn status_of(e: &WalkError) -> WalkStatus {
    match e {
        WalkError::NotUnitary { .. } => WalkStatus::NotUnitary,
        WalkError::NotNormalized { .. } => WalkStatus::NotNormalized,
        WalkError::Parse(_) | WalkError::Json(_) => WalkStatus::Parse,
        WalkError::Eigen(_) | WalkError::BoundaryContact { .. } => WalkStatus::Numerical,
        _ => WalkStatus::InvalidArgument,
    }
}

/// Runs `f`, mapping errors and panics to a status.
fn guard(f: impl FnOnce() -> Result<(), WalkStatus>) -> WalkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            WalkStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(WalkStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, WalkStatus>;
}

impl<T> OrStatus<T> for walklab::Result<T> {
    fn or_status(self) -> Result<T, WalkStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, WalkStatus> {
    p.as_ref().ok_or_else(|| fail(WalkStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, WalkStatus> {
    p.as_mut().ok_or_else(|| fail(WalkStatus::NullPointer, format!("{what} is null")))
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, WalkStatus> {
    if p.is_null() {
        return Err(fail(WalkStatus::NullPointer, "string is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(WalkStatus::Parse, "string is not UTF-8"))
}

unsafe fn read_alpha(p: *const f64) -> Result<Amplitude4, WalkStatus> {
    if p.is_null() {
        return Err(fail(WalkStatus::NullPointer, "alpha is null"));
    }
    let mut reals = [0.0; 8];
    reals.copy_from_slice(std::slice::from_raw_parts(p, 8));
    Ok(Amplitude4::from_reals(reals))
}

fn shift_of(shift: u32) -> Result<ShiftKind, WalkStatus> {
    match shift {
        WALK_SHIFT_MS => Ok(ShiftKind::Moving),
        WALK_SHIFT_FF => Ok(ShiftKind::FlipFlop),
        other => Err(fail(WalkStatus::InvalidArgument, format!("unknown shift {other}"))),
    }
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON and CSV output contain no NUL").into_raw()
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message for the last failed call on this thread; empty after a success. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn walk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed, or be null.
#[no_mangle]
pub unsafe extern "C" fn walk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn walk_coin_fourier(shift: u32, out: *mut *mut WalkCoin) -> WalkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(WalkCoin(fourier_coin(shift_of(shift)?)));
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn walk_coin_grover(shift: u32, out: *mut *mut WalkCoin) -> WalkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(WalkCoin(grover_coin(shift_of(shift)?)));
        Ok(())
    })
}

/// Parses `{"shift":"ms"|"ff","matrix":[[[re,im],..],..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn walk_coin_from_json(json: *const c_char, out: *mut *mut WalkCoin) -> WalkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let coin = Coin::from_json(read_str(json)?).or_status()?;
        *out = boxed(WalkCoin(coin));
        Ok(())
    })
}

/// Writes the 4×4 coin row-major as 32 doubles (re, im pairs).
///
/// # Safety
/// `coin` must be a live handle and `out` valid for 32 doubles.
#[no_mangle]
pub unsafe extern "C" fn walk_coin_matrix(coin: *const WalkCoin, out: *mut f64) -> WalkStatus {
    guard(|| {
        let coin = deref(coin, "coin")?;
        if out.is_null() {
            return Err(fail(WalkStatus::NullPointer, "out is null"));
        }
        let out = std::slice::from_raw_parts_mut(out, 32);
        for r in 0..4 {
            for (c, z) in coin.0.row(r).iter().enumerate() {
                out[8 * r + 2 * c] = z.re;
                out[8 * r + 2 * c + 1] = z.im;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `coin` must come from this library and not have been freed, or be null.
#[no_mangle]
pub unsafe extern "C" fn walk_coin_free(coin: *mut WalkCoin) {
    if !coin.is_null() {
        drop(Box::from_raw(coin));
    }
}

/// Builds a normalised initial state from `alpha` (8 doubles: re1, im1, …, re4, im4).
///
/// # Safety
/// `alpha` must point to 8 doubles and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn walk_state_initial(
    kind: u32,
    alpha: *const f64,
    n_side: usize,
    out: *mut *mut WalkState,
) -> WalkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let kind = match kind {
            WALK_INIT_DELTA => InitialKind::DeltaOrigin,
            WALK_INIT_UNIFORM => InitialKind::Uniform,
            WALK_INIT_DIAGONAL => InitialKind::DiagonalUniform,
            other => return Err(fail(WalkStatus::InvalidArgument, format!("unknown initial kind {other}"))),
        };
        let spec = InitialSpec::new(kind, read_alpha(alpha)?).or_status()?;
        *out = boxed(WalkState(build_initial(&spec, n_side).or_status()?));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn walk_state_from_json(json: *const c_char, out: *mut *mut WalkState) -> WalkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(WalkState(state_from_json(read_str(json)?).or_status()?));
        Ok(())
    })
}

/// Serialises to JSON; release the result with [`walk_string_free`].
///
/// # Safety
/// `state` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn walk_state_to_json(state: *const WalkState, out: *mut *mut c_char) -> WalkStatus {
    guard(|| {
        let state = deref(state, "state")?;
        *out_ptr(out, "out")? = to_c_string(state_to_json(&state.0));
        Ok(())
    })
}

/// Serialises to CSV; release the result with [`walk_string_free`].
///
/// # Safety
/// `state` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn walk_state_to_csv(state: *const WalkState, out: *mut *mut c_char) -> WalkStatus {
    guard(|| {
        let state = deref(state, "state")?;
        *out_ptr(out, "out")? = to_c_string(state_to_csv(&state.0));
        Ok(())
    })
}

/// # Safety
/// `state` must come from this library and not have been freed, or be null.
#[no_mangle]
pub unsafe extern "C" fn walk_state_free(state: *mut WalkState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Lattice side N, or 0 for a null handle.
///
/// # Safety
/// `state` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn walk_state_size(state: *const WalkState) -> usize {
    state.as_ref().map_or(0, |s| s.0.n_side())
}

/// Writes Ψ(x1, x2) as 8 doubles.
///
/// # Safety
/// `state` must be a live handle and `out` valid for 8 doubles.
#[no_mangle]
pub unsafe extern "C" fn walk_state_amplitude(
    state: *const WalkState,
    x1: usize,
    x2: usize,
    out: *mut f64,
) -> WalkStatus {
    guard(|| {
        let state = deref(state, "state")?;
        let n = state.0.n_side();
        if x1 >= n || x2 >= n {
            return Err(fail(WalkStatus::InvalidArgument, format!("site ({x1},{x2}) outside {n}x{n}")));
        }
        if out.is_null() {
            return Err(fail(WalkStatus::NullPointer, "out is null"));
        }
        std::slice::from_raw_parts_mut(out, 8).copy_from_slice(&state.0.get(x1, x2).to_reals());
        Ok(())
    })
}

/// Writes the N² site probabilities row-major; `len` must equal N².
///
/// # Safety
/// `state` must be a live handle and `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn walk_state_measure(state: *const WalkState, out: *mut f64, len: usize) -> WalkStatus {
    guard(|| {
        let state = deref(state, "state")?;
        let m = measure(&state.0).or_status()?;
        if len != m.probs.len() {
            return Err(fail(WalkStatus::InvalidArgument, format!("buffer holds {len}, need {}", m.probs.len())));
        }
        if out.is_null() {
            return Err(fail(WalkStatus::NullPointer, "out is null"));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(&m.probs);
        Ok(())
    })
}

/// Evolves `steps` steps into a new state handle.
///
/// # Safety
/// `state` and `coin` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn walk_evolve(
    state: *const WalkState,
    coin: *const WalkCoin,
    steps: usize,
    engine: u32,
    out: *mut *mut WalkState,
) -> WalkStatus {
    guard(|| {
        let state = deref(state, "state")?;
        let coin = deref(coin, "coin")?;
        let out = out_ptr(out, "out")?;
        let next = match engine {
            WALK_ENGINE_POSITION => evolve_torus(&state.0, &coin.0, steps),
            WALK_ENGINE_MOMENTUM => evolve_via_momentum(&state.0, &coin.0, steps),
            other => return Err(fail(WalkStatus::InvalidArgument, format!("unknown engine {other}"))),
        }
        .or_status()?;
        *out = boxed(WalkState(next));
        Ok(())
    })
}

/// Smallest period up to `horizon`; writes 0 when there is none.
///
/// # Safety
/// `state` and `coin` must be live handles; `period` and `residual` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn walk_detect_period(
    state: *const WalkState,
    coin: *const WalkCoin,
    horizon: usize,
    period: *mut usize,
    residual: *mut f64,
) -> WalkStatus {
    guard(|| {
        let state = deref(state, "state")?;
        let coin = deref(coin, "coin")?;
        let period = out_ptr(period, "period")?;
        let residual = out_ptr(residual, "residual")?;
        let report = detect_period(&state.0, &coin.0, horizon).or_status()?;
        *period = report.period.unwrap_or(0);
        *residual = report.max_residual;
        Ok(())
    })
}

/// Constant-root certificate on an M×M grid. `json_out` may be null; otherwise it
/// receives the full report, to be released with [`walk_string_free`].
///
/// # Safety
/// `coin` must be a live handle and `has_constant_root` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn walk_certificate(
    coin: *const WalkCoin,
    grid: usize,
    has_constant_root: *mut bool,
    json_out: *mut *mut c_char,
) -> WalkStatus {
    guard(|| {
        let coin = deref(coin, "coin")?;
        let flag = out_ptr(has_constant_root, "has_constant_root")?;
        let cert = constant_root_certificate(&coin.0, grid).or_status()?;
        *flag = cert.verdict == Verdict::ConstantRoots;
        if let Some(out) = json_out.as_mut() {
            *out = to_c_string(certificate_to_json(&cert));
        }
        Ok(())
    })
}

/// p_n = ‖Ψ_n(0,0)‖² on ℤ² for n < horizon, from `alpha` at the origin.
///
/// # Safety
/// `coin` must be a live handle, `alpha` point to 8 doubles and `out` be valid for
/// `horizon` doubles.
#[no_mangle]
pub unsafe extern "C" fn walk_return_probability(
    coin: *const WalkCoin,
    alpha: *const f64,
    horizon: usize,
    out: *mut f64,
) -> WalkStatus {
    guard(|| {
        let coin = deref(coin, "coin")?;
        let alpha = read_alpha(alpha)?;
        if out.is_null() {
            return Err(fail(WalkStatus::NullPointer, "out is null"));
        }
        let series = return_probability_series(&coin.0, alpha, horizon).or_status()?;
        std::slice::from_raw_parts_mut(out, horizon).copy_from_slice(&series);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use std::ptr;

    use super::*;

    #[test]
    fn error_slot_is_cleared_on_success() {
        let mut coin = ptr::null_mut();
        assert_eq!(unsafe { walk_coin_fourier(9, &mut coin) }, WalkStatus::InvalidArgument);
        let msg = unsafe { CStr::from_ptr(walk_last_error()) }.to_str().unwrap().to_string();
        assert!(msg.contains("shift"));
        assert_eq!(unsafe { walk_coin_fourier(WALK_SHIFT_FF, &mut coin) }, WalkStatus::Ok);
        assert!(unsafe { CStr::from_ptr(walk_last_error()) }.to_bytes().is_empty());
        unsafe { walk_coin_free(coin) };
    }
}
