//! C ABI over `qudit-pauli`.
//!
//! Every function returns a [`QpStatus`]; on failure the message is kept per
//! thread and can be read with [`qp_last_error`]. Handles are opaque and must
//! be released with the matching `_free` function. Matrices and state vectors
//! cross the boundary as interleaved `re, im` doubles, row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qudit_pauli::circuit;
use qudit_pauli::simulator::Register;
use qudit_pauli::{Error, Operator, PauliElement, Realization, RealizationKind};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    EncodingViolation = 4,
    ParseError = 5,
    NotUnitary = 6,
    BufferTooSmall = 7,
    RuntimeError = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpRealizationKind {
    SpinNumber = 0,
    OscNumber = 1,
    SpinPhase = 2,
    OscPhase = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpOperator {
    X = 0,
    Z = 1,
    Theta = 2,
    Generator = 3,
}

/// `ω^phase X^shift Z^clock`, exponents taken mod the dimension.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QpPauli {
    pub phase: u32,
    pub shift: u32,
    pub clock: u32,
}

/// Opaque realization handle.
pub struct QpRealization(Realization);

/// Opaque register handle.
pub struct QpRegister(Register);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(QpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Shape { .. } | Error::DimensionMismatch { .. } => QpStatus::DimensionMismatch,
            Error::NotUnitary { .. } | Error::NotHermitian { .. } => QpStatus::NotUnitary,
            Error::Encoding { .. } => QpStatus::EncodingViolation,
            Error::PauliWord { .. } => QpStatus::ParseError,
            Error::Calibration { .. } | Error::PrepUnknownState { .. } => QpStatus::RuntimeError,
            _ => QpStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QpStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            QpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(&format!("internal panic: {message}"));
            QpStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn out_buffer<'a>(buf: *mut f64, len: usize, needed: usize) -> Result<&'a mut [f64], Failure> {
    if len < needed {
        return Err(Failure(QpStatus::BufferTooSmall, format!("buffer holds {len} doubles, {needed} needed")));
    }
    if buf.is_null() {
        return Err(null("buffer"));
    }
    Ok(std::slice::from_raw_parts_mut(buf, needed))
}

fn kind(k: QpRealizationKind) -> RealizationKind {
    match k {
        QpRealizationKind::SpinNumber => RealizationKind::SpinNumber,
        QpRealizationKind::OscNumber => RealizationKind::OscNumber,
        QpRealizationKind::SpinPhase => RealizationKind::SpinPhase,
        QpRealizationKind::OscPhase => RealizationKind::OscPhase,
    }
}

fn operator(op: QpOperator) -> Operator {
    match op {
        QpOperator::X => Operator::X,
        QpOperator::Z => Operator::Z,
        QpOperator::Theta => Operator::Theta,
        QpOperator::Generator => Operator::Generator,
    }
}

/// Message for the most recent failure on this thread, or an empty string.
/// Valid until the next `qp_` call on the same thread.
#[no_mangle]
pub extern "C" fn qp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a realization of dimension `d` into `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qp_realization_new(k: QpRealizationKind, d: usize, out: *mut *mut QpRealization) -> QpStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        let r = kind(k).build(d)?;
        *out = Box::into_raw(Box::new(QpRealization(r)));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from `qp_realization_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qp_realization_free(r: *mut QpRealization) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live realization handle and `d` writable.
#[no_mangle]
pub unsafe extern "C" fn qp_realization_dim(r: *const QpRealization, d: *mut usize) -> QpStatus {
    guard(|| {
        *deref_mut(d, "d")? = deref(r, "realization")?.0.dim();
        Ok(())
    })
}

/// Copies one operator into `buf` as `2·d·d` doubles.
///
/// # Safety
/// `r` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qp_realization_operator(
    r: *const QpRealization,
    op: QpOperator,
    buf: *mut f64,
    len: usize,
) -> QpStatus {
    guard(|| {
        let m = deref(r, "realization")?.0.operator(operator(op));
        let out = out_buffer(buf, len, 2 * m.as_slice().len())?;
        for (pair, z) in out.chunks_exact_mut(2).zip(m.as_slice()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// `*out = p · q` in the group of dimension `d`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_pauli_multiply(d: usize, p: QpPauli, q: QpPauli, out: *mut QpPauli) -> QpStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        let lift = |x: QpPauli| PauliElement::new(d, x.phase as usize, x.shift as usize, x.clock as usize);
        let product = lift(p)?.multiply(&lift(q)?)?;
        let (c, a, b) = product.exponents();
        *out = QpPauli { phase: c as u32, shift: a as u32, clock: b as u32 };
        Ok(())
    })
}

/// `*out = k` with `p q = ω^k q p`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_pauli_commutation_phase(d: usize, p: QpPauli, q: QpPauli, out: *mut u32) -> QpStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        let lift = |x: QpPauli| PauliElement::new(d, x.phase as usize, x.shift as usize, x.clock as usize);
        *out = lift(p)?.commutation_phase(&lift(q)?)? as u32;
        Ok(())
    })
}

/// Number-encoded register in `|labels[0] … labels[n−1]⟩`.
///
/// # Safety
/// `dims` and `labels` must each point to `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qp_register_new(
    dims: *const usize,
    labels: *const usize,
    n: usize,
    out: *mut *mut QpRegister,
) -> QpStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        if n > 0 && (dims.is_null() || labels.is_null()) {
            return Err(null("dims or labels"));
        }
        let (dims, labels) = if n == 0 {
            (&[][..], &[][..])
        } else {
            (std::slice::from_raw_parts(dims, n), std::slice::from_raw_parts(labels, n))
        };
        let reg = Register::init(dims, labels)?;
        *out = Box::into_raw(Box::new(QpRegister(reg)));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from `qp_register_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qp_register_free(r: *mut QpRegister) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of amplitudes in the state vector.
///
/// # Safety
/// `r` must be a live handle and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn qp_register_state_len(r: *const QpRegister, len: *mut usize) -> QpStatus {
    guard(|| {
        *deref_mut(len, "len")? = deref(r, "register")?.0.state().dim();
        Ok(())
    })
}

/// Copies the state into `buf` as `2·state_len` doubles.
///
/// # Safety
/// `r` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qp_register_state(r: *const QpRegister, buf: *mut f64, len: usize) -> QpStatus {
    guard(|| {
        let state = deref(r, "register")?.0.state();
        let out = out_buffer(buf, len, 2 * state.dim())?;
        for (pair, z) in out.chunks_exact_mut(2).zip(state.as_slice()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qp_register_apply_x(r: *mut QpRegister, qudit: usize, power: usize) -> QpStatus {
    guard(|| Ok(deref_mut(r, "register")?.0.apply_x(qudit, power)?))
}

/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qp_register_apply_z(r: *mut QpRegister, qudit: usize, power: usize) -> QpStatus {
    guard(|| Ok(deref_mut(r, "register")?.0.apply_z(qudit, power)?))
}

/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qp_register_apply_fourier(r: *mut QpRegister, qudit: usize, inverse: bool) -> QpStatus {
    guard(|| Ok(deref_mut(r, "register")?.0.apply_fourier(qudit, inverse)?))
}

/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qp_register_swap_encoding(r: *mut QpRegister, qudit: usize) -> QpStatus {
    guard(|| Ok(deref_mut(r, "register")?.0.swap_encoding(qudit)?))
}

/// Control must be number-encoded and the target phase-encoded.
///
/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qp_register_apply_sum(r: *mut QpRegister, control: usize, target: usize) -> QpStatus {
    guard(|| Ok(deref_mut(r, "register")?.0.apply_sum(control, target)?))
}

/// Label probabilities of one qudit in its current encoding; `buf` needs `dim` doubles.
///
/// # Safety
/// `r` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qp_register_measure(r: *const QpRegister, qudit: usize, buf: *mut f64, len: usize) -> QpStatus {
    guard(|| {
        let probs = deref(r, "register")?.0.measure_probabilities(qudit)?;
        out_buffer(buf, len, probs.len())?.copy_from_slice(&probs);
        Ok(())
    })
}

/// Parses and runs `.qc` source text; `*json_out` receives the report, to be
/// released with `qp_string_free`.
///
/// # Safety
/// `source` must be a nul-terminated string and `json_out` writable.
#[no_mangle]
pub unsafe extern "C" fn qp_circuit_run(source: *const c_char, json_out: *mut *mut c_char) -> QpStatus {
    guard(|| {
        let json_out = deref_mut(json_out, "json_out")?;
        *json_out = ptr::null_mut();
        if source.is_null() {
            return Err(null("source"));
        }
        let text = CStr::from_ptr(source)
            .to_str()
            .map_err(|e| Failure(QpStatus::InvalidArgument, format!("source is not UTF-8: {e}")))?;
        let parsed = circuit::parse(text).map_err(|e| Failure(QpStatus::ParseError, e.to_string()))?;
        let report = circuit::execute(&parsed).map_err(|e| {
            let Failure(status, _) = Failure::from(e.error.clone());
            let status = if status == QpStatus::InvalidArgument { QpStatus::RuntimeError } else { status };
            Failure(status, e.to_string())
        })?;
        let json = serde_json::to_string(&report).expect("report serializes");
        *json_out = CString::new(json).expect("json has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn qp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
