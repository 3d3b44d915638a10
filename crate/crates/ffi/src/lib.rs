//! C ABI over the gpde kernel. Models are opaque handles; reports come back
//! as JSON strings owned by the caller and released with
//! `gpde_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use gpde::gauge_pde::{check_hamiltonian, check_model, solve_hamiltonian, Model};
use gpde::report::{Output, Report};

/// Opaque model handle.
pub struct GpdeModel(Model);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GpdeStatus {
    Ok = 0,
    ChecksFailed = 1,
    NullPointer = 2,
    InvalidUtf8 = 3,
    ParseError = 4,
    ComputeError = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, GpdeStatus> {
    if s.is_null() {
        set_error("null pointer");
        return Err(GpdeStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("input is not valid UTF-8");
        GpdeStatus::InvalidUtf8
    })
}

fn emit(s: String, out: *mut *mut c_char) {
    let c = CString::new(s.replace('\0', " ")).unwrap_or_default();
    // SAFETY: callers check `out` for null before calling.
    unsafe { *out = c.into_raw() };
}

fn finish_model(r: gpde::Result<Model>, out: *mut *mut GpdeModel) -> GpdeStatus {
    match r {
        Ok(m) => {
            // SAFETY: callers check `out` for null before calling.
            unsafe { *out = Box::into_raw(Box::new(GpdeModel(m))) };
            GpdeStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            GpdeStatus::ParseError
        }
    }
}

/// Parse `.gpde` source into a new handle.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gpde_model_parse(src: *const c_char, out: *mut *mut GpdeModel) -> GpdeStatus {
    if out.is_null() {
        return GpdeStatus::NullPointer;
    }
    let src = match read_str(src) {
        Ok(s) => s,
        Err(e) => return e,
    };
    finish_model(gpde::frontend::load_model("<input>", src), out)
}

/// Load one of the built-in models by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gpde_model_builtin(name: *const c_char, out: *mut *mut GpdeModel) -> GpdeStatus {
    if out.is_null() {
        return GpdeStatus::NullPointer;
    }
    let name = match read_str(name) {
        Ok(s) => s,
        Err(e) => return e,
    };
    finish_model(gpde::frontend::builtin(name), out)
}

/// # Safety
/// `m` must come from `gpde_model_parse` or `gpde_model_builtin`, or be null.
#[no_mangle]
pub unsafe extern "C" fn gpde_model_free(m: *mut GpdeModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

unsafe fn with_report(m: *const GpdeModel, out: *mut *mut c_char, f: impl FnOnce(&Model) -> gpde::Result<Report>) -> GpdeStatus {
    if m.is_null() || out.is_null() {
        set_error("null pointer");
        return GpdeStatus::NullPointer;
    }
    match f(&(*m).0) {
        Ok(r) => {
            let pass = r.pass();
            emit(r.to_json(), out);
            if pass {
                GpdeStatus::Ok
            } else {
                GpdeStatus::ChecksFailed
            }
        }
        Err(e) => {
            set_error(e.to_string());
            GpdeStatus::ComputeError
        }
    }
}

/// Projection, nilpotency and presymplectic checks as a JSON report.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gpde_check(m: *const GpdeModel, out: *mut *mut c_char) -> GpdeStatus {
    with_report(m, out, |m| {
        let mut r = Report::new(m.name.clone());
        r.extend(check_model(m)?);
        Ok(r)
    })
}

/// The covariant Hamiltonian and its defining checks as a JSON report.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gpde_hamiltonian(m: *const GpdeModel, out: *mut *mut c_char) -> GpdeStatus {
    with_report(m, out, |m| {
        let l = solve_hamiltonian(m)?;
        let mut r = Report::new(m.name.clone());
        r.extend(check_hamiltonian(m, &l)?);
        r.output("hamiltonian", Output::poly(&l));
        Ok(r)
    })
}

/// Pretty-printed `.gpde` source of the model.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gpde_model_source(m: *const GpdeModel) -> *mut c_char {
    if m.is_null() {
        return ptr::null_mut();
    }
    CString::new(gpde::frontend::model_source(&(*m).0)).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failure on this thread, or null. Free with
/// `gpde_string_free`.
#[no_mangle]
pub extern "C" fn gpde_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone().map_or(ptr::null_mut(), CString::into_raw))
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn gpde_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
