//! C ABI over the cavnat simulator: opaque network handles, status codes,
//! and a thread-local last-error message. The header is generated into
//! `include/cavnat.h` by the build script.

use std::cell::RefCell;
use std::ffi::{CStr, CString};

use libc::{c_char, c_double, c_int};

use cavnat::error::CavnatError;
use cavnat::network::{four_site_preset, FourSiteConfig, Interference, NetworkSpec};
use cavnat::optics::{dephased_transmission, FourSiteOpticalConfig};
use cavnat::{fock, moments};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CavnatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    SolverError = 5,
    DimensionGuard = 6,
    IoError = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).expect("sanitized message has no NUL");
    });
}

fn status_of(err: &CavnatError) -> CavnatStatus {
    match err {
        CavnatError::Parse(_) => CavnatStatus::ParseError,
        CavnatError::Validation(_) => CavnatStatus::ValidationError,
        CavnatError::Solver(_) => CavnatStatus::SolverError,
        CavnatError::DimensionGuard { .. } => CavnatStatus::DimensionGuard,
        CavnatError::Io(_) => CavnatStatus::IoError,
    }
}

fn fail(err: &CavnatError) -> CavnatStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Opaque handle to a validated network description.
pub struct CavnatNetwork {
    spec: NetworkSpec,
}

/// Message describing the most recent error on this thread. The pointer
/// stays valid until the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn cavnat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a JSON network description. Returns null on failure (see
/// `cavnat_last_error_message`); free with `cavnat_network_free`.
#[no_mangle]
pub unsafe extern "C" fn cavnat_network_parse(json: *const c_char) -> *mut CavnatNetwork {
    if json.is_null() {
        set_error("null json pointer");
        return std::ptr::null_mut();
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("json is not valid UTF-8");
            return std::ptr::null_mut();
        }
    };
    match NetworkSpec::parse(text) {
        Ok(spec) => Box::into_raw(Box::new(CavnatNetwork { spec })),
        Err(e) => {
            fail(&e);
            std::ptr::null_mut()
        }
    }
}

/// Build the default four-site network preset. `constructive` selects the
/// interference configuration (nonzero → constructive). Free with
/// `cavnat_network_free`.
#[no_mangle]
pub extern "C" fn cavnat_network_four_site(constructive: c_int) -> *mut CavnatNetwork {
    let cfg = FourSiteConfig {
        interference: if constructive != 0 {
            Interference::Constructive
        } else {
            Interference::Destructive
        },
        ..FourSiteConfig::default()
    };
    match four_site_preset(&cfg) {
        Ok(spec) => Box::into_raw(Box::new(CavnatNetwork { spec })),
        Err(e) => {
            fail(&e);
            std::ptr::null_mut()
        }
    }
}

/// Release a network handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cavnat_network_free(net: *mut CavnatNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Serialize a network back to JSON. Free the result with
/// `cavnat_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cavnat_network_to_json(net: *const CavnatNetwork) -> *mut c_char {
    if net.is_null() {
        set_error("null network handle");
        return std::ptr::null_mut();
    }
    let text = (*net).spec.to_json().replace('\0', " ");
    CString::new(text).expect("sanitized").into_raw()
}

/// Release a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cavnat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Steady-state transmission from the exact second-moment backend.
#[no_mangle]
pub unsafe extern "C" fn cavnat_moment_transmission(
    net: *const CavnatNetwork,
    out: *mut c_double,
) -> CavnatStatus {
    if net.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CavnatStatus::NullPointer;
    }
    match moments::moment_transmission(&(*net).spec) {
        Ok(t) => {
            *out = t;
            CavnatStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Steady-state transmission from the truncated-Fock Lindblad backend with
/// global excitation cutoff `n_max`.
#[no_mangle]
pub unsafe extern "C" fn cavnat_fock_transmission(
    net: *const CavnatNetwork,
    n_max: usize,
    out: *mut c_double,
) -> CavnatStatus {
    if net.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CavnatStatus::NullPointer;
    }
    match fock::fock_transmission(&(*net).spec, n_max, fock::DEFAULT_DIM_LIMIT) {
        Ok(t) => {
            *out = t;
            CavnatStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Window-averaged transmission of the classical interferometer.
/// `config_json` holds a FourSiteOpticalConfig document (empty object for
/// defaults); `dx` is the static detuning, `ddx` the averaging window, and
/// `n_samples` the odd window sample count.
#[no_mangle]
pub unsafe extern "C" fn cavnat_classical_transmission(
    config_json: *const c_char,
    dx: c_double,
    ddx: c_double,
    n_samples: usize,
    out: *mut c_double,
) -> CavnatStatus {
    if config_json.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CavnatStatus::NullPointer;
    }
    let text = match CStr::from_ptr(config_json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("config is not valid UTF-8");
            return CavnatStatus::InvalidUtf8;
        }
    };
    let cfg: FourSiteOpticalConfig = match serde_json::from_str(text) {
        Ok(c) => c,
        Err(e) => {
            set_error(&format!("optical config: {e}"));
            return CavnatStatus::ParseError;
        }
    };
    match dephased_transmission(&cfg, dx, ddx, n_samples) {
        Ok(t) => {
            *out = t;
            CavnatStatus::Ok
        }
        Err(e) => fail(&e),
    }
}
