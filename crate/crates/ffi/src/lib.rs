//! C ABI for the dressed-auger library.
//!
//! Every fallible call returns a [`DaStatus`]; on failure a message is kept
//! per thread and read with [`da_last_error`]. Handles are opaque and must
//! be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dressed_auger::analytic::bessel_jn;
use dressed_auger::config::{preset, RunConfig};
use dressed_auger::error::Error;
use dressed_auger::observables::{asymmetry, forward_asymmetry};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Numerical = 4,
    Io = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Run configuration.
pub struct DaConfig {
    inner: RunConfig,
}

/// θ = 0 electron spectrum with its asymmetry.
pub struct DaSpectrum {
    energies: Vec<f64>,
    density: Vec<f64>,
    asymmetry: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(err: &Error) -> DaStatus {
    match err {
        Error::Io { .. } => DaStatus::Io,
        Error::Config(_)
        | Error::InvalidParameter { .. }
        | Error::MalformedRange(_)
        | Error::OffPlateau { .. }
        | Error::Incompatible(_) => DaStatus::Config,
        _ => DaStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), DaStatus>) -> DaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DaStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside dressed-auger");
            DaStatus::Panic
        }
    }
}

fn fail(err: Error) -> DaStatus {
    let s = status_of(&err);
    set_error(err.to_string());
    s
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, DaStatus> {
    if p.is_null() {
        set_error("null string");
        return Err(DaStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string is not UTF-8");
        DaStatus::InvalidUtf8
    })
}

fn non_null<T>(p: *const T) -> Result<(), DaStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        Err(DaStatus::NullPointer)
    } else {
        Ok(())
    }
}

fn hand_out(cfg: RunConfig, out: *mut *mut DaConfig) -> Result<(), DaStatus> {
    non_null(out)?;
    // SAFETY: checked non-null; caller provides writable storage.
    unsafe { *out = Box::into_raw(Box::new(DaConfig { inner: cfg })) };
    Ok(())
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn da_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn da_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default configuration (1500 nm dressing, 1.4e16 W/cm² x rays).
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn da_config_default(out: *mut *mut DaConfig) -> DaStatus {
    guard(|| hand_out(RunConfig::default(), out))
}

/// Parse a TOML configuration.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn da_config_from_toml(text: *const c_char, out: *mut *mut DaConfig) -> DaStatus {
    guard(|| {
        let text = read_str(text)?;
        let cfg = RunConfig::from_toml(text).map_err(fail)?;
        hand_out(cfg, out)
    })
}

/// Load a shipped preset by name.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn da_config_preset(name: *const c_char, out: *mut *mut DaConfig) -> DaStatus {
    guard(|| {
        let name = read_str(name)?;
        let cfg = preset(name).map_err(fail)?;
        hand_out(cfg, out)
    })
}

/// Set a numeric key given as a dotted path, e.g. `"xray.delay_fs"`.
/// Integer keys accept integral values. The configuration is unchanged on
/// failure.
///
/// # Safety
/// `cfg` must come from this library; `key` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn da_config_set(cfg: *mut DaConfig, key: *const c_char, value: f64) -> DaStatus {
    guard(|| {
        non_null(cfg)?;
        let key = read_str(key)?;
        let cfg = &mut *cfg;
        let updated = set_key(&cfg.inner, key, value).map_err(fail)?;
        cfg.inner = updated;
        Ok(())
    })
}

fn set_key(cfg: &RunConfig, key: &str, value: f64) -> Result<RunConfig, Error> {
    let mut doc: toml::Table = toml::from_str(&cfg.to_toml()).map_err(|e| Error::Config(e.to_string()))?;
    let (section, field) = key.split_once('.').ok_or_else(|| Error::Config(format!("key '{key}' needs a section")))?;
    let table = doc
        .entry(section)
        .or_insert_with(|| toml::Value::Table(toml::Table::new()))
        .as_table_mut()
        .ok_or_else(|| Error::Config(format!("'{section}' is not a section")))?;
    let v = match table.get(field) {
        Some(toml::Value::Integer(_)) if value.fract() == 0.0 && value.abs() < 9e15 => toml::Value::Integer(value as i64),
        Some(toml::Value::Boolean(_)) => toml::Value::Boolean(value != 0.0),
        _ => toml::Value::Float(value),
    };
    table.insert(field.to_string(), v);
    RunConfig::from_toml(&toml::to_string(&doc).map_err(|e| Error::Config(e.to_string()))?)
}

/// Read a numeric key.
///
/// # Safety
/// `cfg` must come from this library; `key` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn da_config_get(cfg: *const DaConfig, key: *const c_char, out: *mut f64) -> DaStatus {
    guard(|| {
        non_null(cfg)?;
        non_null(out)?;
        let key = read_str(key)?;
        let doc: toml::Table = toml::from_str(&(*cfg).inner.to_toml()).map_err(|e| fail(Error::Config(e.to_string())))?;
        let value = key
            .split_once('.')
            .and_then(|(s, f)| doc.get(s)?.as_table()?.get(f).cloned())
            .and_then(|v| match v {
                toml::Value::Float(x) => Some(x),
                toml::Value::Integer(i) => Some(i as f64),
                toml::Value::Boolean(b) => Some(if b { 1.0 } else { 0.0 }),
                _ => None,
            })
            .ok_or_else(|| fail(Error::Config(format!("no numeric key '{key}'"))))?;
        *out = value;
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from this library or be NULL; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn da_config_free(cfg: *mut DaConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Compute the θ = 0 spectrum for `cfg`.
///
/// # Safety
/// `cfg` must come from this library; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn da_spectrum_forward(cfg: *const DaConfig, out: *mut *mut DaSpectrum) -> DaStatus {
    guard(|| {
        non_null(cfg)?;
        non_null(out)?;
        let (a, energies, density) = forward_asymmetry(&(*cfg).inner).map_err(fail)?;
        *out = Box::into_raw(Box::new(DaSpectrum { energies, density, asymmetry: a.a }));
        Ok(())
    })
}

/// Number of energy samples.
///
/// # Safety
/// `spectrum` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn da_spectrum_len(spectrum: *const DaSpectrum) -> usize {
    if spectrum.is_null() {
        0
    } else {
        (*spectrum).energies.len()
    }
}

/// Copy energies (eV) and densities (per eV per sr) into caller buffers of
/// length `capacity`.
///
/// # Safety
/// `spectrum` must come from this library; both buffers hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn da_spectrum_copy(
    spectrum: *const DaSpectrum,
    energies: *mut f64,
    density: *mut f64,
    capacity: usize,
) -> DaStatus {
    guard(|| {
        non_null(spectrum)?;
        non_null(energies)?;
        non_null(density)?;
        let s = &*spectrum;
        if capacity < s.energies.len() {
            set_error(format!("buffer holds {capacity}, need {}", s.energies.len()));
            return Err(DaStatus::BufferTooSmall);
        }
        ptr::copy_nonoverlapping(s.energies.as_ptr(), energies, s.energies.len());
        ptr::copy_nonoverlapping(s.density.as_ptr(), density, s.density.len());
        Ok(())
    })
}

/// Asymmetry about the channel energy.
///
/// # Safety
/// `spectrum` must come from this library; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn da_spectrum_asymmetry(spectrum: *const DaSpectrum, out: *mut f64) -> DaStatus {
    guard(|| {
        non_null(spectrum)?;
        non_null(out)?;
        *out = (*spectrum).asymmetry;
        Ok(())
    })
}

/// # Safety
/// `spectrum` must come from this library or be NULL; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn da_spectrum_free(spectrum: *mut DaSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Bessel function of the first kind `J_n(x)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn da_bessel_jn(n: i64, x: f64, out: *mut f64) -> DaStatus {
    guard(|| {
        non_null(out)?;
        *out = bessel_jn(n, x).map_err(fail)?;
        Ok(())
    })
}

/// Asymmetry of a sampled spectrum about `e_ref`.
///
/// # Safety
/// `energies` and `density` must each hold `len` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn da_asymmetry(
    energies: *const f64,
    density: *const f64,
    len: usize,
    e_ref: f64,
    out: *mut f64,
) -> DaStatus {
    guard(|| {
        non_null(energies)?;
        non_null(density)?;
        non_null(out)?;
        let e = std::slice::from_raw_parts(energies, len);
        let d = std::slice::from_raw_parts(density, len);
        *out = asymmetry(e, d, e_ref).map_err(fail)?.a;
        Ok(())
    })
}
