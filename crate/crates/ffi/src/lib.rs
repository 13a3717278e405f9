//! C ABI over `fano-instantons`.
//!
//! Objects are opaque handles released with their `_free` function. Every
//! fallible call returns an [`FiStatus`]; on failure a message is kept per
//! thread and read with [`fi_last_error`]. Strings returned by the library
//! are released with [`fi_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fano_instantons::cli::sample_document;
use fano_instantons::field::PrimeField;
use fano_instantons::geometry::Geometry;
use fano_instantons::hilbert;
use fano_instantons::invariants;
use fano_instantons::models::Model;
use fano_instantons::moduli::{self, stream_rng};
use fano_instantons::monads::{self, MonadData};
use fano_instantons::serial::SampleDocument;
use fano_instantons::tensor::{self, Net};
use fano_instantons::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidField = 3,
    Unsupported = 4,
    Dimension = 5,
    Degenerate = 6,
    Exhausted = 7,
    Parse = 8,
    Panic = 9,
}

/// The three threefolds.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiGeometry {
    Quadric = 0,
    V5 = 1,
    V22 = 2,
}

impl From<FiGeometry> for Geometry {
    fn from(g: FiGeometry) -> Self {
        match g {
            FiGeometry::Quadric => Geometry::Quadric,
            FiGeometry::V5 => Geometry::V5,
            FiGeometry::V22 => Geometry::V22,
        }
    }
}

/// A sampled monad with its model and, for nets, the net.
pub struct FiSample {
    doc: SampleDocument,
    model: Model,
    monad: MonadData,
    net: Option<Net<u64>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FiStatus {
    match e {
        Error::InvalidField(_) => FiStatus::InvalidField,
        Error::Unsupported(_) => FiStatus::Unsupported,
        Error::Exhausted { .. } => FiStatus::Exhausted,
        Error::Serde(_) => FiStatus::Parse,
        Error::Dimension(_) | Error::NotSquare { .. } | Error::NotSkew | Error::NotSymmetric => FiStatus::Dimension,
        Error::Degenerate(_) | Error::NotInGroup | Error::RankMismatch { .. } => FiStatus::Degenerate,
    }
}

/// Runs `body`, recording errors and converting panics.
fn guard(body: impl FnOnce() -> Result<(), (FiStatus, String)>) -> FiStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FiStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FiStatus::Panic
        }
    }
}

fn lib(e: Error) -> (FiStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (FiStatus, String) {
    (FiStatus::NullPointer, format!("{name} is null"))
}

fn field(prime: u64) -> Result<PrimeField, (FiStatus, String)> {
    let f = PrimeField::new(prime).map_err(lib)?;
    f.require_odd().map_err(lib)?;
    Ok(f)
}

fn load(doc: SampleDocument) -> Result<FiSample, (FiStatus, String)> {
    let (model, monad, net) = doc.load().map_err(lib)?;
    Ok(FiSample { doc, model, monad, net })
}

unsafe fn sample_ref<'a>(s: *const FiSample) -> Result<&'a FiSample, (FiStatus, String)> {
    s.as_ref().ok_or_else(|| null("sample"))
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), (FiStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn fi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Samples a monad for `(geometry, k)` over `F_prime` from `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn fi_sample_new(
    geometry: FiGeometry,
    k: usize,
    prime: u64,
    seed: u64,
    out: *mut *mut FiSample,
) -> FiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = sample_document(geometry.into(), k, field(prime)?, seed).map_err(lib)?;
        let s = load(doc)?;
        write(out, Box::into_raw(Box::new(s)), "out")
    })
}

/// Parses a sample document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` as in [`fi_sample_new`].
#[no_mangle]
pub unsafe extern "C" fn fi_sample_from_json(json: *const c_char, out: *mut *mut FiSample) -> FiStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| (FiStatus::InvalidArgument, e.to_string()))?;
        let s = load(SampleDocument::from_json(text).map_err(lib)?)?;
        write(out, Box::into_raw(Box::new(s)), "out")
    })
}

/// Serializes a sample to JSON. Release the string with [`fi_string_free`].
///
/// # Safety
/// `sample` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fi_sample_to_json(sample: *const FiSample, out: *mut *mut c_char) -> FiStatus {
    guard(|| {
        let s = sample_ref(sample)?;
        let text = s.doc.to_json().map_err(lib)?;
        let c = CString::new(text).map_err(|e| (FiStatus::Parse, e.to_string()))?;
        write(out, c.into_raw(), "out")
    })
}

/// Releases a sample. Null is ignored.
///
/// # Safety
/// `sample` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fi_sample_free(sample: *mut FiSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `dim I` and `dim W` of the sampled monad.
///
/// # Safety
/// `sample` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn fi_sample_dims(sample: *const FiSample, dim_i: *mut usize, dim_w: *mut usize) -> FiStatus {
    guard(|| {
        let s = sample_ref(sample)?;
        write(dim_i, s.monad.a.dim_i(), "dim_i")?;
        write(dim_w, s.monad.a.dim_w(), "dim_w")
    })
}

/// Checks the monad at `npoints` points drawn from `seed`.
///
/// # Safety
/// `sample` must be a live handle; `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fi_sample_validate(
    sample: *const FiSample,
    npoints: usize,
    seed: u64,
    passed: *mut bool,
) -> FiStatus {
    guard(|| {
        let s = sample_ref(sample)?;
        let report = monads::validate_monad(&s.monad, &s.model, npoints, &mut stream_rng(seed, 2)).map_err(lib)?;
        write(passed, report.passed, "passed")
    })
}

/// The DD invariant of a quadric sample.
///
/// # Safety
/// `sample` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fi_sample_dd(sample: *const FiSample, out: *mut u64) -> FiStatus {
    guard(|| {
        let s = sample_ref(sample)?;
        if s.monad.geometry != Geometry::Quadric {
            return Err((FiStatus::Unsupported, "DD is defined for quadric monads".into()));
        }
        let spin = tensor::build_spin_split(&s.monad.field).map_err(lib)?;
        let dd = invariants::dd_invariant(&s.monad.field, &s.monad.a, &s.monad.d, &spin).map_err(lib)?;
        write(out, dd, "out")
    })
}

/// Runs Wall's test on the net of a `V22` sample over `F_2` or `F_3`.
///
/// # Safety
/// `sample` must be a live handle; `semistable` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fi_sample_semistable(sample: *const FiSample, semistable: *mut bool) -> FiStatus {
    guard(|| {
        let s = sample_ref(sample)?;
        let net = s.net.as_ref().ok_or((FiStatus::Unsupported, "sample has no net".into()))?;
        let w = invariants::wall_semistable(&s.monad.field, net).map_err(lib)?;
        write(semistable, w.is_semistable(), "semistable")
    })
}

/// Tangent minus orbit dimension over `trials` independent samples. Writes
/// the common `δ` (or `-1` if trials disagree) and whether every trial was
/// certified at the expected value.
///
/// # Safety
/// The outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn fi_delta(
    geometry: FiGeometry,
    k: usize,
    trials: usize,
    prime: u64,
    seed: u64,
    delta: *mut i64,
    passed: *mut bool,
) -> FiStatus {
    guard(|| {
        let r = moduli::delta_check(geometry.into(), k, trials, field(prime)?, seed).map_err(lib)?;
        let first = r.trials[0].delta;
        let common = if r.trials.iter().all(|t| t.delta == first) { first } else { -1 };
        write(delta, common, "delta")?;
        write(passed, r.passed, "passed")
    })
}

/// Whether the monad and instanton Hilbert polynomials agree.
///
/// # Safety
/// `identical` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fi_chi_identical(geometry: FiGeometry, k: usize, identical: *mut bool) -> FiStatus {
    guard(|| {
        let c = hilbert::chi_check(geometry.into(), k).map_err(lib)?;
        write(identical, c.identical, "identical")
    })
}
