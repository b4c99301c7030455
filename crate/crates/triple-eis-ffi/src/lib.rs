//! C ABI for `triple-eis`.
//!
//! Families and q-expansions are exposed as opaque handles created by
//! `te_*_new`/`te_family_q_expansion` and released by the matching
//! `te_*_free`. Every fallible call returns a [`TeStatus`]; the message of
//! the most recent failure on the calling thread is available from
//! [`te_last_error`]. Strings returned by the library are freed with
//! [`te_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use triple_eis::arith::ArithmeticPoint;
use triple_eis::family::{Family, FamilyConfig, QExpansion};
use triple_eis::siegel::{HalfIntegralMatrix, SiegelOptions, SiegelSolver};
use triple_eis::verify::{run_suite, Suite, VerifyOptions};
use triple_eis::Error;

/// Result codes of the C interface.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TeStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An input lies outside the domain of the operation.
    Domain = 2,
    /// The input needs a feature this build does not provide.
    Unsupported = 3,
    /// A work budget was exceeded.
    Resource = 4,
    /// A degree-stabilization check failed.
    NonStabilization = 5,
    /// Internal consistency failure.
    Internal = 6,
    /// Malformed input text.
    Parse = 7,
    /// An output buffer is too small; the required length was written.
    BufferTooSmall = 8,
}

/// Opaque four-variable family.
pub struct TeFamily(Family);

/// Opaque truncated q-expansion.
pub struct TeQExpansion(QExpansion);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> TeStatus {
    let status = match &e {
        Error::Domain(_) => TeStatus::Domain,
        Error::Unsupported(_) => TeStatus::Unsupported,
        Error::Resource(_) => TeStatus::Resource,
        Error::NonStabilization(_) => TeStatus::NonStabilization,
        Error::Internal(_) => TeStatus::Internal,
        Error::Parse(_) => TeStatus::Parse,
    };
    set_error(e.to_string());
    status
}

fn null_pointer(name: &str) -> TeStatus {
    set_error(format!("{name} is null"));
    TeStatus::NullPointer
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn te_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer returned by this library that has not been
/// freed.
#[no_mangle]
pub unsafe extern "C" fn te_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the caller guarantees `s` came from `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Creates a family for the odd prime `p`, square-free tame level
/// `tame_level`, twist exponent `twist`, tame character exponents
/// `chi[0..3]`, series caps `caps[0..4]` and precision `precision`.
///
/// # Safety
/// `chi` must point to 3 and `caps` to 4 readable values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn te_family_new(
    p: u64,
    tame_level: u64,
    twist: u64,
    chi: *const u64,
    caps: *const usize,
    precision: u32,
    out: *mut *mut TeFamily,
) -> TeStatus {
    if chi.is_null() {
        return null_pointer("chi");
    }
    if caps.is_null() {
        return null_pointer("caps");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    // SAFETY: lengths are part of the documented contract.
    let (chi, caps) = unsafe { (*(chi as *const [u64; 3]), *(caps as *const [usize; 4])) };
    let family = FamilyConfig::new(p, tame_level, twist, chi, caps, precision).and_then(Family::new);
    match family {
        Ok(f) => {
            // SAFETY: checked non-null above.
            unsafe { *out = Box::into_raw(Box::new(TeFamily(f))) };
            TeStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Releases a family.
///
/// # Safety
/// `family` must be null or a handle from [`te_family_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn te_family_free(family: *mut TeFamily) {
    if !family.is_null() {
        // SAFETY: the caller passes a handle created by `Box::into_raw`.
        drop(unsafe { Box::from_raw(family) });
    }
}

/// Computes the q-expansion over diagonals up to `diagonal_bound`.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn te_family_q_expansion(
    family: *const TeFamily,
    diagonal_bound: i64,
    out: *mut *mut TeQExpansion,
) -> TeStatus {
    if family.is_null() {
        return null_pointer("family");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    // SAFETY: checked non-null; the caller keeps the handle alive.
    let family = unsafe { &(*family).0 };
    match family.q_expansion(diagonal_bound) {
        Ok(q) => {
            // SAFETY: checked non-null above.
            unsafe { *out = Box::into_raw(Box::new(TeQExpansion(q))) };
            TeStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Releases a q-expansion.
///
/// # Safety
/// `expansion` must be null or a live handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn te_qexpansion_free(expansion: *mut TeQExpansion) {
    if !expansion.is_null() {
        // SAFETY: the caller passes a handle created by `Box::into_raw`.
        drop(unsafe { Box::from_raw(expansion) });
    }
}

/// Number of diagonal coefficients in the expansion (0 for null).
///
/// # Safety
/// `expansion` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn te_qexpansion_len(expansion: *const TeQExpansion) -> usize {
    // SAFETY: the caller passes null or a live handle.
    unsafe { expansion.as_ref() }.map_or(0, |q| q.0.coefficients.len())
}

/// The expansion serialized as JSON; free with [`te_string_free`].
///
/// # Safety
/// `expansion` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn te_qexpansion_to_json(expansion: *const TeQExpansion, out: *mut *mut c_char) -> TeStatus {
    if expansion.is_null() {
        return null_pointer("expansion");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    // SAFETY: checked non-null; the caller keeps the handle alive.
    let expansion = unsafe { &(*expansion).0 };
    match serde_json::to_string(expansion) {
        Ok(s) => {
            // SAFETY: checked non-null above.
            unsafe { *out = to_c_string(s) };
            TeStatus::Ok
        }
        Err(e) => fail(Error::Internal(e.to_string())),
    }
}

/// Specializes the expansion at `(k1, k2, k3, kP)` given in `point[0..4]`
/// and writes the classical coefficients as a JSON object keyed by
/// diagonal; free with [`te_string_free`].
///
/// # Safety
/// `expansion` must be a live handle, `point` must point to 4 readable
/// values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn te_qexpansion_specialize(
    expansion: *const TeQExpansion,
    point: *const i64,
    out: *mut *mut c_char,
) -> TeStatus {
    if expansion.is_null() {
        return null_pointer("expansion");
    }
    if point.is_null() {
        return null_pointer("point");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    // SAFETY: checked non-null; lengths are part of the contract.
    let (expansion, [k1, k2, k3, kp]) = unsafe { (&(*expansion).0, *(point as *const [i64; 4])) };
    let values = match expansion.specialize(&ArithmeticPoint::new([k1, k2, k3], kp)) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let entries: serde_json::Map<String, serde_json::Value> = values
        .iter()
        .map(|(d, v)| (format!("{},{},{}", d[0], d[1], d[2]), serde_json::json!(v)))
        .collect();
    // SAFETY: checked non-null above.
    unsafe { *out = to_c_string(serde_json::Value::Object(entries).to_string()) };
    TeStatus::Ok
}

/// Coefficients of the local Siegel series polynomial `F_{B,l}`.
///
/// `entries` holds 1, 3 or 6 values: `b11`, `b11,b22,c12` or
/// `b11,b22,b33,c23,c13,c12` with doubled off-diagonal entries. Up to
/// `capacity` coefficients are written to `coefficients`; the degree plus
/// one is written to `len`. When the buffer is too small nothing else is
/// written and [`TeStatus::BufferTooSmall`] is returned.
///
/// # Safety
/// `entries` must point to `count` values, `coefficients` to `capacity`
/// writable values (or be null when `capacity` is 0) and `len` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn te_siegel_polynomial(
    entries: *const i64,
    count: usize,
    prime: u64,
    coefficients: *mut i64,
    capacity: usize,
    len: *mut usize,
) -> TeStatus {
    if entries.is_null() {
        return null_pointer("entries");
    }
    if len.is_null() {
        return null_pointer("len");
    }
    // SAFETY: the caller guarantees `count` readable values.
    let m = unsafe { std::slice::from_raw_parts(entries, count) };
    let b = match m.len() {
        1 => HalfIntegralMatrix::size1(m[0]),
        3 => HalfIntegralMatrix::size2(m[0], m[1], m[2]),
        6 => HalfIntegralMatrix::size3(m[0], m[1], m[2], m[3], m[4], m[5]),
        n => return fail(Error::Parse(format!("a matrix takes 1, 3 or 6 entries, got {n}"))),
    };
    let f = match SiegelSolver::new(SiegelOptions::default()).polynomial(&b, prime) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let values: Option<Vec<i64>> = f.coefficients.iter().map(|c| i64::try_from(c).ok()).collect();
    let Some(values) = values else {
        return fail(Error::Unsupported("a coefficient does not fit in 64 bits".into()));
    };
    // SAFETY: checked non-null above.
    unsafe { *len = values.len() };
    if values.len() > capacity || coefficients.is_null() {
        set_error(format!("{} coefficients need a larger buffer", values.len()));
        return TeStatus::BufferTooSmall;
    }
    // SAFETY: the buffer holds at least `capacity >= values.len()` values.
    unsafe { ptr::copy_nonoverlapping(values.as_ptr(), coefficients, values.len()) };
    TeStatus::Ok
}

/// Runs one verification suite by name and writes whether it passed.
///
/// # Safety
/// `name` must be a NUL-terminated string and `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn te_verify_suite(
    name: *const c_char,
    p: u64,
    seed: u64,
    trials: usize,
    passed: *mut bool,
) -> TeStatus {
    if name.is_null() {
        return null_pointer("name");
    }
    if passed.is_null() {
        return null_pointer("passed");
    }
    // SAFETY: the caller passes a NUL-terminated string.
    let name = unsafe { CStr::from_ptr(name) }.to_string_lossy();
    let suite: Suite = match name.parse() {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let report = run_suite(suite, &VerifyOptions { prime: p, seed, trials });
    // SAFETY: checked non-null above.
    unsafe { *passed = report.passed() };
    TeStatus::Ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn siegel_through_the_abi() {
        let entries = [9i64];
        let mut coefficients = [0i64; 8];
        let mut len = 0usize;
        let status = unsafe { te_siegel_polynomial(entries.as_ptr(), 1, 3, coefficients.as_mut_ptr(), 8, &mut len) };
        assert_eq!(status, TeStatus::Ok);
        assert_eq!(len, 3);
        assert_eq!(coefficients[0], 1);

        let status = unsafe { te_siegel_polynomial(entries.as_ptr(), 1, 3, coefficients.as_mut_ptr(), 1, &mut len) };
        assert_eq!(status, TeStatus::BufferTooSmall);
        assert_eq!(len, 3);
    }

    #[test]
    fn bad_inputs_set_the_error() {
        let entries = [1i64, 2];
        let mut len = 0usize;
        let status = unsafe { te_siegel_polynomial(entries.as_ptr(), 2, 3, ptr::null_mut(), 0, &mut len) };
        assert_eq!(status, TeStatus::Parse);
        let msg = unsafe { CStr::from_ptr(te_last_error()) }.to_string_lossy().into_owned();
        assert!(msg.contains("1, 3 or 6"), "{msg}");

        let chi = [0u64; 3];
        let caps = [1usize; 4];
        let mut family = ptr::null_mut();
        let status = unsafe { te_family_new(4, 1, 0, chi.as_ptr(), caps.as_ptr(), 8, &mut family) };
        assert_eq!(status, TeStatus::Domain);
        assert!(family.is_null());
        assert_eq!(unsafe { te_family_q_expansion(ptr::null(), 3, ptr::null_mut()) }, TeStatus::NullPointer);
    }

    #[test]
    fn family_round_trip() {
        let chi = [0u64; 3];
        let caps = [2usize; 4];
        let mut family = ptr::null_mut();
        assert_eq!(unsafe { te_family_new(5, 1, 0, chi.as_ptr(), caps.as_ptr(), 8, &mut family) }, TeStatus::Ok);
        let mut expansion = ptr::null_mut();
        assert_eq!(unsafe { te_family_q_expansion(family, 5, &mut expansion) }, TeStatus::Ok);
        assert!(unsafe { te_qexpansion_len(expansion) } > 0);

        let mut json = ptr::null_mut();
        assert_eq!(unsafe { te_qexpansion_to_json(expansion, &mut json) }, TeStatus::Ok);
        let text = unsafe { CStr::from_ptr(json) }.to_string_lossy().into_owned();
        assert!(text.contains("\"diagonal_bound\":5"));
        unsafe { te_string_free(json) };

        let point = [2i64, 2, 2, 2];
        let mut values = ptr::null_mut();
        assert_eq!(unsafe { te_qexpansion_specialize(expansion, point.as_ptr(), &mut values) }, TeStatus::Ok);
        let parsed: serde_json::Value =
            serde_json::from_str(&unsafe { CStr::from_ptr(values) }.to_string_lossy()).unwrap();
        assert!(parsed.get("5,5,5").is_some());
        unsafe {
            te_string_free(values);
            te_qexpansion_free(expansion);
            te_family_free(family);
        }
    }

    #[test]
    fn verify_by_name() {
        let mut passed = false;
        let name = CString::new("tate").unwrap();
        assert_eq!(unsafe { te_verify_suite(name.as_ptr(), 5, 7, 5, &mut passed) }, TeStatus::Ok);
        assert!(passed);
        let name = CString::new("nope").unwrap();
        assert_eq!(unsafe { te_verify_suite(name.as_ptr(), 5, 7, 5, &mut passed) }, TeStatus::Parse);
    }
}
