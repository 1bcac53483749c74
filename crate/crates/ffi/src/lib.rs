//! C interface to `polyzero`.
//!
//! Polynomials and zero censuses are opaque heap handles owned by the caller
//! and released with the matching `_free` function. Every fallible call
//! returns a [`PzStatus`]; on failure a description is available from
//! [`pz_last_error`] on the same thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use polyzero::extremal::{extremal_coefficients, extremal_poly};
use polyzero::rootfind::{zero_atlas, NewtonOptions, ZeroCensus};
use polyzero::winding::{winding, Curve};
use polyzero::{Error, PolyPoly};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    ZeroPolynomial = 4,
    NotDominant = 5,
    /// Zero on the integration curve, uncertified winding, singular point or
    /// non-finite arithmetic.
    Numerical = 6,
    /// Extremal construction or verification did not succeed.
    Construction = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PzComplex {
    pub re: f64,
    pub im: f64,
}

impl From<PzComplex> for Complex64 {
    fn from(c: PzComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for PzComplex {
    fn from(c: Complex64) -> Self {
        PzComplex { re: c.re, im: c.im }
    }
}

/// One zero of a census. `has_index` is 0 when the index could not be
/// certified, and `index` is then meaningless.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PzZero {
    pub z: PzComplex,
    pub index: i64,
    pub has_index: bool,
    /// Sign of the Jacobian at the zero: 1, -1 or 0 (singular).
    pub jacobian_sign: i8,
    pub residual: f64,
}

/// Opaque polynomial handle.
pub struct PzPoly(PolyPoly);

/// Opaque zero census handle.
pub struct PzCensus(ZeroCensus);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PzStatus {
    match e {
        Error::InvalidArgument(_) | Error::UnsupportedCount { .. } | Error::FinitenessNotEstablished(_) => {
            PzStatus::InvalidArgument
        }
        Error::Parse { .. } | Error::Io { .. } => PzStatus::Parse,
        Error::ZeroPolynomial => PzStatus::ZeroPolynomial,
        Error::NotDominant => PzStatus::NotDominant,
        Error::NonFinite(_)
        | Error::ZeroOnCurve { .. }
        | Error::CannotCertify(_)
        | Error::NonIsolatedZero(_)
        | Error::Singular(_) => PzStatus::Numerical,
        Error::Schedule(_) | Error::Range(_) | Error::Verification(_) => PzStatus::Construction,
    }
}

/// Runs `f`, converting errors and panics into a status code.
fn guard<F>(f: F) -> PzStatus
where
    F: FnOnce() -> Result<(), (PzStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PzStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            PzStatus::Panic
        }
    }
}

fn lib<T>(r: polyzero::Result<T>) -> Result<T, (PzStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (PzStatus, String) {
    (PzStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (PzStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), (PzStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn pz_status_message(status: PzStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        PzStatus::Ok => b"ok\0",
        PzStatus::NullPointer => b"null pointer argument\0",
        PzStatus::InvalidArgument => b"invalid argument\0",
        PzStatus::Parse => b"parse error\0",
        PzStatus::ZeroPolynomial => b"zero polynomial\0",
        PzStatus::NotDominant => b"no dominant top-degree coefficient\0",
        PzStatus::Numerical => b"numerical failure\0",
        PzStatus::Construction => b"construction failed\0",
        PzStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failed call on this thread, or "" if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a polynomial from `len` terms `coeffs[i] z^{j[i]} zbar^{k[i]}`.
/// Repeated index pairs are summed.
///
/// # Safety
/// `j`, `k` and `coeffs` must each point to `len` readable elements (they may
/// be null when `len` is 0). `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_poly_from_terms(
    j: *const usize,
    k: *const usize,
    coeffs: *const PzComplex,
    len: usize,
    out: *mut *mut PzPoly,
) -> PzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (js, ks, cs) = if len == 0 {
            (&[][..], &[][..], &[][..])
        } else {
            if j.is_null() || k.is_null() || coeffs.is_null() {
                return Err(null("term array"));
            }
            (
                std::slice::from_raw_parts(j, len),
                std::slice::from_raw_parts(k, len),
                std::slice::from_raw_parts(coeffs, len),
            )
        };
        let p = lib(PolyPoly::from_terms(
            (0..len).map(|i| (js[i], ks[i], Complex64::from(cs[i]))),
        ))?;
        out.write(Box::into_raw(Box::new(PzPoly(p))));
        Ok(())
    })
}

/// Parses the text format (`j k re im` per line, `;` also separates lines).
///
/// # Safety
/// `text` must be a NUL-terminated string. `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_poly_parse(text: *const c_char, out: *mut *mut PzPoly) -> PzStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (PzStatus::Parse, format!("text is not UTF-8: {e}")))?;
        let p = lib(polyzero::format::parse_inline(s))?;
        out.write(Box::into_raw(Box::new(PzPoly(p))));
        Ok(())
    })
}

/// Releases a polynomial. Null is ignored.
///
/// # Safety
/// `p` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pz_poly_free(p: *mut PzPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Value of the polynomial at `z`.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_poly_eval(p: *const PzPoly, z: PzComplex, out: *mut PzComplex) -> PzStatus {
    guard(|| {
        let p = deref(p, "poly")?;
        put(out, p.0.eval(z.into()).into(), "out")
    })
}

/// Total degree, degree in z and degree in zbar.
///
/// # Safety
/// `p` must be a live handle and the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn pz_poly_degrees(
    p: *const PzPoly,
    deg: *mut usize,
    deg_z: *mut usize,
    deg_zbar: *mut usize,
) -> PzStatus {
    guard(|| {
        let d = deref(p, "poly")?
            .0
            .degrees()
            .ok_or((PzStatus::ZeroPolynomial, "zero polynomial".into()))?;
        put(deg, d.deg, "deg")?;
        put(deg_z, d.deg_z, "deg_z")?;
        put(deg_zbar, d.deg_zbar, "deg_zbar")
    })
}

/// Inclusion radii `r0 <= r1`, `r0 < r2`. Fails with `NotDominant` when no
/// top-degree coefficient dominates.
///
/// # Safety
/// `p` must be a live handle and the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn pz_bounds(p: *const PzPoly, r0: *mut f64, r1: *mut f64, r2: *mut f64) -> PzStatus {
    guard(|| {
        let report = lib(polyzero::bounds::bounds_report(&deref(p, "poly")?.0))?;
        let r = report
            .radii
            .ok_or((PzStatus::NotDominant, Error::NotDominant.to_string()))?;
        put(r0, r.r0, "r0")?;
        put(r1, r.r1, "r1")?;
        put(r2, r.r2, "r2")
    })
}

/// Winding number of the polynomial along the circle `|z - center| = radius`.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_winding_circle(
    p: *const PzPoly,
    center: PzComplex,
    radius: f64,
    out: *mut i64,
) -> PzStatus {
    guard(|| {
        let p = deref(p, "poly")?;
        let curve = lib(Curve::circle(center.into(), radius))?;
        put(out, lib(winding(&p.0, &curve, None))?.wind, "out")
    })
}

/// Zero census in the disk `|z| < radius` with default Newton options.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_roots(p: *const PzPoly, radius: f64, out: *mut *mut PzCensus) -> PzStatus {
    guard(|| {
        let p = deref(p, "poly")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let census = lib(zero_atlas(&p.0, radius, &NewtonOptions::default(), &[]))?;
        out.write(Box::into_raw(Box::new(PzCensus(census))));
        Ok(())
    })
}

/// Number of zeros in a census, 0 for null.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pz_census_len(c: *const PzCensus) -> usize {
    c.as_ref().map_or(0, |c| c.0.zeros.len())
}

/// Zero number `i`, ordered by real then imaginary part.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_census_get(c: *const PzCensus, i: usize, out: *mut PzZero) -> PzStatus {
    guard(|| {
        let c = deref(c, "census")?;
        let z = c.0.zeros.get(i).ok_or_else(|| {
            (
                PzStatus::InvalidArgument,
                format!("index {i} out of range ({})", c.0.zeros.len()),
            )
        })?;
        let v = PzZero {
            z: z.z.into(),
            index: z.index.unwrap_or(0),
            has_index: z.index.is_some(),
            jacobian_sign: z.jacobian_sign.as_i8(),
            residual: z.residual,
        };
        put(out, v, "out")
    })
}

/// Winding number on the census disk boundary and whether the index sum
/// matches it.
///
/// # Safety
/// `c` must be a live handle and the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn pz_census_summary(
    c: *const PzCensus,
    total_winding: *mut i64,
    certified: *mut bool,
) -> PzStatus {
    guard(|| {
        let c = deref(c, "census")?;
        put(total_winding, c.0.total_winding, "total_winding")?;
        put(certified, c.0.certified, "certified")
    })
}

/// Releases a census. Null is ignored.
///
/// # Safety
/// `c` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pz_census_free(c: *mut PzCensus) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Degree-n polynomial with exactly n^2 zeros, built on the adaptive schedule.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_extremal(n: usize, out: *mut *mut PzPoly) -> PzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = lib(extremal_coefficients(n, None))?;
        out.write(Box::into_raw(Box::new(PzPoly(extremal_poly(&s)))));
        Ok(())
    })
}
