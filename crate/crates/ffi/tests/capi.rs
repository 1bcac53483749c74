use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use polyzero_ffi::*;

fn ok(s: PzStatus) {
    assert_eq!(
        s,
        PzStatus::Ok,
        "{}",
        unsafe { CStr::from_ptr(pz_last_error()) }.to_str().unwrap()
    );
}

fn parse(text: &str) -> *mut PzPoly {
    let t = CString::new(text).unwrap();
    let mut p = ptr::null_mut();
    ok(unsafe { pz_poly_parse(t.as_ptr(), &mut p) });
    p
}

#[test]
fn census_of_p3_through_the_c_abi() {
    let p = parse("2 0 1 0; 1 0 1 0; 0 1 1 0; 0 0 1 0");
    let mut cen = ptr::null_mut();
    unsafe {
        ok(pz_roots(p, 3.0, &mut cen));
        assert_eq!(pz_census_len(cen), 3);
        let mut zeros = [PzZero::default(); 3];
        for (i, z) in zeros.iter_mut().enumerate() {
            ok(pz_census_get(cen, i, z));
        }
        let first = zeros[0];
        assert!((first.z.re + 1.0).abs() < 1e-10 && first.z.im.abs() < 1e-10);
        assert_eq!((first.has_index, first.index, first.jacobian_sign), (true, 0, 0));
        assert!(zeros[1..]
            .iter()
            .all(|z| z.index == 1 && (z.z.im.abs() - 1.0).abs() < 1e-10));
        let (mut w, mut cert) = (0i64, false);
        ok(pz_census_summary(cen, &mut w, &mut cert));
        assert_eq!((w, cert), (2, true));
        assert_eq!(pz_census_get(cen, 3, &mut zeros[0]), PzStatus::InvalidArgument);
        pz_census_free(cen);
        pz_poly_free(p);
    }
}

#[test]
fn degrees_eval_and_winding() {
    let j = [3usize, 2];
    let k = [0usize, 2];
    let c = [PzComplex { re: 1.0, im: 0.0 }; 2];
    let mut p = ptr::null_mut();
    unsafe {
        ok(pz_poly_from_terms(j.as_ptr(), k.as_ptr(), c.as_ptr(), 2, &mut p));
        let (mut d, mut dz, mut dzb) = (0, 0, 0);
        ok(pz_poly_degrees(p, &mut d, &mut dz, &mut dzb));
        assert_eq!((d, dz, dzb), (4, 3, 2));
        let mut v = PzComplex::default();
        ok(pz_poly_eval(p, PzComplex { re: 0.0, im: 2.0 }, &mut v));
        // (2i)^3 + |2i|^4 = 16 - 8i
        assert_eq!((v.re, v.im), (16.0, -8.0));
        pz_poly_free(p);
    }
    let q = parse("5 0 1 0; 0 1 2 0");
    let mut w = 0i64;
    unsafe {
        ok(pz_winding_circle(q, PzComplex::default(), 0.5, &mut w));
        assert_eq!(w, -1);
        ok(pz_winding_circle(q, PzComplex::default(), 3.0, &mut w));
        assert_eq!(w, 5);
        let on_zero = 2f64.powf(0.25);
        assert_eq!(
            pz_winding_circle(q, PzComplex::default(), on_zero, &mut w),
            PzStatus::Numerical
        );
        pz_poly_free(q);
    }
}

#[test]
fn extremal_handle_has_n_squared_zeros() {
    let mut p = ptr::null_mut();
    unsafe {
        ok(pz_extremal(3, &mut p));
        let (mut r0, mut r1, mut r2) = (0.0, 0.0, 0.0);
        assert_eq!(pz_bounds(p, &mut r0, &mut r1, &mut r2), PzStatus::Ok);
        let mut cen = ptr::null_mut();
        ok(pz_roots(p, 1.25 * r0 + 0.25, &mut cen));
        assert_eq!(pz_census_len(cen), 9);
        pz_census_free(cen);
        pz_poly_free(p);
        assert_eq!(pz_extremal(0, &mut p), PzStatus::InvalidArgument);
    }
}

#[test]
fn errors_and_null_pointers() {
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(pz_poly_parse(ptr::null(), &mut p), PzStatus::NullPointer);
        let bad = CString::new("2 0 x 0").unwrap();
        assert_eq!(pz_poly_parse(bad.as_ptr(), &mut p), PzStatus::Parse);
        assert!(!CStr::from_ptr(pz_last_error()).to_bytes().is_empty());
        assert_eq!(
            pz_poly_from_terms(ptr::null(), ptr::null(), ptr::null(), 1, &mut p),
            PzStatus::NullPointer
        );
        let mut v = PzComplex::default();
        assert_eq!(pz_poly_eval(ptr::null(), v, &mut v), PzStatus::NullPointer);
        assert_eq!(pz_census_len(ptr::null()), 0);
        pz_poly_free(ptr::null_mut());
        pz_census_free(ptr::null_mut());

        let flat = parse("2 0 1 0; 1 1 2 0; 0 2 1 0");
        let mut r = 0.0;
        assert_eq!(pz_bounds(flat, &mut r, &mut r, &mut r), PzStatus::NotDominant);
        pz_poly_free(flat);
    }
    for s in [PzStatus::Ok, PzStatus::Parse, PzStatus::Construction] {
        assert!(!unsafe { CStr::from_ptr(pz_status_message(s)) }.to_bytes().is_empty());
    }
}

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn cc() -> String {
    std::env::var("CC").unwrap_or_else(|_| "cc".into())
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let header = include_dir().join("polyzero.h");
    for (lang, std) in [("c", "-std=c99"), ("c++", "-std=c++11")] {
        let status = Command::new(cc())
            .args(["-x", lang, std, "-Wall", "-Werror", "-fsyntax-only"])
            .arg(&header)
            .status()
            .expect("C compiler");
        assert!(status.success(), "header does not compile as {lang}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    // target/<profile>/deps/capi-<hash> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libpolyzero_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c");
    let status = Command::new(cc())
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(include_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-o"])
        .arg(&bin)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .expect("C compiler");
    assert!(status.success(), "smoke.c failed to build");
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "smoke exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
