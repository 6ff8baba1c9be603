use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use tribracket_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(trb_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { trb_string_free(s) };
    out
}

#[test]
fn hopf_link_over_z7() {
    unsafe {
        let mut b = ptr::null_mut();
        assert_eq!(trb_bracket_builtin(c"z7".as_ptr(), &mut b), TrbStatus::Ok);
        let (mut delta, mut w) = (0, 0);
        assert_eq!(trb_bracket_delta_w(b, &mut delta, &mut w), TrbStatus::Ok);
        assert_eq!((delta, w), (6, 4));
        assert_eq!(trb_bracket_modulus(b), 7);

        let mut d = ptr::null_mut();
        assert_eq!(
            trb_diagram_from_catalog(c"L2a1".as_ptr(), &mut d),
            TrbStatus::Ok
        );
        assert_eq!(trb_diagram_crossings(d), 2);
        let mut s = ptr::null_mut();
        assert_eq!(trb_phi(d, b, false, &mut s), TrbStatus::Ok);
        assert_eq!(take(s), "4u^6+4u");
        assert_eq!(trb_phi(d, b, true, &mut s), TrbStatus::Ok);
        assert_eq!(take(s), r#"{"modulus":7,"terms":{"1":4,"6":4}}"#);

        let mut x = ptr::null_mut();
        assert_eq!(
            trb_tribracket_builtin(c"x2".as_ptr(), &mut x),
            TrbStatus::Ok
        );
        let mut count = 0;
        assert_eq!(trb_counting_invariant(d, x, &mut count), TrbStatus::Ok);
        assert_eq!(count, 8);

        trb_tribracket_free(x);
        trb_diagram_free(d);
        trb_bracket_free(b);
    }
}

#[test]
fn tribracket_round_trip() {
    unsafe {
        let json = CString::new(r#"{"n":3,"tensor":[[[1,3,2],[2,1,3],[3,2,1]],[[2,1,3],[3,2,1],[1,3,2]],[[3,2,1],[1,3,2],[2,1,3]]]}"#).unwrap();
        let mut x = ptr::null_mut();
        assert_eq!(
            trb_tribracket_from_json(json.as_ptr(), &mut x),
            TrbStatus::Ok
        );
        assert_eq!(trb_tribracket_size(x), 3);
        let mut valid = false;
        assert_eq!(trb_tribracket_verify(x, &mut valid), TrbStatus::Ok);
        assert!(valid);
        let mut v = 0;
        assert_eq!(trb_tribracket_eval(x, 1, 1, 2, &mut v), TrbStatus::Ok);
        assert_eq!(v, 3);
        assert_eq!(trb_tribracket_eval(x, 0, 1, 2, &mut v), TrbStatus::Parse);
        assert!(last_error().contains("outside"));

        let mut d = ptr::null_mut();
        assert_eq!(
            trb_diagram_from_pd(c"X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)".as_ptr(), 0, &mut d),
            TrbStatus::Ok
        );
        let mut count = 0;
        assert_eq!(trb_counting_invariant(d, x, &mut count), TrbStatus::Ok);
        assert_eq!(count, 27);
        trb_diagram_free(d);
        trb_tribracket_free(x);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut b = ptr::null_mut();
        assert_eq!(trb_bracket_builtin(ptr::null(), &mut b), TrbStatus::Null);
        assert_eq!(
            trb_bracket_builtin(c"beta3".as_ptr(), &mut b),
            TrbStatus::Parse
        );
        assert!(last_error().contains("beta"));
        assert!(b.is_null());

        let non_unit = cr#"{"tribracket":[[[1]]],"modulus":5,"A":[[[0]]],"B":[[[1]]]}"#;
        assert_eq!(
            trb_bracket_from_json(non_unit.as_ptr(), &mut b),
            TrbStatus::NonUnit
        );
        // A_{2,1,2} = 1 makes δ non-constant
        let invalid = cr#"{"tribracket":[[[2,1],[1,2]],[[1,2],[2,1]]],"modulus":5,"A":[[[1,2],[2,1]],[[1,1],[3,1]]],"B":[[[4,3],[3,4]],[[4,2],[2,4]]]}"#;
        assert_eq!(
            trb_bracket_from_json(invalid.as_ptr(), &mut b),
            TrbStatus::Invalid
        );

        let mut d = ptr::null_mut();
        assert_eq!(
            trb_diagram_from_pd(c"X[1,2,3".as_ptr(), 0, &mut d),
            TrbStatus::Parse
        );
        assert_eq!(
            trb_diagram_from_pd(c"X(1,2,3,4) X(2,3,1,4)".as_ptr(), 0, &mut d),
            TrbStatus::Invalid
        );
        assert_eq!(
            trb_diagram_from_catalog(c"9_1".as_ptr(), &mut d),
            TrbStatus::Parse
        );
        assert!(d.is_null());

        let mut count = 0;
        assert_eq!(
            trb_counting_invariant(ptr::null(), ptr::null(), &mut count),
            TrbStatus::Null
        );
        assert_eq!(trb_tribracket_size(ptr::null()), 0);
        trb_diagram_free(ptr::null_mut());
        trb_string_free(ptr::null_mut());
    }
}

/// Compiles `tests/c/smoke.c` against the generated header and the static
/// library. Skipped when no C compiler is on the path.
#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/tribracket.h");
    assert!(header.is_file(), "header not generated");
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    // target/<profile>/deps/abi-xxxx -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libtribracket_ffi.a");
    if !lib.is_file() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let out = tempfile::tempdir().unwrap();
    let bin = out.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&bin).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
