use std::ffi::{CStr, CString};
use std::ptr;

use polydev::development::serialize_development;
use polydev::oracle::{apply_affine, extract_development, random_affine_seeded, unit_bipyramid, unit_cube};
use polydev_ffi::*;

fn dev_json(p: &polydev::oracle::EmbeddedPolyhedron) -> CString {
    CString::new(serialize_development(&extract_development(p).unwrap())).unwrap()
}

fn parse(json: &CString) -> *mut PolydevDevelopment {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { polydev_development_parse(json.as_ptr(), &mut d) }, PolydevStatus::Ok);
    assert!(!d.is_null());
    d
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(polydev_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn parse_validate_and_free() {
    let d = parse(&dev_json(&unit_cube()));
    unsafe {
        assert_eq!(polydev_development_num_vertices(d), 8);
        assert_eq!(polydev_development_num_faces(d), 6);
        let mut valid = false;
        let mut report = ptr::null_mut();
        assert_eq!(polydev_development_validate(d, 1e-9, &mut valid, &mut report), PolydevStatus::Ok);
        assert!(valid);
        assert_eq!(CStr::from_ptr(report).to_str().unwrap(), r#"{"issues":[]}"#);
        polydev_string_free(report);
        polydev_development_free(d);
    }
}

#[test]
fn parse_errors_set_message() {
    let bad = CString::new("{ not json").unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { polydev_development_parse(bad.as_ptr(), &mut d) }, PolydevStatus::Parse);
    assert!(d.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { polydev_development_parse(ptr::null(), &mut d) }, PolydevStatus::NullPointer);
}

#[test]
fn recognize_cube_and_bipyramid() {
    let cube = unit_cube();
    let image = apply_affine(&cube, &random_affine_seeded(5)).unwrap();
    let (a, b) = (parse(&dev_json(&cube)), parse(&dev_json(&image)));
    let mut v = ptr::null_mut();
    unsafe {
        assert_eq!(polydev_recognize(a, b, ptr::null(), ptr::null(), &mut v), PolydevStatus::Ok);
        assert_eq!(polydev_verdict_kind(v), PolydevVerdictKind::AffineEquivalentConditional);
        polydev_verdict_free(v);
        polydev_development_free(a);
        polydev_development_free(b);
    }

    let (a, b) = (parse(&dev_json(&unit_bipyramid(None))), parse(&dev_json(&unit_bipyramid(Some(1.5)))));
    let mut cfg = polydev_config_default();
    cfg.max_boxes = 500;
    cfg.jobs = 1;
    let map = CString::new(r#"{"vertices": {"s": "s", "n": "n", "e0": "e0", "e1": "e1", "e2": "e2"}}"#).unwrap();
    unsafe {
        assert_eq!(polydev_recognize(a, b, map.as_ptr(), &cfg, &mut v), PolydevStatus::Ok);
        assert_eq!(polydev_verdict_kind(v), PolydevVerdictKind::NotAffineEquivalent);
        let mut json = ptr::null_mut();
        assert_eq!(polydev_verdict_json(v, false, &mut json), PolydevStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap();
        assert!(text.contains("\"verdict\": \"NotAffineEquivalent\""));
        assert!(!text.contains("seconds"));
        polydev_string_free(json);
        polydev_verdict_free(v);

        let swapped = CString::new(r#"{"vertices": {"s": "s", "n": "e0", "e0": "n", "e1": "e1", "e2": "e2"}}"#).unwrap();
        assert_eq!(polydev_recognize(a, b, swapped.as_ptr(), &cfg, &mut v), PolydevStatus::Map);
        assert!(last_error().contains("not combinatorially equivalent"), "{}", last_error());
        polydev_development_free(a);
        polydev_development_free(b);
    }
}

#[test]
fn cayley_menger_golden() {
    let mut out = 0.0;
    let tri = [0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0];
    assert_eq!(unsafe { polydev_cayley_menger_det(2, tri.as_ptr(), &mut out) }, PolydevStatus::Ok);
    assert!((out + 3.0).abs() < 1e-12);
    let asym = [0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0];
    assert_eq!(unsafe { polydev_cayley_menger_det(2, asym.as_ptr(), &mut out) }, PolydevStatus::InvalidArgument);
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/polydev.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["polydev_recognize", "polydev_last_error", "polydev_string_free", "POLYDEV_STATUS_OK"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let Ok(out) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).output() else {
        return; // no C compiler available
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
