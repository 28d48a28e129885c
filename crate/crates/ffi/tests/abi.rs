use std::ffi::{c_char, CStr, CString};
use std::ptr;

use patpop_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { patpop_string_free(s) };
    out
}

fn last_error() -> String {
    let p = patpop_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn parse_set(text: &str) -> *mut PatpopPatternSet {
    let c = CString::new(text).unwrap();
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { patpop_pattern_set_parse(c.as_ptr(), &mut set) }, PatpopStatus::Ok);
    set
}

#[test]
fn class_size_and_popularity() {
    let set = parse_set("132,231");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { patpop_class_size(set, 4, &mut out) }, PatpopStatus::Ok);
    assert_eq!(take(out), "8");

    let q = CString::new("321").unwrap();
    let (mut count, mut ratio) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { patpop_popularity(set, q.as_ptr(), 4, &mut count, &mut ratio) }, PatpopStatus::Ok);
    assert_eq!(take(count), "5");
    assert_eq!(take(ratio), "5/32");

    let avoided = CString::new("132").unwrap();
    let status = unsafe { patpop_popularity(set, avoided.as_ptr(), 4, &mut count, &mut ratio) };
    assert_eq!(status, PatpopStatus::InvalidQuery);
    assert!(last_error().contains("132"));
    unsafe { patpop_pattern_set_free(set) };
}

#[test]
fn iterator_walks_the_class() {
    let set = parse_set("123,132,321");
    let mut it = ptr::null_mut();
    assert_eq!(unsafe { patpop_class_iter_new(set, 4, &mut it) }, PatpopStatus::Ok);
    let mut words = Vec::new();
    loop {
        let mut w = ptr::null_mut();
        assert_eq!(unsafe { patpop_class_iter_next(it, &mut w) }, PatpopStatus::Ok);
        if w.is_null() {
            break;
        }
        words.push(take(w));
    }
    assert_eq!(words, ["2,3,1,4", "2,4,1,3", "3,2,4,1", "3,4,1,2", "4,2,3,1"]);
    unsafe {
        patpop_class_iter_free(it);
        patpop_pattern_set_free(set);
    }
}

#[test]
fn foata_round_trip() {
    let inv = CString::new("7,3,2,4,5,8,1,6,9").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { patpop_foata_hat(inv.as_ptr(), &mut out) }, PatpopStatus::Ok);
    let hat = take(out);
    assert_eq!(hat, "9,6,8,5,4,2,3,1,7");

    let hat_c = CString::new(hat).unwrap();
    assert_eq!(unsafe { patpop_foata_unhat(hat_c.as_ptr(), &mut out) }, PatpopStatus::Ok);
    assert_eq!(take(out), "7,3,2,4,5,8,1,6,9");

    assert_eq!(unsafe { patpop_standard_form(inv.as_ptr(), &mut out) }, PatpopStatus::Ok);
    assert_eq!(take(out), "(9)(6 8)(5)(4)(2 3)(1 7)");

    let bad = CString::new("1,2,3").unwrap();
    assert_eq!(unsafe { patpop_foata_unhat(bad.as_ptr(), &mut out) }, PatpopStatus::Domain);
    let not_inv = CString::new("2,3,1").unwrap();
    assert_eq!(unsafe { patpop_foata_hat(not_inv.as_ptr(), &mut out) }, PatpopStatus::Domain);
}

#[test]
fn bad_inputs_report_status() {
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { patpop_pattern_set_parse(ptr::null(), &mut set) }, PatpopStatus::NullPointer);
    let text = CString::new("12,123").unwrap();
    assert_eq!(unsafe { patpop_pattern_set_parse(text.as_ptr(), &mut set) }, PatpopStatus::Malformed);
    assert!(!last_error().is_empty());
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { patpop_class_size(ptr::null(), 3, &mut out) }, PatpopStatus::NullPointer);

    let ok = parse_set("123");
    assert!(patpop_last_error().is_null());
    unsafe { patpop_pattern_set_free(ok) };
    unsafe { patpop_string_free(ptr::null_mut()) };
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/patpop.h")).unwrap();
    for name in [
        "patpop_last_error",
        "patpop_string_free",
        "patpop_pattern_set_parse",
        "patpop_pattern_set_free",
        "patpop_class_size",
        "patpop_popularity",
        "patpop_class_iter_new",
        "patpop_class_iter_next",
        "patpop_class_iter_free",
        "patpop_foata_hat",
        "patpop_foata_unhat",
        "patpop_standard_form",
        "PATPOP_STATUS_OK",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
