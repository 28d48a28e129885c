//! C ABI over `patpop`.
//!
//! Every function returns a [`PatpopStatus`]. On failure the message is kept
//! per thread and can be read with [`patpop_last_error`]. Strings handed out
//! by the library are owned by the caller and must be released with
//! [`patpop_string_free`]; handles have their own `_free` functions.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use patpop::analysis::{popularity_sequence, Backend};
use patpop::count::{enumerate_class, ClassIter};
use patpop::foata::{foata_hat, foata_unhat, standard_form, Involution};
use patpop::perm::{Pattern, PatternSet, Permutation};
use patpop::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatpopStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Malformed = 3,
    InvalidQuery = 4,
    Domain = 5,
    Verification = 6,
    InsufficientData = 7,
    Numeric = 8,
    Unsupported = 9,
    Panic = 10,
}

impl From<&Error> for PatpopStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Malformed(_) => PatpopStatus::Malformed,
            Error::InvalidQuery(_) => PatpopStatus::InvalidQuery,
            Error::Domain(_) => PatpopStatus::Domain,
            Error::Verification(_) => PatpopStatus::Verification,
            Error::InsufficientData(_) => PatpopStatus::InsufficientData,
            Error::Numeric(_) => PatpopStatus::Numeric,
            Error::Unsupported(_) => PatpopStatus::Unsupported,
        }
    }
}

/// Opaque set of avoided patterns.
pub struct PatpopPatternSet {
    inner: PatternSet,
}

/// Opaque lexicographic iterator over a class.
pub struct PatpopClassIter {
    inner: ClassIter,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(PatpopStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> PatpopStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            PatpopStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PatpopStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(PatpopStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PatpopStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(PatpopStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String, what: &str) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(PatpopStatus::Malformed, "output contains a nul byte".into()))?;
    write_out(out, c.into_raw(), what)
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(PatpopStatus::NullPointer, format!("{what} is null")))
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn patpop_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn patpop_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses comma-separated compact patterns such as `"123,132"`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn patpop_pattern_set_parse(text: *const c_char, out: *mut *mut PatpopPatternSet) -> PatpopStatus {
    guard(|| {
        let set: PatternSet = read_str(text, "text")?.parse()?;
        write_out(out, Box::into_raw(Box::new(PatpopPatternSet { inner: set })), "out")
    })
}

/// # Safety
/// `set` must come from [`patpop_pattern_set_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn patpop_pattern_set_free(set: *mut PatpopPatternSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// `|Av_n(set)|` as a decimal string.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn patpop_class_size(set: *const PatpopPatternSet, n: usize, out: *mut *mut c_char) -> PatpopStatus {
    guard(|| {
        let set = deref(set, "set")?;
        write_string(out, patpop::count::class_size(n, &set.inner).to_string(), "out")
    })
}

/// Total occurrences of `pattern` over `Av_n(set)` and the ratio
/// `count / (n |Av_n|)` as `"num/den"`, or `"N/A"` when undefined.
///
/// # Safety
/// `set` must be a live handle, `pattern` nul-terminated, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn patpop_popularity(
    set: *const PatpopPatternSet,
    pattern: *const c_char,
    n: usize,
    count_out: *mut *mut c_char,
    ratio_out: *mut *mut c_char,
) -> PatpopStatus {
    guard(|| {
        let set = deref(set, "set")?;
        let q: Pattern = read_str(pattern, "pattern")?.parse()?;
        if count_out.is_null() || ratio_out.is_null() {
            return Err(Failure(PatpopStatus::NullPointer, "output pointer is null".into()));
        }
        let seq = popularity_sequence(&set.inner, &q, n.max(1), Backend::Dp)?;
        let (count, ratio) = match seq.entries.last().filter(|_| n > 0) {
            Some(e) => (e.count.to_string(), e.ratio.as_ref().map_or("N/A".to_string(), |r| r.to_string())),
            None => ("0".to_string(), "N/A".to_string()),
        };
        write_string(count_out, count, "count_out")?;
        write_string(ratio_out, ratio, "ratio_out")
    })
}

/// Starts a lexicographic walk over `Av_n(set)`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn patpop_class_iter_new(
    set: *const PatpopPatternSet,
    n: usize,
    out: *mut *mut PatpopClassIter,
) -> PatpopStatus {
    guard(|| {
        let set = deref(set, "set")?;
        let it = PatpopClassIter { inner: enumerate_class(n, &set.inner) };
        write_out(out, Box::into_raw(Box::new(it)), "out")
    })
}

/// Writes the next member as a comma-separated word, or null once the
/// walk is finished.
///
/// # Safety
/// `iter` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn patpop_class_iter_next(iter: *mut PatpopClassIter, out: *mut *mut c_char) -> PatpopStatus {
    guard(|| {
        let it = iter.as_mut().ok_or_else(|| Failure(PatpopStatus::NullPointer, "iter is null".into()))?;
        match it.inner.next() {
            Some(p) => write_string(out, p.to_string(), "out"),
            None => write_out(out, ptr::null_mut(), "out"),
        }
    })
}

/// # Safety
/// `iter` must come from [`patpop_class_iter_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn patpop_class_iter_free(iter: *mut PatpopClassIter) {
    if !iter.is_null() {
        drop(Box::from_raw(iter));
    }
}

/// Involution (one-line, comma-separated) to its hat word.
///
/// # Safety
/// `involution` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn patpop_foata_hat(involution: *const c_char, out: *mut *mut c_char) -> PatpopStatus {
    guard(|| {
        let p: Permutation = read_str(involution, "involution")?.parse()?;
        let inv = Involution::new(p)?;
        write_string(out, foata_hat(&inv).to_string(), "out")
    })
}

/// Word avoiding consecutive 123 and 132 back to its involution.
///
/// # Safety
/// `word` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn patpop_foata_unhat(word: *const c_char, out: *mut *mut c_char) -> PatpopStatus {
    guard(|| {
        let p: Permutation = read_str(word, "word")?.parse()?;
        write_string(out, foata_unhat(&p)?.to_string(), "out")
    })
}

/// Standard cycle form of an involution, e.g. `"(9)(6 8)(5)(4)(2 3)(1 7)"`.
///
/// # Safety
/// `involution` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn patpop_standard_form(involution: *const c_char, out: *mut *mut c_char) -> PatpopStatus {
    guard(|| {
        let p: Permutation = read_str(involution, "involution")?.parse()?;
        let inv = Involution::new(p)?;
        write_string(out, standard_form(&inv).to_string(), "out")
    })
}
