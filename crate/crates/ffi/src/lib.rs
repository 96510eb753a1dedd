//! C ABI for `lastsq`.
//!
//! Arrangements cross the boundary as opaque handles created by the
//! `*_decode` functions and the bijection entry points, and released with
//! the matching `*_free`. Big integers and reports cross as NUL-terminated
//! decimal or JSON strings owned by the library; release them with
//! [`lastsq_string_free`].
//!
//! Every fallible function returns a [`LastsqStatus`]. On failure the
//! message is available from [`lastsq_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lastsq::arrangements::{DominoArrangement, Parity, SignClass, SquareArrangement};
use lastsq::bijections::{conjugate, domino_to_square, square_to_domino, ConjugationOutcome};
use lastsq::enumeration::{ClassFilter, Enumerator, Family};
use lastsq::formulas::SumName;
use lastsq::verify::{AuxLimits, Summary, Verifier};
use lastsq::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LastsqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Range = 4,
    SizeLimit = 5,
    NotPlusClass = 6,
    OutsideDomain = 7,
    /// The arrangement is one of the two exceptional arrangements of the
    /// conjugation; no image is produced.
    Exceptional = 8,
    InvalidArgument = 9,
    Internal = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LastsqSign {
    Plus = 0,
    Minus = 1,
    Any = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LastsqParity {
    Even = 0,
    Odd = 1,
    Any = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LastsqFamily {
    Domino = 0,
    Square = 1,
}

/// Opaque square arrangement (white/black/decorated cells).
pub struct LastsqSquare {
    inner: SquareArrangement,
}

/// Opaque domino arrangement (dominoes and black/white squares).
pub struct LastsqDomino {
    inner: DominoArrangement,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> LastsqStatus {
    match e {
        Error::Parse { .. } | Error::EmptyBoard | Error::FirstCellNotBlack | Error::LastCellBlack => {
            LastsqStatus::Parse
        }
        Error::InvalidBoard(_) | Error::InconsistentFilter(_) | Error::ParityMismatch(_) => {
            LastsqStatus::InvalidArgument
        }
        Error::Range(_) => LastsqStatus::Range,
        Error::SizeLimitExceeded { .. } => LastsqStatus::SizeLimit,
        Error::NotPlusClass => LastsqStatus::NotPlusClass,
        Error::OutsideDomain => LastsqStatus::OutsideDomain,
        Error::InternalInvariantViolation(_) | Error::NonIntegralResult(_) => LastsqStatus::Internal,
    }
}

struct Failure(LastsqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LastsqStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LastsqStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside lastsq");
            LastsqStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(LastsqStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure(LastsqStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: checked non-null; caller guarantees it is writable.
    unsafe { out.write(value) };
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn square_ref<'a>(p: *const LastsqSquare) -> Result<&'a SquareArrangement, Failure> {
    // SAFETY: caller passes a live handle from this library or null.
    unsafe { p.as_ref() }.map(|h| &h.inner).ok_or_else(|| null("square handle"))
}

unsafe fn domino_ref<'a>(p: *const LastsqDomino) -> Result<&'a DominoArrangement, Failure> {
    // SAFETY: caller passes a live handle from this library or null.
    unsafe { p.as_ref() }.map(|h| &h.inner).ok_or_else(|| null("domino handle"))
}

fn new_square(inner: SquareArrangement) -> *mut LastsqSquare {
    Box::into_raw(Box::new(LastsqSquare { inner }))
}

fn new_domino(inner: DominoArrangement) -> *mut LastsqDomino {
    Box::into_raw(Box::new(LastsqDomino { inner }))
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn lastsq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn lastsq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lastsq_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: caller guarantees `s` came from `CString::into_raw` here.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Decodes a square arrangement from its `b`/`t`/`w` encoding.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lastsq_square_decode(text: *const c_char, out: *mut *mut LastsqSquare) -> LastsqStatus {
    guard(|| {
        let text = unsafe { read_str(text, "text")? };
        let arr = SquareArrangement::decode(text)?;
        unsafe { write_out(out, new_square(arr), "out") }
    })
}

/// # Safety
/// `handle` must be NULL or a live square handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn lastsq_square_free(handle: *mut LastsqSquare) {
    if !handle.is_null() {
        // SAFETY: handle came from Box::into_raw in this library.
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Canonical encoding, or NULL for a NULL handle. Free with
/// [`lastsq_string_free`].
///
/// # Safety
/// `handle` must be NULL or a live square handle.
#[no_mangle]
pub unsafe extern "C" fn lastsq_square_encode(handle: *const LastsqSquare) -> *mut c_char {
    match unsafe { square_ref(handle) } {
        Ok(a) => to_c_string(a.encode()),
        Err(_) => ptr::null_mut(),
    }
}

/// Writes board length, black count and weight.
///
/// # Safety
/// `handle` must be a live square handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn lastsq_square_stats(
    handle: *const LastsqSquare,
    out_len: *mut usize,
    out_blacks: *mut usize,
    out_weight: *mut usize,
) -> LastsqStatus {
    guard(|| {
        let a = unsafe { square_ref(handle)? };
        unsafe {
            write_out(out_len, a.len(), "out_len")?;
            write_out(out_blacks, a.blacks(), "out_blacks")?;
            write_out(out_weight, a.weight().value(), "out_weight")
        }
    })
}

/// # Safety
/// `handle` must be a live square handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lastsq_square_sign(handle: *const LastsqSquare, out: *mut LastsqSign) -> LastsqStatus {
    guard(|| {
        let a = unsafe { square_ref(handle)? };
        unsafe { write_out(out, sign_to_c(a.sign_class()), "out") }
    })
}

/// Decodes a domino arrangement from its `b`/`d`/`w` encoding.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lastsq_domino_decode(text: *const c_char, out: *mut *mut LastsqDomino) -> LastsqStatus {
    guard(|| {
        let text = unsafe { read_str(text, "text")? };
        let arr = DominoArrangement::decode(text)?;
        unsafe { write_out(out, new_domino(arr), "out") }
    })
}

/// # Safety
/// `handle` must be NULL or a live domino handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn lastsq_domino_free(handle: *mut LastsqDomino) {
    if !handle.is_null() {
        // SAFETY: handle came from Box::into_raw in this library.
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// # Safety
/// `handle` must be NULL or a live domino handle.
#[no_mangle]
pub unsafe extern "C" fn lastsq_domino_encode(handle: *const LastsqDomino) -> *mut c_char {
    match unsafe { domino_ref(handle) } {
        Ok(a) => to_c_string(a.encode()),
        Err(_) => ptr::null_mut(),
    }
}

/// Writes board length `m` and domino count `r`.
///
/// # Safety
/// `handle` must be a live domino handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn lastsq_domino_stats(
    handle: *const LastsqDomino,
    out_cells: *mut usize,
    out_dominoes: *mut usize,
) -> LastsqStatus {
    guard(|| {
        let a = unsafe { domino_ref(handle)? };
        unsafe {
            write_out(out_cells, a.cells(), "out_cells")?;
            write_out(out_dominoes, a.dominoes(), "out_dominoes")
        }
    })
}

/// # Safety
/// `handle` must be a live domino handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lastsq_domino_sign(handle: *const LastsqDomino, out: *mut LastsqSign) -> LastsqStatus {
    guard(|| {
        let a = unsafe { domino_ref(handle)? };
        unsafe { write_out(out, sign_to_c(a.sign_class()), "out") }
    })
}

/// Maps a plus-class domino arrangement on `m` cells with `r` dominoes to a
/// plus-class square arrangement on `m-1-r` cells.
///
/// # Safety
/// `handle` must be a live domino handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lastsq_domino_to_square(
    handle: *const LastsqDomino,
    out: *mut *mut LastsqSquare,
) -> LastsqStatus {
    guard(|| {
        let a = unsafe { domino_ref(handle)? };
        let image = domino_to_square(a)?;
        unsafe { write_out(out, new_square(image), "out") }
    })
}

/// Inverse of [`lastsq_domino_to_square`].
///
/// # Safety
/// `handle` must be a live square handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lastsq_square_to_domino(
    handle: *const LastsqSquare,
    out: *mut *mut LastsqDomino,
) -> LastsqStatus {
    guard(|| {
        let a = unsafe { square_ref(handle)? };
        let image = square_to_domino(a)?;
        unsafe { write_out(out, new_domino(image), "out") }
    })
}

/// Conjugate of a square arrangement. Returns `EXCEPTIONAL` (and writes
/// NULL) for the exceptional arrangement, `OUTSIDE_DOMAIN` when the input is
/// neither plus with odd weight nor minus with even weight.
///
/// # Safety
/// `handle` must be a live square handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lastsq_conjugate(handle: *const LastsqSquare, out: *mut *mut LastsqSquare) -> LastsqStatus {
    guard(|| {
        let a = unsafe { square_ref(handle)? };
        match conjugate(a)? {
            ConjugationOutcome::Conjugate(image) => unsafe { write_out(out, new_square(image), "out") },
            ConjugationOutcome::Exceptional(e) => {
                unsafe { write_out(out, ptr::null_mut(), "out")? };
                Err(Failure(LastsqStatus::Exceptional, format!("{a} is {}", e.label())))
            }
            ConjugationOutcome::OutsideDomain => Err(Error::OutsideDomain.into()),
        }
    })
}

/// Evaluates sum `S`, `T`, `U`, `V` or `W` and writes its decimal value.
///
/// # Safety
/// `out` must be writable; the string written there must be freed with
/// [`lastsq_string_free`].
#[no_mangle]
pub unsafe extern "C" fn lastsq_eval(sum: c_char, size: usize, r: usize, out: *mut *mut c_char) -> LastsqStatus {
    guard(|| {
        let name = char::from(sum as u8).to_string().parse::<SumName>()?;
        let value = name.eval(size, r)?;
        unsafe { write_out(out, to_c_string(value.to_string()), "out") }
    })
}

/// Counts arrangements of a family by brute-force enumeration and writes
/// the decimal count. Parity filters apply only to the square family.
///
/// # Safety
/// `out` must be writable; free the result with [`lastsq_string_free`].
#[no_mangle]
pub unsafe extern "C" fn lastsq_count(
    family: LastsqFamily,
    size: usize,
    r: usize,
    sign: LastsqSign,
    parity: LastsqParity,
    out: *mut *mut c_char,
) -> LastsqStatus {
    guard(|| {
        let filter = ClassFilter {
            sign: match sign {
                LastsqSign::Plus => Some(SignClass::Plus),
                LastsqSign::Minus => Some(SignClass::Minus),
                LastsqSign::Any => None,
            },
            weight_parity: match parity {
                LastsqParity::Even => Some(Parity::Even),
                LastsqParity::Odd => Some(Parity::Odd),
                LastsqParity::Any => None,
            },
            exact_weight: None,
        };
        let family = match family {
            LastsqFamily::Domino => Family::Domino,
            LastsqFamily::Square => Family::Square,
        };
        let c = Enumerator::new().count(family, size, r, &filter)?;
        unsafe { write_out(out, to_c_string(c.to_string()), "out") }
    })
}

/// Runs a verification suite (`theorem`, `lemma`, `strata`, `bijections`,
/// `auxiliary`) up to `limit` and writes the reports as JSON lines. The
/// number of failed checks goes to `out_failures`.
///
/// # Safety
/// `suite` must be a NUL-terminated string; out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn lastsq_verify(
    suite: *const c_char,
    limit: usize,
    out_json: *mut *mut c_char,
    out_failures: *mut usize,
) -> LastsqStatus {
    guard(|| {
        let suite = unsafe { read_str(suite, "suite")? };
        if limit < 1 {
            return Err(Error::Range("limit must be positive".into()).into());
        }
        let v = Verifier::new();
        let reports = match suite {
            "theorem" => v.theorem(limit.max(2), limit.min(16)),
            "lemma" => v.lemma(limit),
            "strata" => v.strata(limit),
            "bijections" => v.bijections(limit),
            "auxiliary" => v.auxiliary(&AuxLimits::default()),
            other => {
                return Err(Failure(LastsqStatus::InvalidArgument, format!("unknown suite {other:?}")));
            }
        };
        let json: Vec<String> = reports.iter().map(|r| r.to_json()).collect();
        unsafe {
            write_out(out_failures, Summary::of(&reports).fail, "out_failures")?;
            write_out(out_json, to_c_string(json.join("\n")), "out_json")
        }
    })
}

fn sign_to_c(s: SignClass) -> LastsqSign {
    match s {
        SignClass::Plus => LastsqSign::Plus,
        SignClass::Minus => LastsqSign::Minus,
    }
}
