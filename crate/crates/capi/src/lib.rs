//! C ABI over the coxkit library.
//!
//! Conventions:
//! - Handles are opaque pointers created and freed by this library.
//! - Fallible functions return a status code; `COXKIT_OK` (0) means the
//!   out-parameters were written. `COXKIT_INCONCLUSIVE` (2) marks a search
//!   that exhausted its bounds without deciding; its JSON report is still
//!   written so the bounds are inspectable.
//! - Returned strings are NUL-terminated, UTF-8, owned by the caller, and
//!   must be released with `coxkit_string_free`.
//! - On any nonzero status, `coxkit_last_error` describes the failure. The
//!   pointer is valid on the calling thread until the next failing call.

use coxkit::ball::BallCache;
use coxkit::classify;
use coxkit::cli::exit_code_for;
use coxkit::error::CoxError;
use coxkit::parabolic;
use coxkit::qm;
use coxkit::rankone;
use coxkit::system::CoxeterSystem;
use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

pub const COXKIT_OK: c_int = 0;
pub const COXKIT_ERR_INVALID: c_int = 1;
pub const COXKIT_INCONCLUSIVE: c_int = 2;
pub const COXKIT_ERR_NULL: c_int = 3;
pub const COXKIT_ERR_INTERNAL: c_int = 4;

/// A Coxeter system handle.
pub struct CoxkitSystem {
    inner: CoxeterSystem,
}

/// A reusable ball-of-elements handle for repeated searches. Owns its own
/// copy of the system, so it stays valid after the system handle is freed.
pub struct CoxkitBall {
    // Declared before the system so it drops first.
    inner: BallCache<'static>,
    _sys: Box<CoxeterSystem>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn error_code(err: &CoxError) -> c_int {
    exit_code_for(err) as c_int
}

fn fail(err: &CoxError) -> c_int {
    set_error(&err.to_string());
    error_code(err)
}

/// # Safety: `p` must be NUL-terminated and valid for reads.
unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, c_int> {
    if p.is_null() {
        set_error("null string argument");
        return Err(COXKIT_ERR_NULL);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        COXKIT_ERR_INVALID
    })
}

unsafe fn write_string(s: String, out: *mut *mut c_char) -> c_int {
    if out.is_null() {
        set_error("null out-parameter");
        return COXKIT_ERR_NULL;
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            COXKIT_OK
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            COXKIT_ERR_INTERNAL
        }
    }
}

unsafe fn system_ref<'a>(h: *const CoxkitSystem) -> Result<&'a CoxeterSystem, c_int> {
    if h.is_null() {
        set_error("null system handle");
        return Err(COXKIT_ERR_NULL);
    }
    Ok(&(*h).inner)
}

fn guarded<F: FnOnce() -> c_int>(f: F) -> c_int {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            COXKIT_ERR_INTERNAL
        }
    }
}

fn json_out<T: serde::Serialize>(value: &T, out: *mut *mut c_char) -> c_int {
    match serde_json::to_string_pretty(value) {
        Ok(s) => unsafe { write_string(s, out) },
        Err(e) => {
            set_error(&format!("serialization failed: {e}"));
            COXKIT_ERR_INTERNAL
        }
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn coxkit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread; do not free.
#[no_mangle]
pub extern "C" fn coxkit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn coxkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"generators": [...], "m": [[...]]}` (0 encodes an infinite bond)
/// into a new system handle.
#[no_mangle]
pub unsafe extern "C" fn coxkit_system_from_json(
    json: *const c_char,
    out: *mut *mut CoxkitSystem,
) -> c_int {
    guarded(|| {
        if out.is_null() {
            set_error("null out-parameter");
            return COXKIT_ERR_NULL;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(code) => return code,
        };
        match CoxeterSystem::from_json(text) {
            Ok(sys) => {
                *out = Box::into_raw(Box::new(CoxkitSystem { inner: sys }));
                COXKIT_OK
            }
            Err(e) => fail(&e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn coxkit_system_free(h: *mut CoxkitSystem) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

#[no_mangle]
pub unsafe extern "C" fn coxkit_system_rank(
    h: *const CoxkitSystem,
    out: *mut u32,
) -> c_int {
    guarded(|| {
        let sys = match system_ref(h) {
            Ok(s) => s,
            Err(code) => return code,
        };
        if out.is_null() {
            set_error("null out-parameter");
            return COXKIT_ERR_NULL;
        }
        *out = sys.rank() as u32;
        COXKIT_OK
    })
}

/// ShortLex normal form of a whitespace-separated word ("e" for identity).
#[no_mangle]
pub unsafe extern "C" fn coxkit_normal_form(
    h: *const CoxkitSystem,
    word: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        let sys = match system_ref(h) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let text = match read_str(word) {
            Ok(t) => t,
            Err(code) => return code,
        };
        match sys.element_from_str(text) {
            Ok(e) => write_string(sys.format_word(e.word()), out),
            Err(e) => fail(&e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn coxkit_multiply(
    h: *const CoxkitSystem,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        let sys = match system_ref(h) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let (ta, tb) = match (read_str(a), read_str(b)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(code), _) | (_, Err(code)) => return code,
        };
        let run = || -> Result<String, CoxError> {
            let ea = sys.element_from_str(ta)?;
            let eb = sys.element_from_str(tb)?;
            Ok(sys.format_word(sys.multiply(&ea, &eb)?.word()))
        };
        match run() {
            Ok(s) => write_string(s, out),
            Err(e) => fail(&e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn coxkit_invert(
    h: *const CoxkitSystem,
    word: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        let sys = match system_ref(h) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let text = match read_str(word) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let run = || -> Result<String, CoxError> {
            let e = sys.element_from_str(text)?;
            Ok(sys.format_word(sys.invert(&e)?.word()))
        };
        match run() {
            Ok(s) => write_string(s, out),
            Err(e) => fail(&e),
        }
    })
}

/// Reflection-diagram report for a generator subset, as JSON. `subset` is a
/// whitespace-separated list of generator names, or NULL for all of them.
#[no_mangle]
pub unsafe extern "C" fn coxkit_classify(
    h: *const CoxkitSystem,
    subset: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        let sys = match system_ref(h) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let mask = if subset.is_null() {
            sys.full_mask()
        } else {
            let text = match read_str(subset) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let mut mask = 0u64;
            for token in text.split_whitespace() {
                match sys.gen_index(token) {
                    Ok(s) => mask |= 1 << s,
                    Err(e) => return fail(&e),
                }
            }
            mask
        };
        let shape = classify::shape(sys, mask);
        json_out(
            &serde_json::json!({
                "generators": sys.mask_names(mask),
                "shape": shape,
                "all_spherical": shape.all_spherical(),
                "obstruction": shape.obstruction(),
            }),
            out,
        )
    })
}

/// Parabolic closure of the cyclic subgroup generated by the word, as JSON.
#[no_mangle]
pub unsafe extern "C" fn coxkit_parabolic_closure(
    h: *const CoxkitSystem,
    word: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        let sys = match system_ref(h) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let text = match read_str(word) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let e = match sys.element_from_str(text) {
            Ok(e) => e,
            Err(e) => return fail(&e),
        };
        let pres = parabolic::parabolic_closure(sys, &e);
        json_out(
            &serde_json::json!({
                "conjugator": sys.format_word(pres.conjugator.word()),
                "generators": sys.mask_names(pres.gens_mask),
                "standard": pres.is_standard(),
                "essential": pres.gens_mask == sys.full_mask(),
                "shape": parabolic::closure_shape(sys, &pres),
            }),
            out,
        )
    })
}

/// Rank-one decision for the word, as JSON.
#[no_mangle]
pub unsafe extern "C" fn coxkit_rank_one(
    h: *const CoxkitSystem,
    word: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        let sys = match system_ref(h) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let text = match read_str(word) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let e = match sys.element_from_str(text) {
            Ok(e) => e,
            Err(e) => return fail(&e),
        };
        json_out(&rankone::is_rank_one(sys, &e), out)
    })
}

/// Builds a ball of all elements within the given word length.
#[no_mangle]
pub unsafe extern "C" fn coxkit_ball_build(
    h: *const CoxkitSystem,
    radius: u32,
    out: *mut *mut CoxkitBall,
) -> c_int {
    guarded(|| {
        let sys = match system_ref(h) {
            Ok(s) => s,
            Err(code) => return code,
        };
        if out.is_null() {
            set_error("null out-parameter");
            return COXKIT_ERR_NULL;
        }
        let own = match CoxeterSystem::from_json(&sys.to_json()) {
            Ok(s) => Box::new(s),
            Err(e) => return fail(&e),
        };
        // The boxed system's address is stable and outlives the cache.
        let sys_ref: &'static CoxeterSystem = &*(&*own as *const CoxeterSystem);
        match BallCache::build(sys_ref, radius as usize) {
            Ok(ball) => {
                *out = Box::into_raw(Box::new(CoxkitBall { inner: ball, _sys: own }));
                COXKIT_OK
            }
            Err(e) => fail(&e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn coxkit_ball_free(h: *mut CoxkitBall) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

#[no_mangle]
pub unsafe extern "C" fn coxkit_ball_len(h: *const CoxkitBall, out: *mut u64) -> c_int {
    guarded(|| {
        if h.is_null() || out.is_null() {
            set_error("null argument");
            return COXKIT_ERR_NULL;
        }
        *out = (*h).inner.len() as u64;
        COXKIT_OK
    })
}

/// Searches a shared ball for an independent element commuting with the
/// word. Returns COXKIT_OK when a witness is found, COXKIT_INCONCLUSIVE
/// when the ball is exhausted; the JSON report is written either way.
#[no_mangle]
pub unsafe extern "C" fn coxkit_z2_witness(
    h: *const CoxkitSystem,
    ball: *const CoxkitBall,
    word: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        let sys = match system_ref(h) {
            Ok(s) => s,
            Err(code) => return code,
        };
        if ball.is_null() {
            set_error("null ball handle");
            return COXKIT_ERR_NULL;
        }
        let text = match read_str(word) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let run = || -> Result<rankone::Z2Report, CoxError> {
            let e = sys.element_from_str(text)?;
            rankone::z2_witness_search_in(sys, &e, &(*ball).inner)
        };
        match run() {
            Ok(rep) => {
                let found = rep.witness.is_some();
                let code = json_out(&rep, out);
                if code != COXKIT_OK {
                    return code;
                }
                if found {
                    COXKIT_OK
                } else {
                    set_error("no commuting independent element within the ball");
                    COXKIT_INCONCLUSIVE
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Searches for (a, b) with word2^n = a word1^n b for all n up to the
/// horizon. Returns COXKIT_OK when witnessed, COXKIT_INCONCLUSIVE when the
/// bounds are exhausted; the JSON report is written either way.
#[no_mangle]
pub unsafe extern "C" fn coxkit_equivalence_witness(
    h: *const CoxkitSystem,
    word1: *const c_char,
    word2: *const c_char,
    bound: u32,
    horizon: u32,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        let sys = match system_ref(h) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let (t1, t2) = match (read_str(word1), read_str(word2)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(code), _) | (_, Err(code)) => return code,
        };
        let run = || -> Result<rankone::EquivalenceReport, CoxError> {
            let e1 = sys.element_from_str(t1)?;
            let e2 = sys.element_from_str(t2)?;
            rankone::equivalence_witness(sys, &e1, &e2, bound as usize, horizon as usize)
        };
        match run() {
            Ok(rep) => {
                let found = rep.witness.is_some();
                let code = json_out(&rep, out);
                if code != COXKIT_OK {
                    return code;
                }
                if found {
                    COXKIT_OK
                } else {
                    set_error("no equivalence witness at the given bounds");
                    COXKIT_INCONCLUSIVE
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Axis-counting evaluation: value of the counting function attached to the
/// axis word at the query word.
#[no_mangle]
pub unsafe extern "C" fn coxkit_axis_count(
    h: *const CoxkitSystem,
    axis_word: *const c_char,
    query_word: *const c_char,
    out: *mut i64,
) -> c_int {
    guarded(|| {
        let sys = match system_ref(h) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let (ta, tq) = match (read_str(axis_word), read_str(query_word)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(code), _) | (_, Err(code)) => return code,
        };
        if out.is_null() {
            set_error("null out-parameter");
            return COXKIT_ERR_NULL;
        }
        let run = || -> Result<i64, CoxError> {
            let axis = sys.element_from_str(ta)?;
            let query = sys.element_from_str(tq)?;
            let counting = qm::axis_counting(sys, &axis, 1)?;
            Ok(counting.qm.value(&query))
        };
        match run() {
            Ok(v) => {
                *out = v;
                COXKIT_OK
            }
            Err(e) => fail(&e),
        }
    })
}
