//! C ABI over the termination toolkit.
//!
//! Relations travel as opaque handles created from the same line format
//! the CLI reads. Every call returns a [`WfStatus`]; outputs go through
//! out-pointers. A thread-local message for the last failure is
//! available through [`wf_last_error_message`].
//!
//! Ownership: anything returned through a `*mut WfRelation` out-pointer
//! belongs to the caller and must be released with [`wf_relation_free`].

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use wfcheck::bounds::StateFunction;
use wfcheck::error::Error;
use wfcheck::invariant::{self, Conclusion};
use wfcheck::largeness::{self, LargenessMode};
use wfcheck::relation::TransitionSystem;
use wfcheck::{bounds, hclosure, hierarchy, io, FghBudget, RunConfig};

/// Opaque relation handle.
pub struct WfRelation {
    inner: wfcheck::FiniteRelation,
}

/// Status code for every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WfStatus {
    Ok = 0,
    NullPointer = 1,
    ParseError = 2,
    StateNotInDomain = 3,
    CapExceeded = 4,
    BudgetExceeded = 5,
    NotWellFounded = 6,
    NotDeterministic = 7,
    NotBounded = 8,
    ValueOverflow = 9,
    NotFound = 10,
    OtherError = 11,
}

/// Conclusion of an invariant check, mirroring the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WfConclusion {
    Terminating = 0,
    InvalidInvariant = 1,
    Nonterminating = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(e: &Error) -> WfStatus {
    let status = match e {
        Error::Parse(_) | Error::Io(_) => WfStatus::ParseError,
        Error::StateNotInDomain(_) => WfStatus::StateNotInDomain,
        Error::InstanceCapExceeded(_) => WfStatus::CapExceeded,
        Error::BudgetExceeded(_) => WfStatus::BudgetExceeded,
        Error::NotWellFounded { .. } | Error::NotHWellFounded(_) => WfStatus::NotWellFounded,
        Error::NotDeterministic(_) => WfStatus::NotDeterministic,
        Error::NotBounded { .. } | Error::NotABound { .. } => WfStatus::NotBounded,
        Error::ArithmeticOverflow(_) => WfStatus::ValueOverflow,
        Error::NotFoundWithinCap(_) | Error::OutsideTable(_) => WfStatus::NotFound,
        _ => WfStatus::OtherError,
    };
    let msg = CString::new(e.to_string()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
    status
}

/// Message for the most recent failure on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

fn default_config() -> RunConfig {
    RunConfig::default()
}

/// Parses a relation from the CLI's line format (`domain:` header plus
/// one `x y` edge per line). On success the new handle is written to
/// `out`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_relation_parse(
    text: *const c_char,
    out: *mut *mut WfRelation,
) -> WfStatus {
    if text.is_null() || out.is_null() {
        return WfStatus::NullPointer;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return WfStatus::ParseError;
    };
    match io::parse_relation(text, &default_config()) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(WfRelation { inner }));
            WfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Releases a relation handle. Null is accepted and ignored.
///
/// # Safety
/// `r` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wf_relation_free(r: *mut WfRelation) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of states in the domain.
///
/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wf_relation_state_count(r: *const WfRelation) -> usize {
    r.as_ref().map_or(0, |r| r.inner.domain().len())
}

/// Number of edges.
///
/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wf_relation_edge_count(r: *const WfRelation) -> usize {
    r.as_ref().map_or(0, |r| r.inner.edges().len())
}

/// Writes the transitive closure of `r` to `out` as a fresh handle.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_relation_transitive_closure(
    r: *const WfRelation,
    out: *mut *mut WfRelation,
) -> WfStatus {
    let (Some(r), false) = (r.as_ref(), out.is_null()) else {
        return WfStatus::NullPointer;
    };
    match r.inner.transitive_closure(&default_config()) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(WfRelation { inner }));
            WfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Sets `out` to 1 when the relation admits no infinite decreasing
/// sequence (equivalently, has no cycle), else 0.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_relation_is_well_founded(
    r: *const WfRelation,
    out: *mut u8,
) -> WfStatus {
    let (Some(r), false) = (r.as_ref(), out.is_null()) else {
        return WfStatus::NullPointer;
    };
    *out = u8::from(r.inner.is_well_founded().well_founded);
    WfStatus::Ok
}

/// Sets `out` to 1 when the relation is H-well-founded (no infinite
/// decreasing transitive sequence; on finite domains, irreflexive).
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_relation_is_h_well_founded(
    r: *const WfRelation,
    out: *mut u8,
) -> WfStatus {
    let (Some(r), false) = (r.as_ref(), out.is_null()) else {
        return WfStatus::NullPointer;
    };
    *out = u8::from(hclosure::is_h_well_founded(&r.inner).h_well_founded);
    WfStatus::Ok
}

/// Length (element count) of the longest decreasing sequence from
/// `start`.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_relation_longest_decreasing(
    r: *const WfRelation,
    start: u64,
    out: *mut u64,
) -> WfStatus {
    let (Some(r), false) = (r.as_ref(), out.is_null()) else {
        return WfStatus::NullPointer;
    };
    match r.inner.longest_decreasing_sequence(start) {
        Ok((len, _)) => {
            *out = len;
            WfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Checks whether `f(x) = x + 1` evaluated over the domain is a bound;
/// sets `out` to 1 when every decreasing sequence from a has at most
/// a + 1 elements.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_relation_is_f0_bounded(r: *const WfRelation, out: *mut u8) -> WfStatus {
    let (Some(r), false) = (r.as_ref(), out.is_null()) else {
        return WfStatus::NullPointer;
    };
    let f0 = StateFunction::tabulate(&r.inner, |x| x + 1);
    match bounds::is_bound(&r.inner, &f0) {
        Ok(v) => {
            *out = u8::from(v.ok);
            WfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Runs the transition-invariant check: `initial` lists the initial
/// states of the system over `r`, and `parts` the candidate invariant.
///
/// # Safety
/// All pointers must be valid for their stated lengths; every relation
/// handle must be live.
#[no_mangle]
pub unsafe extern "C" fn wf_check_invariant(
    r: *const WfRelation,
    initial: *const u64,
    initial_len: usize,
    parts: *const *const WfRelation,
    parts_len: usize,
    out: *mut WfConclusion,
) -> WfStatus {
    let (Some(r), false) = (r.as_ref(), out.is_null()) else {
        return WfStatus::NullPointer;
    };
    if (initial.is_null() && initial_len > 0) || (parts.is_null() && parts_len > 0) {
        return WfStatus::NullPointer;
    }
    let initial: &[u64] = if initial_len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(initial, initial_len)
    };
    let handles: &[*const WfRelation] = if parts_len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(parts, parts_len)
    };
    let mut part_relations = Vec::with_capacity(parts_len);
    for &h in handles {
        let Some(h) = h.as_ref() else {
            return WfStatus::NullPointer;
        };
        part_relations.push(h.inner.clone());
    }
    let cfg = default_config();
    let verdict = (|| {
        let ts = TransitionSystem::new(r.inner.clone(), initial.iter().copied())?;
        invariant::check_invariant(&ts, &part_relations, &cfg)
    })();
    match verdict {
        Ok(v) => {
            *out = match v.conclusion {
                Conclusion::Terminating => WfConclusion::Terminating,
                Conclusion::InvalidInvariant => WfConclusion::InvalidInvariant,
                Conclusion::NonterminatingWitness => WfConclusion::Nonterminating,
            };
            WfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Evaluates F_n(x) under the given budget. Fails with `ValueOverflow`
/// when the exact value does not fit in 64 bits.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_fgh(
    n: u32,
    x: u64,
    max_result_bits: u64,
    max_recursive_steps: u64,
    out: *mut u64,
) -> WfStatus {
    if out.is_null() {
        return WfStatus::NullPointer;
    }
    if max_result_bits == 0 || max_recursive_steps == 0 {
        return WfStatus::ParseError;
    }
    let budget = FghBudget::new(max_result_bits, max_recursive_steps);
    match hierarchy::fgh_u64(n, x, &budget) {
        Ok(v) => match u64::try_from(&v) {
            Ok(v) => {
                *out = v;
                WfStatus::Ok
            }
            Err(_) => {
                let e = Error::ArithmeticOverflow("value does not fit in 64 bits".into());
                set_error(&e)
            }
        },
        Err(e) => set_error(&e),
    }
}

/// Sets `out` to 1 when the listed set is k-large.
///
/// # Safety
/// `elements` must be valid for `len` reads and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_is_k_large(
    elements: *const u64,
    len: usize,
    k: u32,
    out: *mut u8,
) -> WfStatus {
    if (elements.is_null() && len > 0) || out.is_null() {
        return WfStatus::NullPointer;
    }
    let slice: &[u64] = if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(elements, len)
    };
    let set: BTreeSet<u64> = slice.iter().copied().collect();
    match largeness::is_k_large(&set, k, LargenessMode::Exhaustive, &default_config()) {
        Ok(v) => {
            *out = u8::from(v.is_some());
            WfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// WW_m(x): least y <= cap with (x, y] m-w-dense.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_ww(m: u32, x: u64, cap: u64, out: *mut u64) -> WfStatus {
    if out.is_null() {
        return WfStatus::NullPointer;
    }
    match largeness::ww(m, x, cap, &default_config()) {
        Ok(v) => {
            *out = v;
            WfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// HH_m(x): least y <= cap with (x, y] m-dense.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_hh(m: u32, x: u64, cap: u64, out: *mut u64) -> WfStatus {
    if out.is_null() {
        return WfStatus::NullPointer;
    }
    match largeness::hh(m, x, cap, &default_config()) {
        Ok(v) => {
            *out = v;
            WfStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}
