//! C ABI for the `chh` library.
//!
//! Sketches and reports are opaque heap handles owned by the caller and
//! released with [`chh_free`] and [`chh_report_free`]. Every function returns
//! a [`ChhStatus`]; on failure, [`chh_last_error`] holds a message for the
//! calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{self, AssertUnwindSafe};

use chh::{
    chh_sizing, eval::equal_space_config, mgchh_sizing, ChhAlgorithm, ChhError, ChhParams,
    ChhReport, ChhSketch, ExactCounts, MgchhSketch,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    InvalidCapacity = 3,
    InfeasibleSpace = 4,
    OutOfRange = 5,
    Unsupported = 6,
    Panic = 7,
}

/// A sketch or exact counter.
pub struct ChhHandle {
    algo: Box<dyn ChhAlgorithm + Send>,
}

/// The result of a query.
pub struct ChhReportHandle {
    report: ChhReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: ChhStatus, msg: impl AsRef<str>) -> ChhStatus {
    set_error(msg.as_ref());
    status
}

fn from_error(e: ChhError) -> ChhStatus {
    let status = match e {
        ChhError::InvalidCapacity(_) => ChhStatus::InvalidCapacity,
        ChhError::InfeasibleSpace(_) => ChhStatus::InfeasibleSpace,
        _ => ChhStatus::InvalidParams,
    };
    fail(status, e.to_string())
}

fn guard<F: FnOnce() -> Result<(), ChhStatus>>(f: F) -> ChhStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChhStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(ChhStatus::Panic, "internal panic"),
    }
}

fn null(what: &str) -> ChhStatus {
    fail(ChhStatus::NullPointer, format!("{what} is null"))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, ChhStatus> {
    p.as_mut().ok_or_else(|| null(what))
}

fn check_thresholds(phi1: f64, phi2: f64) -> Result<(), ChhStatus> {
    if phi1 > 0.0 && phi1 < 1.0 && phi2 > 0.0 && phi2 < 1.0 {
        Ok(())
    } else {
        Err(fail(
            ChhStatus::InvalidParams,
            format!("thresholds must lie in (0, 1), got phi1={phi1} phi2={phi2}"),
        ))
    }
}

fn params(phi1: f64, phi2: f64, eps1: f64, eps2: f64) -> Result<ChhParams, ChhStatus> {
    ChhParams::new(phi1, phi2, eps1, eps2).map_err(from_error)
}

unsafe fn publish<A: ChhAlgorithm + Send + 'static>(
    algo: chh::Result<A>,
    dst: *mut *mut ChhHandle,
) -> Result<(), ChhStatus> {
    let dst = out(dst, "out")?;
    let algo = algo.map_err(from_error)?;
    *dst = Box::into_raw(Box::new(ChhHandle {
        algo: Box::new(algo),
    }));
    Ok(())
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn chh_status_str(status: ChhStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        ChhStatus::Ok => b"ok\0",
        ChhStatus::NullPointer => b"null pointer argument\0",
        ChhStatus::InvalidParams => b"invalid parameters\0",
        ChhStatus::InvalidCapacity => b"invalid counter capacity\0",
        ChhStatus::InfeasibleSpace => b"space budget too small\0",
        ChhStatus::OutOfRange => b"index out of range\0",
        ChhStatus::Unsupported => b"unsupported for this algorithm\0",
        ChhStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failure on this thread, or an empty string. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn chh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Counters `(k1, k2)` for the space-saving algorithm.
///
/// # Safety
/// `out_k1` and `out_k2` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_csschh_sizing(
    phi1: f64,
    phi2: f64,
    eps1: f64,
    eps2: f64,
    out_k1: *mut u64,
    out_k2: *mut u64,
) -> ChhStatus {
    guard(|| {
        let (k1, k2) = (out(out_k1, "out_k1")?, out(out_k2, "out_k2")?);
        let s = chh_sizing(&params(phi1, phi2, eps1, eps2)?).map_err(from_error)?;
        (*k1, *k2) = (s.k1, s.k2);
        Ok(())
    })
}

/// Counters `(s1, s2)` for the Misra-Gries baseline.
///
/// # Safety
/// `out_s1` and `out_s2` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_mgchh_sizing(
    phi1: f64,
    phi2: f64,
    eps1: f64,
    eps2: f64,
    out_s1: *mut u64,
    out_s2: *mut u64,
) -> ChhStatus {
    guard(|| {
        let (s1, s2) = (out(out_s1, "out_s1")?, out(out_s2, "out_s2")?);
        (*s1, *s2) = mgchh_sizing(&params(phi1, phi2, eps1, eps2)?).map_err(from_error)?;
        Ok(())
    })
}

/// Equal-memory counters for both algorithms within `space_bytes`.
///
/// # Safety
/// All four outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_equal_space(
    space_bytes: u64,
    out_k1: *mut u64,
    out_k2: *mut u64,
    out_s1: *mut u64,
    out_s2: *mut u64,
) -> ChhStatus {
    guard(|| {
        let (k1, k2) = (out(out_k1, "out_k1")?, out(out_k2, "out_k2")?);
        let (s1, s2) = (out(out_s1, "out_s1")?, out(out_s2, "out_s2")?);
        let c = equal_space_config(space_bytes).map_err(from_error)?;
        (*k1, *k2, *s1, *s2) = (c.k1, c.k2, c.s1, c.s2);
        Ok(())
    })
}

/// Space-saving sketch sized from error tolerances.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_csschh_new(
    phi1: f64,
    phi2: f64,
    eps1: f64,
    eps2: f64,
    out: *mut *mut ChhHandle,
) -> ChhStatus {
    guard(|| publish(ChhSketch::new(params(phi1, phi2, eps1, eps2)?), out))
}

/// Space-saving sketch with explicit counters.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_csschh_with_counters(
    k1: usize,
    k2: usize,
    out: *mut *mut ChhHandle,
) -> ChhStatus {
    guard(|| publish(ChhSketch::with_counters(k1, k2), out))
}

/// Misra-Gries baseline with explicit counters.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_mgchh_new(
    s1: usize,
    s2: usize,
    seed: u64,
    out: *mut *mut ChhHandle,
) -> ChhStatus {
    guard(|| publish(MgchhSketch::new(s1, s2, seed), out))
}

/// Misra-Gries baseline sized from error tolerances.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_mgchh_from_params(
    phi1: f64,
    phi2: f64,
    eps1: f64,
    eps2: f64,
    seed: u64,
    out: *mut *mut ChhHandle,
) -> ChhStatus {
    guard(|| {
        publish(
            MgchhSketch::from_params(&params(phi1, phi2, eps1, eps2)?, seed),
            out,
        )
    })
}

/// Exact counter. Memory grows with the number of distinct tuples.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_exact_new(out: *mut *mut ChhHandle) -> ChhStatus {
    guard(|| publish(Ok(ExactCounts::new()), out))
}

/// Feeds one tuple.
///
/// # Safety
/// `h` must be a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn chh_update(h: *mut ChhHandle, x: u64, y: u64) -> ChhStatus {
    guard(|| {
        out(h, "handle")?.algo.update(x, y);
        Ok(())
    })
}

/// Feeds `len` tuples `(xs[i], ys[i])` in order.
///
/// # Safety
/// `h` must be a live handle; `xs` and `ys` must each point to `len`
/// readable values (they may be null when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn chh_update_batch(
    h: *mut ChhHandle,
    xs: *const u64,
    ys: *const u64,
    len: usize,
) -> ChhStatus {
    guard(|| {
        let h = out(h, "handle")?;
        if len == 0 {
            return Ok(());
        }
        if xs.is_null() || ys.is_null() {
            return Err(null("xs/ys"));
        }
        let xs = std::slice::from_raw_parts(xs, len);
        let ys = std::slice::from_raw_parts(ys, len);
        for (&x, &y) in xs.iter().zip(ys) {
            h.algo.update(x, y);
        }
        Ok(())
    })
}

/// Number of tuples fed so far.
///
/// # Safety
/// `h` must be a live handle; `out_n` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_processed(h: *const ChhHandle, out_n: *mut u64) -> ChhStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        *out(out_n, "out_n")? = h.algo.processed();
        Ok(())
    })
}

/// Modeled memory in bytes. `CHH_STATUS_UNSUPPORTED` for the exact counter.
///
/// # Safety
/// `h` must be a live handle; `out_bytes` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_space_bytes(h: *const ChhHandle, out_bytes: *mut u64) -> ChhStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let dst = out(out_bytes, "out_bytes")?;
        match h.algo.space_bytes_model() {
            Some(b) => {
                *dst = b;
                Ok(())
            }
            None => Err(fail(
                ChhStatus::Unsupported,
                "exact counter has no space model",
            )),
        }
    })
}

/// Answers a query; the caller owns the new report.
///
/// # Safety
/// `h` must be a live handle; `out_report` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_query(
    h: *const ChhHandle,
    phi1: f64,
    phi2: f64,
    out_report: *mut *mut ChhReportHandle,
) -> ChhStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let dst = out(out_report, "out_report")?;
        check_thresholds(phi1, phi2)?;
        let report = h.algo.query(phi1, phi2);
        *dst = Box::into_raw(Box::new(ChhReportHandle { report }));
        Ok(())
    })
}

/// Releases a sketch. Null is a no-op.
///
/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chh_free(h: *mut ChhHandle) {
    if !h.is_null() {
        let _ = panic::catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(h))));
    }
}

/// Number of reported primaries; 0 for null.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn chh_report_primary_count(r: *const ChhReportHandle) -> usize {
    r.as_ref().map_or(0, |r| r.report.primaries.len())
}

/// Reported primary `i`, by decreasing estimate.
///
/// # Safety
/// `r` must be a live report; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_report_primary_at(
    r: *const ChhReportHandle,
    i: usize,
    out_item: *mut u64,
    out_freq: *mut u64,
) -> ChhStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("report"))?;
        let (item, freq) = (out(out_item, "out_item")?, out(out_freq, "out_freq")?);
        let p = r.report.primaries.get(i).ok_or_else(|| {
            fail(
                ChhStatus::OutOfRange,
                format!("primary {i} of {}", r.report.primaries.len()),
            )
        })?;
        (*item, *freq) = (p.item, p.freq);
        Ok(())
    })
}

/// Number of reported correlated heavy hitters; 0 for null.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn chh_report_pair_count(r: *const ChhReportHandle) -> usize {
    r.as_ref().map_or(0, |r| r.report.chhs.len())
}

/// Reported tuple `i`, grouped by primary.
///
/// # Safety
/// `r` must be a live report; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn chh_report_pair_at(
    r: *const ChhReportHandle,
    i: usize,
    out_primary: *mut u64,
    out_secondary: *mut u64,
    out_freq: *mut u64,
) -> ChhStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("report"))?;
        let p = out(out_primary, "out_primary")?;
        let s = out(out_secondary, "out_secondary")?;
        let f = out(out_freq, "out_freq")?;
        let c = r.report.chhs.get(i).ok_or_else(|| {
            fail(
                ChhStatus::OutOfRange,
                format!("pair {i} of {}", r.report.chhs.len()),
            )
        })?;
        (*p, *s, *f) = (c.primary, c.secondary, c.freq);
        Ok(())
    })
}

/// Releases a report. Null is a no-op.
///
/// # Safety
/// `r` must be null or a report not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chh_report_free(r: *mut ChhReportHandle) {
    if !r.is_null() {
        let _ = panic::catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(r))));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn status_strings_are_terminated() {
        for s in [ChhStatus::Ok, ChhStatus::Panic, ChhStatus::OutOfRange] {
            let c = unsafe { std::ffi::CStr::from_ptr(chh_status_str(s)) };
            assert!(!c.to_bytes().is_empty());
        }
    }

    #[test]
    fn panics_become_status() {
        assert_eq!(guard(|| panic!("boom")), ChhStatus::Panic);
        let msg = unsafe { std::ffi::CStr::from_ptr(chh_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }

    #[test]
    fn null_outputs_rejected() {
        let st =
            unsafe { chh_csschh_sizing(0.1, 0.1, 0.05, 0.05, ptr::null_mut(), ptr::null_mut()) };
        assert_eq!(st, ChhStatus::NullPointer);
    }
}
