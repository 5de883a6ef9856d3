//! C ABI for the cullis library.
//!
//! Objects cross the boundary as opaque handles that the caller frees with the matching
//! `*_free` function. Every fallible call returns a [`CullisStatus`]; the message of the
//! most recent failure on the calling thread is available from [`cullis_last_error`].
//! Strings are returned by copying into a caller buffer: the required length (without
//! the terminating NUL) is always stored in `*len`, and `CULLIS_BUFFER_TOO_SMALL` is
//! returned when `cap` cannot hold it plus the NUL.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cullis::cullis::{det, Algorithm};
use cullis::linalg::rank;
use cullis::linvar::{ConstraintSystem, LinearVariety};
use cullis::verify::{
    annihilates_det, verify_characterization, verify_codim_bound, verify_lemma_suite, verify_z_condition,
    LemmaSuiteConfig, Mode, SweepConfig, VerificationReport, DEFAULT_BUDGET, DEFAULT_SAMPLES,
};
use cullis::{Error, Mat};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CullisStatus {
    Ok = 0,
    NullArgument,
    InvalidUtf8,
    BufferTooSmall,
    Panic,
    InvalidField,
    FieldMismatch,
    Bounds,
    Shape,
    Parity,
    DivisionByZero,
    Parse,
    GroundSet,
    SizeCap,
    Unsupported,
    Precondition,
    Rank,
    EmptyVariety,
    Hypothesis,
}

impl From<&Error> for CullisStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidField(_) => CullisStatus::InvalidField,
            Error::FieldMismatch(_) => CullisStatus::FieldMismatch,
            Error::Bounds(_) => CullisStatus::Bounds,
            Error::Shape(_) => CullisStatus::Shape,
            Error::Parity(_) => CullisStatus::Parity,
            Error::DivisionByZero => CullisStatus::DivisionByZero,
            Error::Parse { .. } => CullisStatus::Parse,
            Error::GroundSet(_) => CullisStatus::GroundSet,
            Error::SizeCap(_) => CullisStatus::SizeCap,
            Error::Unsupported(_) => CullisStatus::Unsupported,
            Error::Precondition(_) => CullisStatus::Precondition,
            Error::Rank(_) => CullisStatus::Rank,
            Error::EmptyVariety => CullisStatus::EmptyVariety,
            Error::Hypothesis(_) => CullisStatus::Hypothesis,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CullisAlgorithm {
    Injection = 0,
    Minor,
    /// Memoized Laplace expansion along the first column.
    Laplace,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CullisMode {
    Exhaustive = 0,
    Sampled,
}

/// Sweep settings; start from [`cullis_sweep_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CullisSweepOptions {
    pub mode: CullisMode,
    /// Upper bound on determinant evaluations for exhaustive work.
    pub budget: u64,
    /// Random cases in sampled mode.
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; 0 is treated as 1.
    pub jobs: u32,
}

/// A matrix over `Q` or a prime field.
pub struct CullisMatrix(Mat);

/// A nonempty affine variety given by its constraint system.
pub struct CullisVariety(LinearVariety);

/// The outcome of a verification sweep.
pub struct CullisReport(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Failure(CullisStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(CullisStatus::from(&e), e.to_string())
    }
}

fn fail(status: CullisStatus, message: &str) -> Failure {
    Failure(status, message.to_string())
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CullisStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|panic| {
        let what = panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(Failure(CullisStatus::Panic, what))
    });
    match outcome {
        Ok(()) => CullisStatus::Ok,
        Err(Failure(status, message)) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = message);
            status
        }
    }
}

unsafe fn utf8<'a>(ptr: *const c_char) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(fail(CullisStatus::NullArgument, "text pointer is null"));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| fail(CullisStatus::InvalidUtf8, "text is not UTF-8"))
}

unsafe fn handle<'a, T>(ptr: *const T) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| fail(CullisStatus::NullArgument, "handle is null"))
}

unsafe fn out<'a, T>(ptr: *mut T) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| fail(CullisStatus::NullArgument, "output pointer is null"))
}

unsafe fn copy_out(s: &str, buf: *mut c_char, cap: usize, len: *mut usize) -> Result<(), Failure> {
    *out(len)? = s.len();
    if buf.is_null() || cap <= s.len() {
        return Err(fail(CullisStatus::BufferTooSmall, "buffer cannot hold the result"));
    }
    std::ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cullis_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the message of the last failure on this thread.
///
/// # Safety
/// `buf` must be valid for `cap` bytes and `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_last_error(buf: *mut c_char, cap: usize, len: *mut usize) -> CullisStatus {
    let message = LAST_ERROR.with(|e| e.borrow().clone());
    guard(|| copy_out(&message, buf, cap, len))
}

/// Parses a matrix in the `rows cols field` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out_matrix` writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_matrix_parse(text: *const c_char, out_matrix: *mut *mut CullisMatrix) -> CullisStatus {
    guard(|| {
        let slot = out(out_matrix)?;
        let m = Mat::parse(utf8(text)?)?;
        *slot = Box::into_raw(Box::new(CullisMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from [`cullis_matrix_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cullis_matrix_free(m: *mut CullisMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live matrix handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_matrix_shape(
    m: *const CullisMatrix,
    rows: *mut usize,
    cols: *mut usize,
) -> CullisStatus {
    guard(|| {
        let m = &handle(m)?.0;
        *out(rows)? = m.rows();
        *out(cols)? = m.cols();
        Ok(())
    })
}

/// # Safety
/// `m` must be a live matrix handle and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_matrix_rank(m: *const CullisMatrix, result: *mut usize) -> CullisStatus {
    guard(|| {
        *out(result)? = rank(&handle(m)?.0);
        Ok(())
    })
}

/// Writes `det_{n,k}` of an `n x k` matrix with `n >= k` as text, e.g. `-3/2` or `4`.
///
/// # Safety
/// `m` must be a live matrix handle, `buf` valid for `cap` bytes and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_matrix_det(
    m: *const CullisMatrix,
    algo: CullisAlgorithm,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> CullisStatus {
    guard(|| {
        let algo = match algo {
            CullisAlgorithm::Injection => Algorithm::Injection,
            CullisAlgorithm::Minor => Algorithm::Minor,
            CullisAlgorithm::Laplace => Algorithm::Laplace,
        };
        let value = det(&handle(m)?.0, algo)?;
        copy_out(&value.to_string(), buf, cap, len)
    })
}

/// Parses a variety in the `space ...` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out_variety` writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_variety_parse(
    text: *const c_char,
    out_variety: *mut *mut CullisVariety,
) -> CullisStatus {
    guard(|| {
        let slot = out(out_variety)?;
        let cs = ConstraintSystem::parse(utf8(text)?)?;
        let var = LinearVariety::from_constraints(cs).ok_or(Error::EmptyVariety)?;
        *slot = Box::into_raw(Box::new(CullisVariety(var)));
        Ok(())
    })
}

/// # Safety
/// `v` must be null or a handle from [`cullis_variety_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cullis_variety_free(v: *mut CullisVariety) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `v` must be a live variety handle and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_variety_codim(v: *const CullisVariety, result: *mut usize) -> CullisStatus {
    guard(|| {
        *out(result)? = handle(v)?.0.codim();
        Ok(())
    })
}

/// Whether `det_{n,k}` vanishes on every point of a variety of `n x k` matrices.
///
/// # Safety
/// `v` must be a live variety handle and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_variety_annihilates(v: *const CullisVariety, result: *mut bool) -> CullisStatus {
    guard(|| {
        *out(result)? = annihilates_det(&handle(v)?.0, u128::MAX)?;
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn cullis_sweep_options_default() -> CullisSweepOptions {
    let d = SweepConfig::default();
    CullisSweepOptions {
        mode: CullisMode::Exhaustive,
        budget: DEFAULT_BUDGET as u64,
        samples: DEFAULT_SAMPLES,
        seed: d.seed,
        jobs: d.jobs as u32,
    }
}

fn sweep_config(opts: Option<&CullisSweepOptions>) -> SweepConfig {
    let o = opts.copied().unwrap_or_else(|| cullis_sweep_options_default());
    SweepConfig {
        mode: match o.mode {
            CullisMode::Exhaustive => Mode::Exhaustive,
            CullisMode::Sampled => Mode::Sampled,
        },
        budget: u128::from(o.budget),
        samples: o.samples,
        seed: o.seed,
        jobs: o.jobs.max(1) as usize,
    }
}

unsafe fn sweep(
    opts: *const CullisSweepOptions,
    out_report: *mut *mut CullisReport,
    run: impl FnOnce(&SweepConfig) -> cullis::Result<VerificationReport>,
) -> CullisStatus {
    guard(|| {
        let slot = out(out_report)?;
        let report = run(&sweep_config(opts.as_ref()))?;
        *slot = Box::into_raw(Box::new(CullisReport(report)));
        Ok(())
    })
}

/// Searches varieties of codimension below `k` for one annihilating `det_{n,k}`.
///
/// # Safety
/// `opts` must be null (defaults) or valid; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_verify_codim_bound(
    n: usize,
    k: usize,
    q: u32,
    opts: *const CullisSweepOptions,
    out_report: *mut *mut CullisReport,
) -> CullisStatus {
    sweep(opts, out_report, |cfg| verify_codim_bound(n, k, q, cfg))
}

/// Checks the alternating-row-sum characterization; needs `n >= k + 2`.
///
/// # Safety
/// `opts` must be null (defaults) or valid; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_verify_characterization(
    n: usize,
    k: usize,
    q: u32,
    opts: *const CullisSweepOptions,
    out_report: *mut *mut CullisReport,
) -> CullisStatus {
    sweep(opts, out_report, |cfg| verify_characterization(n, k, q, cfg))
}

/// Compares enumeration with the closed-form condition for every row relation.
///
/// # Safety
/// `opts` must be null (defaults) or valid; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_verify_z_condition(
    n: usize,
    k: usize,
    q: u32,
    opts: *const CullisSweepOptions,
    out_report: *mut *mut CullisReport,
) -> CullisStatus {
    sweep(opts, out_report, |cfg| verify_z_condition(n, k, q, cfg))
}

/// Runs every registered lemma check.
///
/// # Safety
/// `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_verify_lemmas(
    seed: u64,
    jobs: u32,
    out_report: *mut *mut CullisReport,
) -> CullisStatus {
    guard(|| {
        let slot = out(out_report)?;
        let cfg = LemmaSuiteConfig { seed, jobs: jobs.max(1) as usize, ..Default::default() };
        *slot = Box::into_raw(Box::new(CullisReport(verify_lemma_suite(&cfg)?)));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a report handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cullis_report_free(r: *mut CullisReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// False for a null handle.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cullis_report_passed(r: *const CullisReport) -> bool {
    r.as_ref().is_some_and(|r| r.0.passed())
}

/// Cases examined; 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cullis_report_cases(r: *const CullisReport) -> u64 {
    r.as_ref().map_or(0, |r| r.0.cases)
}

/// Counterexamples found; 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cullis_report_counterexamples(r: *const CullisReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.counterexamples.len())
}

/// The report as JSON lines, without wall time.
///
/// # Safety
/// `r` must be a live report handle, `buf` valid for `cap` bytes and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn cullis_report_records(
    r: *const CullisReport,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> CullisStatus {
    guard(|| copy_out(&handle(r)?.0.to_records(false), buf, cap, len))
}
