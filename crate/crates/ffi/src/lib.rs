//! C ABI over the ginidyn core: opaque distribution handles, status codes,
//! and plain-struct bound reports. The header `include/ginidyn.h` is
//! generated by cbindgen at build time.
//!
//! Conventions: every fallible function returns a [`GiniDynStatus`] and
//! writes its result through an out-pointer; handles returned through
//! `GiniDynDist**` must be released with [`ginidyn_dist_free`]. Null
//! pointers are reported as `NullPointer`, never dereferenced.

use ginidyn::dist::DistError;
use ginidyn::metrics::MetricsError;
use ginidyn::verifier::VerifierError;
use ginidyn::Dist;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GiniDynStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NegativeMass = 3,
    MassDefect = 4,
    TruncationTooSmall = 5,
    IndexOutOfRange = 6,
    ZeroMean = 7,
    NonIntegerMean = 8,
    IntegerMean = 9,
    InfeasibleMean = 10,
    SupportTooLarge = 11,
    InternalPanic = 12,
}

impl From<&DistError> for GiniDynStatus {
    fn from(e: &DistError) -> Self {
        match e {
            DistError::Empty => GiniDynStatus::InvalidArgument,
            DistError::NegativeMass { .. } => GiniDynStatus::NegativeMass,
            DistError::MassDefect { .. } => GiniDynStatus::MassDefect,
            DistError::TruncationTooSmall { .. } => GiniDynStatus::TruncationTooSmall,
            DistError::IndexOutOfRange { .. } => GiniDynStatus::IndexOutOfRange,
            DistError::NegativeMean(_) => GiniDynStatus::InvalidArgument,
        }
    }
}

impl From<&MetricsError> for GiniDynStatus {
    fn from(e: &MetricsError) -> Self {
        match e {
            MetricsError::ZeroMean => GiniDynStatus::ZeroMean,
            MetricsError::InvalidOrder(_) => GiniDynStatus::InvalidArgument,
        }
    }
}

impl From<&VerifierError> for GiniDynStatus {
    fn from(e: &VerifierError) -> Self {
        match e {
            VerifierError::ZeroMean => GiniDynStatus::ZeroMean,
            VerifierError::NonIntegerMean(_) => GiniDynStatus::NonIntegerMean,
            VerifierError::IntegerMean(_) => GiniDynStatus::IntegerMean,
            VerifierError::InfeasibleMean { .. } => GiniDynStatus::InfeasibleMean,
            VerifierError::SupportTooLarge { .. } => GiniDynStatus::SupportTooLarge,
            VerifierError::Metrics(m) => m.into(),
            VerifierError::Dist(d) => d.into(),
        }
    }
}

/// Opaque handle to a validated distribution on `{0, .., trunc}`.
pub struct GiniDynDist {
    inner: Dist,
}

/// One inequality evaluation: both sides, the slack `rhs - lhs`, and whether
/// the bound held (slack >= -1e-12; two-sided for the `w1_dirac0` identity).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GiniDynBoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

impl From<ginidyn::BoundReport> for GiniDynBoundReport {
    fn from(r: ginidyn::BoundReport) -> Self {
        Self {
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
            pass: r.pass,
        }
    }
}

fn guarded<F: FnOnce() -> GiniDynStatus>(f: F) -> GiniDynStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => GiniDynStatus::InternalPanic,
    }
}

fn emit_dist(result: Result<Dist, DistError>, out: *mut *mut GiniDynDist) -> GiniDynStatus {
    if out.is_null() {
        return GiniDynStatus::NullPointer;
    }
    match result {
        Ok(inner) => {
            let handle = Box::new(GiniDynDist { inner });
            unsafe { *out = Box::into_raw(handle) };
            GiniDynStatus::Ok
        }
        Err(e) => (&e).into(),
    }
}

/// Validates `probs[0..len]` as a distribution on `{0, .., len-1}`.
///
/// # Safety
/// `probs` must point to `len` readable doubles; `out` must be a valid
/// out-pointer. On success the caller owns the handle written to `*out`.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_dist_new(
    probs: *const f64,
    len: usize,
    out: *mut *mut GiniDynDist,
) -> GiniDynStatus {
    if probs.is_null() || out.is_null() {
        return GiniDynStatus::NullPointer;
    }
    let slice = unsafe { std::slice::from_raw_parts(probs, len) };
    guarded(|| emit_dist(Dist::new(slice.to_vec()), out))
}

/// Builds the shifted Bernoulli distribution with mean `mu` on `{0, .., trunc}`.
///
/// # Safety
/// `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_dist_shifted_bernoulli(
    mu: f64,
    trunc: usize,
    out: *mut *mut GiniDynDist,
) -> GiniDynStatus {
    guarded(|| emit_dist(ginidyn::shifted_bernoulli(mu, trunc), out))
}

/// Builds the Dirac distribution at `n` on `{0, .., trunc}`.
///
/// # Safety
/// `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_dist_dirac(
    n: usize,
    trunc: usize,
    out: *mut *mut GiniDynDist,
) -> GiniDynStatus {
    guarded(|| emit_dist(ginidyn::dirac(n, trunc), out))
}

/// Draws a seeded random distribution with mean exactly `mu` on `{0, .., trunc}`.
///
/// # Safety
/// `out` must be a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_sample_vmu(
    mu: f64,
    trunc: usize,
    seed: u64,
    out: *mut *mut GiniDynDist,
) -> GiniDynStatus {
    guarded(|| match ginidyn::sample_vmu(mu, trunc, seed) {
        Ok(d) => emit_dist(Ok(d), out),
        Err(e) => (&e).into(),
    })
}

/// Releases a handle returned by any constructor. Null is a no-op.
///
/// # Safety
/// `dist` must be a handle from this library that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_dist_free(dist: *mut GiniDynDist) {
    if !dist.is_null() {
        drop(unsafe { Box::from_raw(dist) });
    }
}

/// Number of represented states (`trunc + 1`).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_dist_len(
    dist: *const GiniDynDist,
    out: *mut usize,
) -> GiniDynStatus {
    if dist.is_null() || out.is_null() {
        return GiniDynStatus::NullPointer;
    }
    unsafe { *out = (*dist).inner.probs().len() };
    GiniDynStatus::Ok
}

/// Copies the mass entries into `buf[0..len]`; `len` must equal the value
/// reported by [`ginidyn_dist_len`].
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_dist_probs(
    dist: *const GiniDynDist,
    buf: *mut f64,
    len: usize,
) -> GiniDynStatus {
    if dist.is_null() || buf.is_null() {
        return GiniDynStatus::NullPointer;
    }
    let probs = unsafe { (*dist).inner.probs() };
    if len != probs.len() {
        return GiniDynStatus::InvalidArgument;
    }
    unsafe { std::ptr::copy_nonoverlapping(probs.as_ptr(), buf, len) };
    GiniDynStatus::Ok
}

/// First moment of the distribution.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_dist_mean(
    dist: *const GiniDynDist,
    out: *mut f64,
) -> GiniDynStatus {
    if dist.is_null() || out.is_null() {
        return GiniDynStatus::NullPointer;
    }
    unsafe { *out = (*dist).inner.mean() };
    GiniDynStatus::Ok
}

/// Gini index of the shifted Bernoulli distribution with mean `mu`
/// (0 for integer `mu`).
#[no_mangle]
pub extern "C" fn ginidyn_gini_equilibrium_value(mu: f64) -> f64 {
    ginidyn::gini_equilibrium_value(mu)
}

/// cbindgen does not expand macro-generated items, so the exported metric and
/// check functions below are written out one by one over these two helpers.
unsafe fn unary_metric(
    dist: *const GiniDynDist,
    out: *mut f64,
    call: fn(&Dist) -> Result<f64, MetricsError>,
) -> GiniDynStatus {
    if dist.is_null() || out.is_null() {
        return GiniDynStatus::NullPointer;
    }
    let d = unsafe { &(*dist).inner };
    guarded(|| match call(d) {
        Ok(v) => {
            unsafe { *out = v };
            GiniDynStatus::Ok
        }
        Err(e) => (&e).into(),
    })
}

/// Gini index via the prefix-sum evaluation of the double sum.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_gini_double_sum(
    dist: *const GiniDynDist,
    out: *mut f64,
) -> GiniDynStatus {
    unsafe { unary_metric(dist, out, ginidyn::gini_double_sum) }
}

/// Gini index via the CDF identity.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_gini_cdf(
    dist: *const GiniDynDist,
    out: *mut f64,
) -> GiniDynStatus {
    unsafe { unary_metric(dist, out, ginidyn::gini_cdf) }
}

/// Gini index via the literal O(N^2) double sum (oracle).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_gini_iid_form(
    dist: *const GiniDynDist,
    out: *mut f64,
) -> GiniDynStatus {
    unsafe { unary_metric(dist, out, ginidyn::gini_iid_form) }
}

/// `Var[sqrt(X)]`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_var_sqrt(
    dist: *const GiniDynDist,
    out: *mut f64,
) -> GiniDynStatus {
    if dist.is_null() || out.is_null() {
        return GiniDynStatus::NullPointer;
    }
    unsafe { *out = ginidyn::var_sqrt(&(*dist).inner) };
    GiniDynStatus::Ok
}

/// Wasserstein-1 distance between two distributions.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_wasserstein1(
    a: *const GiniDynDist,
    b: *const GiniDynDist,
    out: *mut f64,
) -> GiniDynStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return GiniDynStatus::NullPointer;
    }
    unsafe { *out = ginidyn::wasserstein1(&(*a).inner, &(*b).inner) };
    GiniDynStatus::Ok
}

/// `l^p` distance between two distributions (`p >= 1`).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_lp_distance(
    a: *const GiniDynDist,
    b: *const GiniDynDist,
    p: f64,
    out: *mut f64,
) -> GiniDynStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return GiniDynStatus::NullPointer;
    }
    guarded(|| match ginidyn::lp_distance(unsafe { &(*a).inner }, unsafe { &(*b).inner }, p) {
        Ok(v) => {
            unsafe { *out = v };
            GiniDynStatus::Ok
        }
        Err(e) => (&e).into(),
    })
}

/// Brute-force monotone-coupling transport cost (supports of at most 16
/// states; oracle for `ginidyn_wasserstein1`).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_w1_bruteforce(
    a: *const GiniDynDist,
    b: *const GiniDynDist,
    out: *mut f64,
) -> GiniDynStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return GiniDynStatus::NullPointer;
    }
    guarded(
        || match ginidyn::w1_bruteforce(unsafe { &(*a).inner }, unsafe { &(*b).inner }) {
            Ok(v) => {
                unsafe { *out = v };
                GiniDynStatus::Ok
            }
            Err(e) => (&e).into(),
        },
    )
}

unsafe fn run_check(
    dist: *const GiniDynDist,
    out: *mut GiniDynBoundReport,
    check: fn(&Dist) -> Result<ginidyn::BoundReport, VerifierError>,
) -> GiniDynStatus {
    if dist.is_null() || out.is_null() {
        return GiniDynStatus::NullPointer;
    }
    let d = unsafe { &(*dist).inner };
    guarded(|| match check(d) {
        Ok(report) => {
            unsafe { *out = report.into() };
            GiniDynStatus::Ok
        }
        Err(e) => (&e).into(),
    })
}

/// Theorem 1: `W1(p, p*) <= c(mu) (G[p] - G[p*])`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_check_thm1(
    dist: *const GiniDynDist,
    out: *mut GiniDynBoundReport,
) -> GiniDynStatus {
    unsafe { run_check(dist, out, ginidyn::verifier::check_thm1) }
}

/// Theorem 2: `||p - delta_0||_1 <= 2 sqrt(mu) sqrt(1 - G[p])`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_check_thm2(
    dist: *const GiniDynDist,
    out: *mut GiniDynBoundReport,
) -> GiniDynStatus {
    unsafe { run_check(dist, out, ginidyn::verifier::check_thm2) }
}

/// Weak bound for integer mean: `W1(p, delta_mu) <= 2 sqrt(2) mu sqrt(G[p])`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_check_weak_bound(
    dist: *const GiniDynDist,
    out: *mut GiniDynBoundReport,
) -> GiniDynStatus {
    unsafe { run_check(dist, out, ginidyn::verifier::check_weak_bound) }
}

/// Reverse bound: `2 mu G[p] <= 2 E|X - mu|`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_check_reverse_bound(
    dist: *const GiniDynDist,
    out: *mut GiniDynBoundReport,
) -> GiniDynStatus {
    unsafe { run_check(dist, out, ginidyn::verifier::check_reverse_bound) }
}

/// Key inequality: `mu G[p] >= max(upper tail, lower tail)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_check_key_inequality(
    dist: *const GiniDynDist,
    out: *mut GiniDynBoundReport,
) -> GiniDynStatus {
    unsafe { run_check(dist, out, ginidyn::verifier::check_key_inequality) }
}

/// Identity `W1(p, delta_0) = mean(p)` (two-sided).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_check_w1_dirac0(
    dist: *const GiniDynDist,
    out: *mut GiniDynBoundReport,
) -> GiniDynStatus {
    unsafe { run_check(dist, out, ginidyn::verifier::check_w1_dirac0) }
}

/// Both intermediate estimates behind the non-integer branch of Theorem 1.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ginidyn_check_prop2_intermediates(
    dist: *const GiniDynDist,
    w1_upper: *mut GiniDynBoundReport,
    gini_lower: *mut GiniDynBoundReport,
) -> GiniDynStatus {
    if dist.is_null() || w1_upper.is_null() || gini_lower.is_null() {
        return GiniDynStatus::NullPointer;
    }
    let d = unsafe { &(*dist).inner };
    guarded(|| match ginidyn::verifier::check_prop2_intermediates(d) {
        Ok((first, second)) => {
            unsafe {
                *w1_upper = first.into();
                *gini_lower = second.into();
            }
            GiniDynStatus::Ok
        }
        Err(e) => (&e).into(),
    })
}
