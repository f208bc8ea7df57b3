//! Exercises the C ABI the way a foreign binding would: raw pointers,
//! status codes, out-parameters.

use ginidyn_ffi::*;
use std::ptr;

fn make(probs: &[f64]) -> *mut GiniDynDist {
    let mut handle: *mut GiniDynDist = ptr::null_mut();
    let status = unsafe { ginidyn_dist_new(probs.as_ptr(), probs.len(), &mut handle) };
    assert_eq!(status, GiniDynStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn construct_query_free() {
    let d = make(&[0.75, 0.0, 0.25]);

    let mut len = 0usize;
    assert_eq!(unsafe { ginidyn_dist_len(d, &mut len) }, GiniDynStatus::Ok);
    assert_eq!(len, 3);

    let mut buf = vec![0.0; len];
    assert_eq!(
        unsafe { ginidyn_dist_probs(d, buf.as_mut_ptr(), len) },
        GiniDynStatus::Ok
    );
    assert_eq!(buf, vec![0.75, 0.0, 0.25]);

    let mut mean = 0.0;
    assert_eq!(unsafe { ginidyn_dist_mean(d, &mut mean) }, GiniDynStatus::Ok);
    assert_eq!(mean, 0.5);

    let mut gini = 0.0;
    assert_eq!(
        unsafe { ginidyn_gini_double_sum(d, &mut gini) },
        GiniDynStatus::Ok
    );
    assert!((gini - 0.75).abs() < 1e-15);
    let mut gini2 = 0.0;
    assert_eq!(unsafe { ginidyn_gini_cdf(d, &mut gini2) }, GiniDynStatus::Ok);
    assert!((gini - gini2).abs() < 1e-12);

    unsafe { ginidyn_dist_free(d) };
}

#[test]
fn error_codes_map_to_library_errors() {
    let mut handle: *mut GiniDynDist = ptr::null_mut();
    let status = unsafe { ginidyn_dist_new([0.5, 0.6].as_ptr(), 2, &mut handle) };
    assert_eq!(status, GiniDynStatus::MassDefect);
    assert!(handle.is_null());

    let status = unsafe { ginidyn_dist_new(ptr::null(), 0, &mut handle) };
    assert_eq!(status, GiniDynStatus::NullPointer);

    let status = unsafe { ginidyn_dist_shifted_bernoulli(2.0, 2, &mut handle) };
    assert_eq!(status, GiniDynStatus::TruncationTooSmall);

    let status = unsafe { ginidyn_dist_dirac(6, 5, &mut handle) };
    assert_eq!(status, GiniDynStatus::IndexOutOfRange);

    let status = unsafe { ginidyn_sample_vmu(3.0, 3, 0, &mut handle) };
    assert_eq!(status, GiniDynStatus::InfeasibleMean);

    // Zero mean: Gini of delta_0 is fine (0), but checks report ZeroMean.
    let d0 = make(&[1.0, 0.0]);
    let mut gini = -1.0;
    assert_eq!(unsafe { ginidyn_gini_cdf(d0, &mut gini) }, GiniDynStatus::Ok);
    assert_eq!(gini, 0.0);
    let mut report = GiniDynBoundReport {
        lhs: 0.0,
        rhs: 0.0,
        slack: 0.0,
        pass: false,
    };
    assert_eq!(
        unsafe { ginidyn_check_thm1(d0, &mut report) },
        GiniDynStatus::ZeroMean
    );
    unsafe { ginidyn_dist_free(d0) };
}

#[test]
fn distances_and_checks() {
    let uniform = make(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
    let mut delta1: *mut GiniDynDist = ptr::null_mut();
    assert_eq!(
        unsafe { ginidyn_dist_dirac(1, 2, &mut delta1) },
        GiniDynStatus::Ok
    );

    let mut w1 = 0.0;
    assert_eq!(
        unsafe { ginidyn_wasserstein1(uniform, delta1, &mut w1) },
        GiniDynStatus::Ok
    );
    assert!((w1 - 2.0 / 3.0).abs() < 1e-12);

    let mut brute = 0.0;
    assert_eq!(
        unsafe { ginidyn_w1_bruteforce(uniform, delta1, &mut brute) },
        GiniDynStatus::Ok
    );
    assert!((w1 - brute).abs() < 1e-12);

    let mut l1 = 0.0;
    assert_eq!(
        unsafe { ginidyn_lp_distance(uniform, delta1, 1.0, &mut l1) },
        GiniDynStatus::Ok
    );
    assert!((l1 - 4.0 / 3.0).abs() < 1e-12);
    assert_eq!(
        unsafe { ginidyn_lp_distance(uniform, delta1, 0.5, &mut l1) },
        GiniDynStatus::InvalidArgument
    );

    let mut report = GiniDynBoundReport {
        lhs: 0.0,
        rhs: 0.0,
        slack: 0.0,
        pass: false,
    };
    assert_eq!(
        unsafe { ginidyn_check_thm1(uniform, &mut report) },
        GiniDynStatus::Ok
    );
    assert!(report.pass);
    assert!((report.lhs - 2.0 / 3.0).abs() < 1e-12);
    assert!((report.rhs - 8.0 / 9.0).abs() < 1e-12);

    assert_eq!(
        unsafe { ginidyn_check_thm2(uniform, &mut report) },
        GiniDynStatus::Ok
    );
    assert!(report.pass);

    assert_eq!(
        unsafe { ginidyn_check_w1_dirac0(uniform, &mut report) },
        GiniDynStatus::Ok
    );
    assert!(report.pass);
    assert!((report.lhs - 1.0).abs() < 1e-12);

    // Non-integer mean: prop2 applies, weak bound is skipped.
    let mut vmu: *mut GiniDynDist = ptr::null_mut();
    assert_eq!(
        unsafe { ginidyn_sample_vmu(1.6, 12, 42, &mut vmu) },
        GiniDynStatus::Ok
    );
    let mut mean = 0.0;
    unsafe { ginidyn_dist_mean(vmu, &mut mean) };
    assert!((mean - 1.6).abs() <= 1e-12);
    assert_eq!(
        unsafe { ginidyn_check_weak_bound(vmu, &mut report) },
        GiniDynStatus::NonIntegerMean
    );
    let mut second = report;
    assert_eq!(
        unsafe { ginidyn_check_prop2_intermediates(vmu, &mut report, &mut second) },
        GiniDynStatus::Ok
    );
    assert!(report.pass && second.pass);

    assert_eq!(
        unsafe { ginidyn_check_reverse_bound(vmu, &mut report) },
        GiniDynStatus::Ok
    );
    assert!(report.pass);
    assert_eq!(
        unsafe { ginidyn_check_key_inequality(vmu, &mut report) },
        GiniDynStatus::Ok
    );
    assert!(report.pass);

    assert!((ginidyn_gini_equilibrium_value(1.6) - 0.15).abs() < 1e-15);

    unsafe {
        ginidyn_dist_free(uniform);
        ginidyn_dist_free(delta1);
        ginidyn_dist_free(vmu);
        ginidyn_dist_free(ptr::null_mut()); // null is a no-op
    }
}
