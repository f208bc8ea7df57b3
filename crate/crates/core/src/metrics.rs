//! Scalar functionals of one or two distributions: the Gini index (two
//! equivalent formulas plus a literal double-sum oracle), the order-1
//! Wasserstein distance, l^p distances, and the proof-level intermediates
//! `Var[sqrt(X)]` and the two tail sums around the mean.
//!
//! Gini values are dimensionless and lie in `[0, 1]` up to rounding;
//! distances carry the unit of the state variable.

use crate::dist::Dist;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("Gini index undefined for a zero-mean distribution other than the point mass at 0")]
    ZeroMean,
    #[error("lp distance requires order p >= 1, got {0}")]
    InvalidOrder(f64),
}

/// Zero-mean convention: `G[delta_0] = 0`; any other zero-mean input is an
/// error. Returns `None` when the mean is positive and the caller proceeds.
fn zero_mean_case(d: &Dist, mu: f64) -> Option<Result<f64, MetricsError>> {
    if mu > 0.0 {
        return None;
    }
    if (d.prob(0) - 1.0).abs() <= crate::dist::DEFAULT_TOL_MASS {
        Some(Ok(0.0))
    } else {
        Some(Err(MetricsError::ZeroMean))
    }
}

/// Gini index `G[p] = (1/(2 mu)) sum_i sum_j |i-j| p_i p_j`, evaluated in a
/// single O(N) pass over the already-sorted states:
/// `sum_{i,j} |i-j| p_i p_j = 2 sum_i p_i (i F_{i-1} - M_{i-1})` with running
/// prefix mass `F` and prefix first moment `M`.
pub fn gini_double_sum(d: &Dist) -> Result<f64, MetricsError> {
    let mu = d.mean();
    if let Some(r) = zero_mean_case(d, mu) {
        return r;
    }
    let mut prefix_mass = 0.0;
    let mut prefix_moment = 0.0;
    let mut acc = 0.0;
    for (i, &p) in d.probs().iter().enumerate() {
        let i_f = i as f64;
        acc += p * (i_f * prefix_mass - prefix_moment);
        prefix_mass += p;
        prefix_moment += i_f * p;
    }
    Ok(acc / mu)
}

/// Gini index as `(1/(2 mu)) E|X - X'|` for i.i.d. `X, X' ~ p`, evaluated as
/// the literal O(N^2) double sum. Kept as a named oracle for cross-checks of
/// [`gini_double_sum`]; do not use on large truncations.
pub fn gini_iid_form(d: &Dist) -> Result<f64, MetricsError> {
    let mu = d.mean();
    if let Some(r) = zero_mean_case(d, mu) {
        return r;
    }
    let probs = d.probs();
    let mut acc = 0.0;
    for (i, &pi) in probs.iter().enumerate() {
        for (j, &pj) in probs.iter().enumerate() {
            acc += (i as f64 - j as f64).abs() * pi * pj;
        }
    }
    Ok(acc / (2.0 * mu))
}

/// Gini index via the CDF identity `G[p] = 1 - (1/mu) sum_{n=0}^{N-1} (1-F_n)^2`
/// (the term at `n = N` and beyond vanishes).
pub fn gini_cdf(d: &Dist) -> Result<f64, MetricsError> {
    let mu = d.mean();
    if let Some(r) = zero_mean_case(d, mu) {
        return r;
    }
    let mut acc = 0.0;
    let mut f = 0.0;
    for &p in &d.probs()[..d.trunc()] {
        f += p;
        let tail = 1.0 - f;
        acc += tail * tail;
    }
    Ok(1.0 - acc / mu)
}

/// Order-1 Wasserstein distance between lattice distributions:
/// `sum_{n=0}^{N-1} |F_a(n) - F_b(n)|` on the common truncation `N`
/// (the shorter input is zero-padded).
pub fn wasserstein1(a: &Dist, b: &Dist) -> f64 {
    let trunc = a.trunc().max(b.trunc());
    let mut fa = 0.0;
    let mut fb = 0.0;
    let mut acc = 0.0;
    for n in 0..trunc {
        fa += a.prob(n);
        fb += b.prob(n);
        acc += (fa - fb).abs();
    }
    acc
}

/// `l^p` distance `(sum_n |a_n - b_n|^p)^(1/p)` for `p >= 1`, on the common
/// truncation reached by zero-padding.
pub fn lp_distance(a: &Dist, b: &Dist, p: f64) -> Result<f64, MetricsError> {
    if !(p >= 1.0) {
        return Err(MetricsError::InvalidOrder(p));
    }
    let trunc = a.trunc().max(b.trunc());
    let mut acc = 0.0;
    for n in 0..=trunc {
        acc += (a.prob(n) - b.prob(n)).abs().powf(p);
    }
    Ok(acc.powf(1.0 / p))
}

/// `Var[sqrt(X)] = sum_n n p_n - (sum_n sqrt(n) p_n)^2`.
pub fn var_sqrt(d: &Dist) -> f64 {
    let mut mean = 0.0;
    let mut mean_sqrt = 0.0;
    for (n, &p) in d.probs().iter().enumerate() {
        mean += n as f64 * p;
        mean_sqrt += (n as f64).sqrt() * p;
    }
    mean - mean_sqrt * mean_sqrt
}

/// The two tail sums around the mean `mu = mean(d)`:
/// `upper = sum_{j >= floor(mu)+1} (j - mu) p_j` and
/// `lower = sum_{i <= floor(mu)} (mu - i) p_i`.
///
/// Both equal half of `E|X - mu|` when `mu` is the exact mean; returning the
/// pair exposes that identity to the tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFunctionals {
    pub upper: f64,
    pub lower: f64,
}

pub fn key_tail_functionals(d: &Dist) -> TailFunctionals {
    let mu = d.mean();
    let floor = mu.floor() as usize;
    let mut upper = 0.0;
    let mut lower = 0.0;
    for (n, &p) in d.probs().iter().enumerate() {
        if n <= floor {
            lower += (mu - n as f64) * p;
        } else {
            upper += (n as f64 - mu) * p;
        }
    }
    TailFunctionals { upper, lower }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{dirac, gini_equilibrium_value, shifted_bernoulli, Dist};
    use proptest::prelude::*;

    fn third_uniform() -> Dist {
        let third = 1.0 / 3.0;
        Dist::new(vec![third, third, third]).unwrap()
    }

    #[test]
    fn gini_double_sum_examples() {
        assert_eq!(gini_double_sum(&dirac(3, 3).unwrap()).unwrap(), 0.0);
        let g = gini_double_sum(&third_uniform()).unwrap();
        assert!((g - 4.0 / 9.0).abs() < 1e-15);
        let d = Dist::new(vec![0.75, 0.0, 0.25]).unwrap();
        assert!((gini_double_sum(&d).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn gini_zero_mean_convention() {
        assert_eq!(gini_double_sum(&dirac(0, 4).unwrap()).unwrap(), 0.0);
        assert_eq!(gini_cdf(&dirac(0, 4).unwrap()).unwrap(), 0.0);
        assert_eq!(gini_iid_form(&dirac(0, 4).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn gini_cdf_examples() {
        let g = gini_cdf(&third_uniform()).unwrap();
        assert!((g - 4.0 / 9.0).abs() < 1e-15);
        let d = Dist::new(vec![0.5, 0.5]).unwrap();
        assert!((gini_cdf(&d).unwrap() - 0.5).abs() < 1e-15);
        assert!(gini_cdf(&dirac(5, 5).unwrap()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn gini_iid_form_matches_double_sum_on_examples() {
        for d in [
            third_uniform(),
            Dist::new(vec![0.75, 0.0, 0.25]).unwrap(),
            Dist::new(vec![0.5, 0.5]).unwrap(),
            dirac(1, 4).unwrap(),
        ] {
            let a = gini_double_sum(&d).unwrap();
            let b = gini_iid_form(&d).unwrap();
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        assert!((gini_iid_form(&Dist::new(vec![0.5, 0.5]).unwrap()).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn wasserstein1_examples() {
        let u = third_uniform();
        assert_eq!(wasserstein1(&u, &u), 0.0);
        let w = wasserstein1(&u, &dirac(1, 2).unwrap());
        assert!((w - 2.0 / 3.0).abs() < 1e-15);
        let a = Dist::new(vec![0.75, 0.0, 0.25]).unwrap();
        let b = Dist::new(vec![0.5, 0.5, 0.0]).unwrap();
        assert!((wasserstein1(&a, &b) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn wasserstein1_pads_mismatched_truncations() {
        let a = Dist::new(vec![0.5, 0.5]).unwrap();
        let b = Dist::new(vec![0.5, 0.0, 0.5]).unwrap();
        assert!((wasserstein1(&a, &b) - 0.5).abs() < 1e-15);
        assert_eq!(wasserstein1(&a, &b), wasserstein1(&b, &a));
    }

    #[test]
    fn lp_distance_examples() {
        let a = Dist::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(lp_distance(&a, &a, 1.0).unwrap(), 0.0);

        let mut probs = vec![0.0; 11];
        probs[0] = 0.9;
        probs[10] = 0.1;
        let far = Dist::new(probs).unwrap();
        let d0 = dirac(0, 0).unwrap();
        assert!((lp_distance(&far, &d0, 1.0).unwrap() - 0.2).abs() < 1e-15);
        assert!((lp_distance(&a, &d0, 1.0).unwrap() - 1.0).abs() < 1e-15);

        assert!(matches!(
            lp_distance(&a, &d0, 0.5).unwrap_err(),
            MetricsError::InvalidOrder(_)
        ));
    }

    #[test]
    fn var_sqrt_examples() {
        assert_eq!(var_sqrt(&dirac(4, 4).unwrap()), 0.0);
        let d = Dist::new(vec![0.5, 0.5]).unwrap();
        assert!((var_sqrt(&d) - 0.25).abs() < 1e-15);
        let d = Dist::new(vec![0.75, 0.0, 0.25]).unwrap();
        assert!((var_sqrt(&d) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn key_tail_examples() {
        let t = key_tail_functionals(&dirac(3, 5).unwrap());
        assert_eq!((t.upper, t.lower), (0.0, 0.0));

        let t = key_tail_functionals(&third_uniform());
        assert!((t.upper - 1.0 / 3.0).abs() < 1e-15);
        assert!((t.lower - 1.0 / 3.0).abs() < 1e-15);

        let t = key_tail_functionals(&Dist::new(vec![0.5, 0.5]).unwrap());
        assert!((t.upper - 0.25).abs() < 1e-15);
        assert!((t.lower - 0.25).abs() < 1e-15);
    }

    prop_compose! {
        /// Random valid distribution on {0..trunc} with trunc in 1..=24,
        /// normalized exactly.
        fn arb_dist()(weights in prop::collection::vec(0.0f64..1.0, 2..=25)) -> Dist {
            let sum: f64 = weights.iter().sum();
            let probs = if sum > 1e-3 {
                weights.iter().map(|w| w / sum).collect()
            } else {
                let n = weights.len();
                vec![1.0 / n as f64; n]
            };
            Dist::new(probs).expect("normalized weights form a valid Dist")
        }
    }

    proptest! {
        #[test]
        fn gini_formulas_agree(d in arb_dist()) {
            let a = gini_double_sum(&d).unwrap();
            let b = gini_cdf(&d).unwrap();
            let c = gini_iid_form(&d).unwrap();
            prop_assert!((a - b).abs() <= 1e-12, "double_sum {a} vs cdf {b}");
            prop_assert!((a - c).abs() <= 1e-12, "double_sum {a} vs iid {c}");
        }

        #[test]
        fn gini_range_and_minimizer(d in arb_dist()) {
            let g = gini_double_sum(&d).unwrap();
            prop_assert!(g >= 0.0 - 1e-12);
            prop_assert!(g <= 1.0 + 1e-12);
            prop_assert!(g >= gini_equilibrium_value(d.mean()) - 1e-12);
        }

        #[test]
        fn key_inequality_and_tail_identity(d in arb_dist()) {
            let mu = d.mean();
            let g = gini_double_sum(&d).unwrap();
            let t = key_tail_functionals(&d);
            prop_assert!((t.upper - t.lower).abs() <= 1e-12);
            prop_assert!(mu * g >= t.upper.max(t.lower) - 1e-12);
        }

        #[test]
        fn variance_bound(d in arb_dist()) {
            let mu = d.mean();
            let g = gini_double_sum(&d).unwrap();
            prop_assert!(2.0 * mu * g >= 2.0 * var_sqrt(&d) - 1e-12);
        }

        #[test]
        fn w1_metric_axioms(a in arb_dist(), b in arb_dist(), c in arb_dist()) {
            prop_assert_eq!(wasserstein1(&a, &b), wasserstein1(&b, &a));
            prop_assert!(wasserstein1(&a, &b) >= 0.0);
            prop_assert!(
                wasserstein1(&a, &c) <= wasserstein1(&a, &b) + wasserstein1(&b, &c) + 1e-12
            );
        }

        #[test]
        fn w1_to_dirac0_equals_mean(d in arb_dist()) {
            let w = wasserstein1(&d, &dirac(0, 0).unwrap());
            prop_assert!((w - d.mean()).abs() <= 1e-12);
        }

        #[test]
        fn gini_of_equilibrium_matches_formula(frac in 0.01f64..0.99, whole in 0usize..6) {
            let mu = whole as f64 + frac;
            let pstar = shifted_bernoulli(mu, whole + 2).unwrap();
            let g = gini_double_sum(&pstar).unwrap();
            prop_assert!((g - gini_equilibrium_value(mu)).abs() <= 1e-14);
        }
    }
}
