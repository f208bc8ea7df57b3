//! Evaluates both sides of every inequality relating the Gini index to the
//! Wasserstein and l^1 distances, on arbitrary distributions and on random
//! members of the constraint set `V_mu` (mass 1, mean `mu`).
//!
//! Every check produces a [`BoundReport`] with the two sides, the slack
//! `rhs - lhs`, and a pass flag. The inequalities are theorems: a failure
//! beyond `-SLACK_TOL` on a valid member of `V_mu` indicates an
//! implementation bug, which is exactly what the sweep is for.

use crate::dist::{dirac, gini_equilibrium_value, shifted_bernoulli, Dist};
use crate::metrics::{gini_double_sum, key_tail_functionals, lp_distance, wasserstein1, MetricsError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Slack below which a one-sided bound counts as violated.
pub const SLACK_TOL: f64 = 1e-12;
/// Slack below which a sample is recorded as a tightness witness.
pub const TIGHT_SLACK: f64 = 1e-9;
/// `mu` is treated as an integer when within this distance of one, since the
/// non-integer constant `2 mu / C_mu` blows up as `mu` approaches an integer.
pub const INTEGER_MEAN_TOL: f64 = 1e-9;
/// At most this many tightness witnesses are kept per inequality.
pub const WITNESS_CAP: usize = 16;

const BRUTE_FORCE_MAX_SUPPORT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifierError {
    #[error("check requires a positive mean")]
    ZeroMean,
    #[error("check requires an integer mean, got {0}; skipped")]
    NonIntegerMean(f64),
    #[error("check requires a non-integer mean, got {0}; skipped")]
    IntegerMean(f64),
    #[error("mean {mu} is infeasible on {{0, .., {trunc}}}")]
    InfeasibleMean { mu: f64, trunc: usize },
    #[error("support size {got} exceeds the brute-force limit {limit}")]
    SupportTooLarge { got: usize, limit: usize },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Dist(#[from] crate::dist::DistError),
}

/// One inequality evaluation: the two sides, the slack `rhs - lhs`, and
/// whether the bound held. Identity checks (`w1_dirac0`) are two-sided and
/// pass when `|slack| <= SLACK_TOL`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    /// Which mean branch the check took, where that matters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<&'static str>,
}

impl BoundReport {
    fn bound(name: &'static str, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            name,
            lhs,
            rhs,
            slack,
            pass: slack >= -SLACK_TOL,
            branch: None,
        }
    }

    fn identity(name: &'static str, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            name,
            lhs,
            rhs,
            slack,
            pass: slack.abs() <= SLACK_TOL,
            branch: None,
        }
    }

    fn with_branch(mut self, branch: &'static str) -> Self {
        self.branch = Some(branch);
        self
    }

    /// Swaps the two sides (self-test mode: a correct implementation must
    /// then report failures on strict inequalities).
    pub fn flipped(&self) -> Self {
        let slack = self.lhs - self.rhs;
        Self {
            name: self.name,
            lhs: self.rhs,
            rhs: self.lhs,
            slack,
            pass: slack >= -SLACK_TOL,
            branch: self.branch,
        }
    }
}

fn positive_mean(d: &Dist) -> Result<f64, VerifierError> {
    let mu = d.mean();
    if mu > 0.0 {
        Ok(mu)
    } else {
        Err(VerifierError::ZeroMean)
    }
}

fn integer_mean(mu: f64) -> Option<usize> {
    let rounded = mu.round();
    if (mu - rounded).abs() < INTEGER_MEAN_TOL && rounded >= 0.0 {
        Some(rounded as usize)
    } else {
        None
    }
}

/// `C_mu = min(mu - floor(mu), floor(mu) + 1 - mu)`, the distance from `mu`
/// to the nearest integer. In `(0, 0.5]` for non-integer `mu`; degenerate
/// (zero) at integers, where the checks use the integer branch instead.
pub fn c_mu(mu: f64) -> f64 {
    let frac = mu - mu.floor();
    frac.min(1.0 - frac)
}

/// Theorem 1: `W1(p, p*) <= 2 mu (G[p] - G[p*])` for integer `mu`, and
/// `W1(p, p*) <= (2 mu / C_mu) (G[p] - G[p*])` otherwise.
pub fn check_thm1(d: &Dist) -> Result<BoundReport, VerifierError> {
    let mu = positive_mean(d)?;
    let gini = gini_double_sum(d)?;
    if let Some(m) = integer_mean(mu) {
        let pstar = dirac(m, d.trunc().max(m))?;
        let lhs = wasserstein1(d, &pstar);
        let rhs = 2.0 * mu * gini;
        Ok(BoundReport::bound("thm1", lhs, rhs).with_branch("integer_mean"))
    } else {
        let floor = mu.floor() as usize;
        let pstar = shifted_bernoulli(mu, d.trunc().max(floor + 1))?;
        let lhs = wasserstein1(d, &pstar);
        let rhs = 2.0 * mu / c_mu(mu) * (gini - gini_equilibrium_value(mu));
        Ok(BoundReport::bound("thm1", lhs, rhs).with_branch("non_integer_mean"))
    }
}

/// Theorem 2: `||p - delta_0||_1 <= 2 sqrt(mu) sqrt(1 - G[p])`.
pub fn check_thm2(d: &Dist) -> Result<BoundReport, VerifierError> {
    let mu = positive_mean(d)?;
    let gini = gini_double_sum(d)?;
    let lhs = lp_distance(d, &dirac(0, 0)?, 1.0)?;
    // (1 - G) can round below zero for extreme inputs; clamp before the sqrt.
    let rhs = 2.0 * mu.sqrt() * (1.0 - gini).max(0.0).sqrt();
    Ok(BoundReport::bound("thm2", lhs, rhs))
}

/// Weak bound (integer mean only): `W1(p, delta_mu) <= 2 sqrt(2) mu sqrt(G[p])`.
pub fn check_weak_bound(d: &Dist) -> Result<BoundReport, VerifierError> {
    let mu = positive_mean(d)?;
    let Some(m) = integer_mean(mu) else {
        return Err(VerifierError::NonIntegerMean(mu));
    };
    let gini = gini_double_sum(d)?;
    let lhs = wasserstein1(d, &dirac(m, d.trunc().max(m))?);
    let rhs = 2.0 * std::f64::consts::SQRT_2 * mu * gini.max(0.0).sqrt();
    Ok(BoundReport::bound("weak_bound", lhs, rhs))
}

/// Reverse bound: `2 mu G[p] <= 2 E|X - mu|`. For integer `mu` the right
/// side is realized as `2 W1(p, delta_mu)` on the lattice; for non-integer
/// `mu` the expectation `sum_n |n - mu| p_n` is evaluated directly, since a
/// Dirac off the lattice is not representable.
pub fn check_reverse_bound(d: &Dist) -> Result<BoundReport, VerifierError> {
    let mu = positive_mean(d)?;
    let gini = gini_double_sum(d)?;
    let lhs = 2.0 * mu * gini;
    if let Some(m) = integer_mean(mu) {
        let rhs = 2.0 * wasserstein1(d, &dirac(m, d.trunc().max(m))?);
        Ok(BoundReport::bound("reverse_bound", lhs, rhs).with_branch("integer_mean"))
    } else {
        let mean_abs_dev: f64 = d
            .probs()
            .iter()
            .enumerate()
            .map(|(n, &p)| (n as f64 - mu).abs() * p)
            .sum();
        let rhs = 2.0 * mean_abs_dev;
        Ok(BoundReport::bound("reverse_bound", lhs, rhs).with_branch("non_integer_mean"))
    }
}

/// Key inequality: `mu G[p] >= max(upper tail, lower tail)` where the tails
/// are `sum_{j > floor(mu)} (j - mu) p_j` and `sum_{i <= floor(mu)} (mu - i) p_i`.
pub fn check_key_inequality(d: &Dist) -> Result<BoundReport, VerifierError> {
    let mu = positive_mean(d)?;
    let gini = gini_double_sum(d)?;
    let tails = key_tail_functionals(d);
    let lhs = tails.upper.max(tails.lower);
    let rhs = mu * gini;
    Ok(BoundReport::bound("key_inequality", lhs, rhs))
}

/// The two intermediate estimates behind the non-integer branch of Theorem 1,
/// with `A = sum_{n <= floor(mu)} (floor(mu)+1-n) p_n` and
/// `B = sum_{n <= floor(mu)} (floor(mu)-n) p_n`:
///
/// 1. `W1(p, p*) <= 2 max(A - (floor(mu)+1-mu), B)` — an equality, in fact:
///    whichever argument attains the max equals `W1 / 2`.
/// 2. `C_mu (A - (floor(mu)+1-mu) + B) <= mu (G[p] - G[p*])`.
pub fn check_prop2_intermediates(d: &Dist) -> Result<(BoundReport, BoundReport), VerifierError> {
    let mu = positive_mean(d)?;
    if integer_mean(mu).is_some() {
        return Err(VerifierError::IntegerMean(mu));
    }
    let gini = gini_double_sum(d)?;
    let floor = mu.floor() as usize;
    let gap = floor as f64 + 1.0 - mu;
    let mut a = 0.0;
    let mut b = 0.0;
    for (n, &p) in d.probs().iter().enumerate().take(floor + 1) {
        a += (floor as f64 + 1.0 - n as f64) * p;
        b += (floor as f64 - n as f64) * p;
    }
    let pstar = shifted_bernoulli(mu, d.trunc().max(floor + 1))?;
    let w1 = wasserstein1(d, &pstar);
    let first = BoundReport::bound("prop2_w1_upper", w1, 2.0 * (a - gap).max(b));
    let second = BoundReport::bound(
        "prop2_gini_lower",
        c_mu(mu) * (a - gap + b),
        mu * (gini - gini_equilibrium_value(mu)),
    );
    Ok((first, second))
}

/// Identity `W1(p, delta_0) = mean(p)`, checked two-sided: this is why the
/// Wasserstein distance to `delta_0` cannot vanish while the mean is
/// conserved, even as `G -> 1`.
pub fn check_w1_dirac0(d: &Dist) -> Result<BoundReport, VerifierError> {
    let lhs = wasserstein1(d, &dirac(0, 0)?);
    Ok(BoundReport::identity("w1_dirac0", lhs, d.mean()))
}

/// The checks the sweep and the trajectory recorder can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Thm1,
    Thm2,
    WeakBound,
    ReverseBound,
    KeyInequality,
    Prop2Intermediates,
    W1Dirac0,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        CheckKind::Thm1,
        CheckKind::Thm2,
        CheckKind::WeakBound,
        CheckKind::ReverseBound,
        CheckKind::KeyInequality,
        CheckKind::Prop2Intermediates,
        CheckKind::W1Dirac0,
    ];

    /// Names of the reports this check produces, in order.
    pub fn report_names(&self) -> &'static [&'static str] {
        match self {
            CheckKind::Thm1 => &["thm1"],
            CheckKind::Thm2 => &["thm2"],
            CheckKind::WeakBound => &["weak_bound"],
            CheckKind::ReverseBound => &["reverse_bound"],
            CheckKind::KeyInequality => &["key_inequality"],
            CheckKind::Prop2Intermediates => &["prop2_w1_upper", "prop2_gini_lower"],
            CheckKind::W1Dirac0 => &["w1_dirac0"],
        }
    }

    /// Runs the check on `d`, yielding one outcome per report name. An `Err`
    /// outcome means the check's precondition did not apply (e.g. integer
    /// mean required), not a bound violation.
    pub fn run(&self, d: &Dist) -> Vec<(&'static str, Result<BoundReport, VerifierError>)> {
        match self {
            CheckKind::Thm1 => vec![("thm1", check_thm1(d))],
            CheckKind::Thm2 => vec![("thm2", check_thm2(d))],
            CheckKind::WeakBound => vec![("weak_bound", check_weak_bound(d))],
            CheckKind::ReverseBound => vec![("reverse_bound", check_reverse_bound(d))],
            CheckKind::KeyInequality => vec![("key_inequality", check_key_inequality(d))],
            CheckKind::Prop2Intermediates => match check_prop2_intermediates(d) {
                Ok((first, second)) => vec![
                    ("prop2_w1_upper", Ok(first)),
                    ("prop2_gini_lower", Ok(second)),
                ],
                Err(e) => vec![
                    ("prop2_w1_upper", Err(e.clone())),
                    ("prop2_gini_lower", Err(e)),
                ],
            },
            CheckKind::W1Dirac0 => vec![("w1_dirac0", check_w1_dirac0(d))],
        }
    }
}

/// Draws a random member of `V_mu` on `{0, .., trunc}`: independent
/// exponential weights are normalized to a distribution `q` with mean `m`,
/// then mixed with `delta_0` (if `m > mu`) or `delta_trunc` (if `m < mu`)
/// with the weight that lands the mean exactly on `mu`. Deterministic for a
/// fixed seed.
pub fn sample_vmu(mu: f64, trunc: usize, seed: u64) -> Result<Dist, VerifierError> {
    if !(mu > 0.0) || mu >= trunc as f64 {
        return Err(VerifierError::InfeasibleMean { mu, trunc });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: Vec<f64> = (0..=trunc)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let m: f64 = weights
        .iter()
        .enumerate()
        .map(|(n, &q)| n as f64 * q)
        .sum();

    if m > mu {
        let lambda = 1.0 - mu / m;
        for w in &mut weights {
            *w *= 1.0 - lambda;
        }
        weights[0] += lambda;
    } else if m < mu {
        let lambda = (mu - m) / (trunc as f64 - m);
        for w in &mut weights {
            *w *= 1.0 - lambda;
        }
        weights[trunc] += lambda;
    }
    Ok(Dist::new(weights)?)
}

/// Transport cost of the monotone (north-west corner) coupling: greedy mass
/// matching of the sorted supports, optimal for the cost `|i - j|` in one
/// dimension. Independent of the CDF formula in [`wasserstein1`]; test
/// oracle only, so supports are capped at 16 points.
pub fn w1_bruteforce(a: &Dist, b: &Dist) -> Result<f64, VerifierError> {
    let support = |d: &Dist| -> Vec<(usize, f64)> {
        d.probs()
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(n, &p)| (n, p))
            .collect()
    };
    let sa = support(a);
    let sb = support(b);
    for s in [&sa, &sb] {
        if s.len() > BRUTE_FORCE_MAX_SUPPORT {
            return Err(VerifierError::SupportTooLarge {
                got: s.len(),
                limit: BRUTE_FORCE_MAX_SUPPORT,
            });
        }
    }
    let mut cost = 0.0;
    let (mut i, mut j) = (0, 0);
    let mut remaining_a = sa.first().map_or(0.0, |&(_, p)| p);
    let mut remaining_b = sb.first().map_or(0.0, |&(_, p)| p);
    while i < sa.len() && j < sb.len() {
        let moved = remaining_a.min(remaining_b);
        cost += moved * (sa[i].0 as f64 - sb[j].0 as f64).abs();
        remaining_a -= moved;
        remaining_b -= moved;
        if remaining_a <= 0.0 {
            i += 1;
            remaining_a = sa.get(i).map_or(0.0, |&(_, p)| p);
        }
        if remaining_b <= 0.0 {
            j += 1;
            remaining_b = sb.get(j).map_or(0.0, |&(_, p)| p);
        }
    }
    Ok(cost)
}

/// Parameters of a randomized verification sweep over `V_mu` members.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub mu_grid: Vec<f64>,
    pub trunc: usize,
    pub n_samples: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "all_checks")]
    pub checks: Vec<CheckKind>,
    /// Self-test mode: flip the direction of the Theorem 1 inequality so the
    /// sweep must report failures.
    #[serde(default)]
    pub self_test_flip: bool,
}

fn all_checks() -> Vec<CheckKind> {
    CheckKind::ALL.to_vec()
}

impl SweepConfig {
    pub fn new(mu_grid: Vec<f64>, trunc: usize, n_samples: u64, seed: u64) -> Self {
        Self {
            mu_grid,
            trunc,
            n_samples,
            seed,
            checks: all_checks(),
            self_test_flip: false,
        }
    }
}

/// A sample whose slack was below [`TIGHT_SLACK`]: the bound is (near) an
/// equality there.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub mu: f64,
    pub sample_index: u64,
    pub slack: f64,
    #[serde(skip)]
    pub dist: Dist,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckAggregate {
    pub count: u64,
    pub failures: u64,
    pub min_slack: Option<f64>,
    pub witnesses: Vec<Witness>,
}

impl CheckAggregate {
    fn observe(&mut self, report: &BoundReport, mu: f64, sample_index: u64, d: &Dist) {
        self.count += 1;
        if !report.pass {
            self.failures += 1;
        }
        self.min_slack = Some(match self.min_slack {
            Some(s) => s.min(report.slack),
            None => report.slack,
        });
        if report.slack < TIGHT_SLACK && self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(Witness {
                mu,
                sample_index,
                slack: report.slack,
                dist: d.clone(),
            });
        }
    }
}

/// Aggregated sweep outcome, keyed by inequality name.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub checks: BTreeMap<&'static str, CheckAggregate>,
}

impl SweepReport {
    pub fn total_failures(&self) -> u64 {
        self.checks.values().map(|a| a.failures).sum()
    }

    pub fn all_pass(&self) -> bool {
        self.total_failures() == 0
    }
}

/// Runs every enabled check on `n_samples` random members of `V_mu` for each
/// grid point. Sample `i` (counted across the whole sweep) uses the seed
/// `seed + i`, so the outcome is independent of evaluation order.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepReport, VerifierError> {
    let mut checks: BTreeMap<&'static str, CheckAggregate> = BTreeMap::new();
    for kind in &cfg.checks {
        for name in kind.report_names() {
            checks.entry(name).or_default();
        }
    }
    let mut sample_index: u64 = 0;
    for &mu in &cfg.mu_grid {
        for _ in 0..cfg.n_samples {
            let d = sample_vmu(mu, cfg.trunc, cfg.seed.wrapping_add(sample_index))?;
            for kind in &cfg.checks {
                for (name, outcome) in kind.run(&d) {
                    let Ok(mut report) = outcome else {
                        continue; // precondition not met for this sample
                    };
                    if cfg.self_test_flip && name == "thm1" {
                        report = report.flipped();
                    }
                    checks
                        .get_mut(name)
                        .expect("aggregate pre-registered")
                        .observe(&report, mu, sample_index, &d);
                }
            }
            sample_index += 1;
        }
    }
    Ok(SweepReport { checks })
}
