//! Probability distributions on a truncated copy of the non-negative integers.
//!
//! A [`Dist`] holds the mass function `p_0, .., p_N` of a distribution on
//! `{0, .., N}`; mass beyond the truncation `N` is structurally zero. Entries
//! are validated on construction and never renormalized — a mass defect is a
//! diagnostic (e.g. of integrator quality), not something to repair silently.

use thiserror::Error;

/// Default tolerance on `|sum(probs) - 1|`.
pub const DEFAULT_TOL_MASS: f64 = 1e-9;
/// Default tolerance below zero; entries in `[-tol, 0)` count as numerical zeros.
pub const DEFAULT_TOL_NEG: f64 = 1e-12;

/// Validation tolerances for distributions and integration steps.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Allowed deviation of the total mass from 1.
    pub mass: f64,
    /// Entries in `[-neg, 0)` are treated as numerical zeros; anything lower is an error.
    pub neg: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            mass: DEFAULT_TOL_MASS,
            neg: DEFAULT_TOL_NEG,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistError {
    #[error("distribution needs at least one entry")]
    Empty,
    #[error("negative mass {value:e} at state {index}")]
    NegativeMass { index: usize, value: f64 },
    #[error("total mass {sum} deviates from 1 beyond tolerance {tol:e}")]
    MassDefect { sum: f64, tol: f64 },
    #[error("mean {mu} needs truncation >= {needed}, got {trunc}")]
    TruncationTooSmall {
        mu: f64,
        trunc: usize,
        needed: usize,
    },
    #[error("state {index} is outside the truncation {trunc}")]
    IndexOutOfRange { index: usize, trunc: usize },
    #[error("mean must be non-negative, got {0}")]
    NegativeMean(f64),
}

/// A validated probability mass function on `{0, .., trunc}`.
///
/// Immutable after construction; cheap to clone and safe to share across
/// threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist {
    probs: Vec<f64>,
    trunc: usize,
}

impl Dist {
    /// Validates `weights` as a probability mass function on `{0, .., len-1}`
    /// using the default [`Tolerances`]. No renormalization is performed.
    pub fn new(weights: Vec<f64>) -> Result<Self, DistError> {
        Self::with_tolerances(weights, &Tolerances::default())
    }

    /// Same as [`Dist::new`] with explicit tolerances.
    pub fn with_tolerances(weights: Vec<f64>, tol: &Tolerances) -> Result<Self, DistError> {
        if weights.is_empty() {
            return Err(DistError::Empty);
        }
        let mut sum = 0.0;
        for (index, &value) in weights.iter().enumerate() {
            if value < -tol.neg || !value.is_finite() {
                return Err(DistError::NegativeMass { index, value });
            }
            sum += value;
        }
        if (sum - 1.0).abs() > tol.mass {
            return Err(DistError::MassDefect { sum, tol: tol.mass });
        }
        let trunc = weights.len() - 1;
        Ok(Self {
            probs: weights,
            trunc,
        })
    }

    /// Wraps entries that are already known to satisfy the invariants
    /// (used by the integrator after its own clamping pass).
    pub(crate) fn from_validated(probs: Vec<f64>) -> Self {
        debug_assert!(!probs.is_empty());
        let trunc = probs.len() - 1;
        Self { probs, trunc }
    }

    /// Largest represented state `N`.
    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// The raw mass entries `p_0, .., p_N`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Mass at state `n`; zero beyond the truncation.
    pub fn prob(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    /// First moment `sum_n n * p_n`.
    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, &p)| n as f64 * p)
            .sum()
    }

    /// Cumulative distribution function `F_n = sum_{m<=n} p_m`.
    pub fn cdf(&self) -> Cdf {
        let mut values = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for &p in &self.probs {
            acc += p;
            values.push(acc);
        }
        Cdf { values }
    }

    /// Copy with the truncation extended to `trunc` by zero entries.
    /// Returns a plain clone if `trunc` is not larger than the current one.
    pub fn zero_padded(&self, trunc: usize) -> Dist {
        let mut probs = self.probs.clone();
        if trunc >= probs.len() {
            probs.resize(trunc + 1, 0.0);
        }
        Dist::from_validated(probs)
    }
}

/// Partial sums `F_0, .., F_N` of a [`Dist`]; nondecreasing with `F_N ~ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cdf {
    values: Vec<f64>,
}

impl Cdf {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// The two-point distribution on `{floor(mu), floor(mu)+1}` with mean `mu`:
/// `p_floor = 1 - mu + floor(mu)`, `p_{floor+1} = mu - floor(mu)`.
///
/// This is the unique Gini minimizer over distributions with mean `mu`, and
/// the equilibrium of the persuasion-polarization and sticky dispersion
/// models. Requires `trunc >= floor(mu) + 1` so both support points exist.
pub fn shifted_bernoulli(mu: f64, trunc: usize) -> Result<Dist, DistError> {
    if mu < 0.0 || !mu.is_finite() {
        return Err(DistError::NegativeMean(mu));
    }
    let floor = mu.floor();
    let needed = floor as usize + 1;
    if trunc < needed {
        return Err(DistError::TruncationTooSmall { mu, trunc, needed });
    }
    let frac = mu - floor;
    let mut probs = vec![0.0; trunc + 1];
    probs[floor as usize] = 1.0 - frac;
    probs[floor as usize + 1] = frac;
    Ok(Dist::from_validated(probs))
}

/// Unit mass at state `n` on `{0, .., trunc}`.
pub fn dirac(n: usize, trunc: usize) -> Result<Dist, DistError> {
    if n > trunc {
        return Err(DistError::IndexOutOfRange { index: n, trunc });
    }
    let mut probs = vec![0.0; trunc + 1];
    probs[n] = 1.0;
    Ok(Dist::from_validated(probs))
}

/// Gini index of the shifted Bernoulli distribution with mean `mu`:
/// `(1/mu)(1 - mu + floor(mu))(mu - floor(mu))`, and 0 when `mu` is an
/// integer (including `mu = 0`, where the `1/mu` prefactor never applies).
pub fn gini_equilibrium_value(mu: f64) -> f64 {
    if mu <= 0.0 {
        return 0.0;
    }
    let floor = mu.floor();
    let frac = mu - floor;
    if frac == 0.0 {
        return 0.0;
    }
    (1.0 - frac) * frac / mu
}
