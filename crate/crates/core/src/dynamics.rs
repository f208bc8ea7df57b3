//! Right-hand sides of the three mean-field models, fixed-step explicit
//! integrators, and trajectory recording of the metric columns.
//!
//! All three systems are truncated conservatively: the upward jump out of the
//! last state `N` is deleted, so the derivative sums to zero exactly and the
//! mean-derivative defect is bounded by the tail flux (`wbar * p_N` for the
//! rich-biased model, `|a| * p_N` for sticky dispersion; the
//! persuasion-polarization system is finite to begin with).

use crate::dist::{dirac, shifted_bernoulli, Dist, DistError, Tolerances};
use crate::metrics::{gini_cdf, lp_distance, wasserstein1, MetricsError};
use crate::verifier::{BoundReport, CheckKind};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Early-stop threshold on the l1 distance between successive recorded states.
pub const CONVERGENCE_EPS: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum DynError {
    #[error("entry {value:e} at state {index} fell below -{tol:e} after a step; dt is likely too large")]
    PositivityViolation { index: usize, value: f64, tol: f64 },
    #[error("total mass {mass} drifted beyond tolerance {tol:e}")]
    MassDrift { mass: f64, tol: f64 },
    #[error("initial datum incompatible with the model: {0}")]
    InvalidInitialDatum(String),
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("integration failed at step {step} (t = {t}): {source}")]
    StepFailed {
        step: u64,
        t: f64,
        #[source]
        source: Box<DynError>,
    },
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Which right-hand side to integrate, plus its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    /// Example 1: rich-biased dollar exchange. No equilibrium with positive
    /// mean; the Gini index grows toward 1 (oligarchy), so runs terminate on
    /// `t_end` only.
    RichBiased,
    /// Example 2: iterative persuasion-polarization opinion dynamics on the
    /// state space `{0, .., 2k}`.
    PersuasionPolarization { k: usize },
    /// Example 3: sticky dispersion on complete graphs with rate parameter
    /// `mu > 0` (the regime of interest is `mu` in `(0, 1]`).
    StickyDispersion { mu: f64 },
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::RichBiased => "rich_biased",
            ModelSpec::PersuasionPolarization { .. } => "persuasion_polarization",
            ModelSpec::StickyDispersion { .. } => "sticky_dispersion",
        }
    }

    pub fn validate(&self, d0: &Dist) -> Result<(), DynError> {
        match *self {
            ModelSpec::RichBiased => Ok(()),
            ModelSpec::PersuasionPolarization { k } => {
                if k == 0 {
                    return Err(DynError::InvalidConfig("k must be positive".into()));
                }
                if d0.trunc() != 2 * k {
                    return Err(DynError::InvalidInitialDatum(format!(
                        "persuasion-polarization with k = {k} needs truncation {} (got {})",
                        2 * k,
                        d0.trunc()
                    )));
                }
                Ok(())
            }
            ModelSpec::StickyDispersion { mu } => {
                if mu > 0.0 {
                    Ok(())
                } else {
                    Err(DynError::InvalidConfig(format!(
                        "sticky dispersion needs mu > 0, got {mu}"
                    )))
                }
            }
        }
    }

    /// Writes `Q[p]` into `out`. `p` need not lie on the simplex: the
    /// integrator evaluates intermediate stage values here.
    pub(crate) fn rhs_into(&self, p: &[f64], out: &mut [f64]) {
        match *self {
            ModelSpec::RichBiased => rich_biased_into(p, out),
            ModelSpec::PersuasionPolarization { .. } => ipp_into(p, out),
            ModelSpec::StickyDispersion { mu } => sticky_into(p, mu, out),
        }
    }
}

/// Rich-biased exchange: `wbar = sum_{n>=1} p_n / n`,
/// `p'_0 = p_1 - wbar p_0`,
/// `p'_n = p_{n+1}/(n+1) + wbar p_{n-1} - (1/n + wbar) p_n`,
/// with the upward flux out of `N` deleted at the boundary.
fn rich_biased_into(p: &[f64], out: &mut [f64]) {
    let n_max = p.len() - 1;
    if n_max == 0 {
        out[0] = 0.0;
        return;
    }
    let mut wbar = 0.0;
    for (n, &pn) in p.iter().enumerate().skip(1) {
        wbar += pn / n as f64;
    }
    out[0] = p[1] - wbar * p[0];
    for n in 1..n_max {
        out[n] = p[n + 1] / (n + 1) as f64 + wbar * p[n - 1] - (1.0 / n as f64 + wbar) * p[n];
    }
    out[n_max] = wbar * p[n_max - 1] - p[n_max] / n_max as f64;
}

/// Persuasion-polarization on `{0, .., 2k}`:
/// `p'_n = p_{n-1} sum_{j>=n} p_j + p_{n+1} sum_{j<=n} p_j - p_n (1 - p_n)`
/// for interior `n`, with pair-interaction boundaries at `0` and `2k`.
///
/// The loss factor is written as `(m - p_n)` with `m = sum_j p_j`, which
/// equals `(1 - p_n)` on the simplex but makes `sum(out) = 0` an identity in
/// `p`. With the literal constant, a mass defect `eps` feeds back as
/// `d(eps)/dt ~ +eps` and rounding noise grows like `e^t`.
fn ipp_into(p: &[f64], out: &mut [f64]) {
    let last = p.len() - 1;
    if last == 0 {
        out[0] = 0.0;
        return;
    }
    let m: f64 = p.iter().sum();
    out[0] = p[0] * p[1] - p[0] * (m - p[0]);
    let mut prefix = p[0];
    for n in 1..last {
        let tail = m - prefix;
        out[n] = p[n - 1] * tail + p[n + 1] * (prefix + p[n]) - p[n] * (m - p[n]);
        prefix += p[n];
    }
    out[last] = p[last] * p[last - 1] - p[last] * (m - p[last]);
}

/// Sticky dispersion with `a = mu - 1 + p_0`:
/// `p'_0 = -a p_0`,
/// `p'_n = n p_{n+1} + a p_{n-1} - (n-1) p_n - a p_n`,
/// with the upward flux out of `N` deleted at the boundary.
fn sticky_into(p: &[f64], mu: f64, out: &mut [f64]) {
    let n_max = p.len() - 1;
    let a = mu - 1.0 + p[0];
    if n_max == 0 {
        out[0] = 0.0;
        return;
    }
    out[0] = -a * p[0];
    for n in 1..n_max {
        out[n] = n as f64 * p[n + 1] + a * p[n - 1] - (n as f64 - 1.0) * p[n] - a * p[n];
    }
    out[n_max] = a * p[n_max - 1] - (n_max as f64 - 1.0) * p[n_max];
}

/// Derivative of the rich-biased system at `d`.
pub fn rhs_rich_biased(d: &Dist) -> Vec<f64> {
    let mut out = vec![0.0; d.probs().len()];
    rich_biased_into(d.probs(), &mut out);
    out
}

/// Derivative of the persuasion-polarization system at `d`; the truncation
/// must equal `2k`.
pub fn rhs_ipp(d: &Dist, k: usize) -> Result<Vec<f64>, DynError> {
    ModelSpec::PersuasionPolarization { k }.validate(d)?;
    let mut out = vec![0.0; d.probs().len()];
    ipp_into(d.probs(), &mut out);
    Ok(out)
}

/// Derivative of the sticky dispersion system at `d` with rate parameter `mu`.
pub fn rhs_sticky(d: &Dist, mu: f64) -> Vec<f64> {
    let mut out = vec![0.0; d.probs().len()];
    sticky_into(d.probs(), mu, &mut out);
    out
}

fn finalize_step(mut next: Vec<f64>, tol: &Tolerances) -> Result<Dist, DynError> {
    let mut sum = 0.0;
    for (index, x) in next.iter_mut().enumerate() {
        if *x < -tol.neg {
            return Err(DynError::PositivityViolation {
                index,
                value: *x,
                tol: tol.neg,
            });
        }
        if *x < 0.0 {
            *x = 0.0;
        }
        sum += *x;
    }
    if (sum - 1.0).abs() > tol.mass {
        return Err(DynError::MassDrift {
            mass: sum,
            tol: tol.mass,
        });
    }
    Ok(Dist::from_validated(next))
}

/// One classical 4-stage Runge-Kutta step. Entries in `[-tol.neg, 0)` are
/// clamped to zero afterwards; anything lower aborts with
/// [`DynError::PositivityViolation`].
pub fn step_rk4<F>(mut rhs: F, d: &Dist, dt: f64, tol: &Tolerances) -> Result<Dist, DynError>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let p = d.probs();
    let n = p.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut stage = vec![0.0; n];

    rhs(p, &mut k1);
    for i in 0..n {
        stage[i] = p[i] + 0.5 * dt * k1[i];
    }
    rhs(&stage, &mut k2);
    for i in 0..n {
        stage[i] = p[i] + 0.5 * dt * k2[i];
    }
    rhs(&stage, &mut k3);
    for i in 0..n {
        stage[i] = p[i] + dt * k3[i];
    }
    rhs(&stage, &mut k4);

    let next = (0..n)
        .map(|i| p[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    finalize_step(next, tol)
}

/// One explicit Euler step, kept for order-of-accuracy cross-checks.
pub fn step_euler<F>(mut rhs: F, d: &Dist, dt: f64, tol: &Tolerances) -> Result<Dist, DynError>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let p = d.probs();
    let mut k = vec![0.0; p.len()];
    rhs(p, &mut k);
    let next = p.iter().zip(&k).map(|(&x, &dx)| x + dt * dx).collect();
    finalize_step(next, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorKind {
    #[default]
    Rk4,
    Euler,
}

/// Truncation size, step size, horizon, recording cadence, and tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trunc: usize,
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_record_every")]
    pub record_every: u64,
    #[serde(default = "default_tol_mass")]
    pub tol_mass: f64,
    #[serde(default = "default_tol_mean")]
    pub tol_mean: f64,
    #[serde(default = "default_tol_neg")]
    pub tol_neg: f64,
    /// Warn when the mass at the truncation boundary exceeds this.
    #[serde(default = "default_tail_warn")]
    pub tail_warn: f64,
    #[serde(default)]
    pub method: IntegratorKind,
    /// Halt once the l1 distance between successive recorded states falls
    /// below [`CONVERGENCE_EPS`].
    #[serde(default)]
    pub stop_when_converged: bool,
    /// Inequality checks evaluated at every recorded step.
    #[serde(default)]
    pub checks: Vec<CheckKind>,
}

fn default_dt() -> f64 {
    0.01
}
fn default_record_every() -> u64 {
    1
}
fn default_tol_mass() -> f64 {
    crate::dist::DEFAULT_TOL_MASS
}
fn default_tol_mean() -> f64 {
    1e-6
}
fn default_tol_neg() -> f64 {
    crate::dist::DEFAULT_TOL_NEG
}
fn default_tail_warn() -> f64 {
    1e-8
}

impl SimConfig {
    pub fn new(trunc: usize, t_end: f64) -> Self {
        Self {
            trunc,
            t_end,
            dt: default_dt(),
            record_every: default_record_every(),
            tol_mass: default_tol_mass(),
            tol_mean: default_tol_mean(),
            tol_neg: default_tol_neg(),
            tail_warn: default_tail_warn(),
            method: IntegratorKind::Rk4,
            stop_when_converged: false,
            checks: Vec::new(),
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            mass: self.tol_mass,
            neg: self.tol_neg,
        }
    }

    fn validate(&self) -> Result<(), DynError> {
        if !(self.dt > 0.0) {
            return Err(DynError::InvalidConfig(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0) {
            return Err(DynError::InvalidConfig(format!(
                "t_end must be >= 0, got {}",
                self.t_end
            )));
        }
        if self.trunc < 2 {
            return Err(DynError::InvalidConfig(format!(
                "trunc must be >= 2, got {}",
                self.trunc
            )));
        }
        if self.record_every == 0 {
            return Err(DynError::InvalidConfig("record_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// One recorded step: timestamp, conservation diagnostics, metric columns,
/// and the enabled bound reports (`None` where a check's precondition did not
/// apply at that state, e.g. an integer-mean check off the integer lattice).
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub mass: f64,
    pub mean: f64,
    pub gini: f64,
    pub w1_equil: f64,
    pub l1_dirac0: f64,
    pub tail_mass: f64,
    pub bounds: Vec<Option<BoundReport>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    pub model: String,
    /// Report names of the enabled checks, in column order.
    pub check_names: Vec<&'static str>,
    pub rows: Vec<TrajectoryRow>,
    #[serde(skip)]
    pub final_state: Dist,
    /// Number of recorded steps with `p_N` above the tail warning threshold.
    pub tail_warnings: usize,
    pub converged_early: bool,
}

/// The equilibrium target for the `w1_equil` column: the Dirac at `mu` for
/// integer `mu`, otherwise the shifted Bernoulli distribution.
fn equilibrium_target(mu: f64, trunc: usize) -> Result<Dist, DistError> {
    if mu.fract() == 0.0 && mu >= 0.0 && (mu as usize) <= trunc {
        dirac(mu as usize, trunc)
    } else {
        shifted_bernoulli(mu, trunc)
    }
}

/// Fixed-step integration of `model` from `d0` to `cfg.t_end`, recording the
/// metric columns every `cfg.record_every` steps (step 0 and the final step
/// are always recorded). The `w1_equil` column measures the distance to the
/// shifted Bernoulli distribution with the initial datum's mean.
pub fn simulate(model: &ModelSpec, d0: &Dist, cfg: &SimConfig) -> Result<TrajectoryRecord, DynError> {
    cfg.validate()?;
    model.validate(d0)?;
    if d0.trunc() != cfg.trunc {
        return Err(DynError::InvalidInitialDatum(format!(
            "datum truncation {} does not match configured truncation {}",
            d0.trunc(),
            cfg.trunc
        )));
    }
    let mu0 = d0.mean();
    let target = equilibrium_target(mu0, cfg.trunc)?;
    let origin = dirac(0, 0).expect("dirac(0, 0) is valid");
    let tol = cfg.tolerances();
    let n_steps = (cfg.t_end / cfg.dt).round() as u64;

    let check_names: Vec<&'static str> = cfg
        .checks
        .iter()
        .flat_map(|c| c.report_names().iter().copied())
        .collect();

    let mut tail_warnings = 0usize;
    let record = |t: f64, state: &Dist, warnings: &mut usize| -> Result<TrajectoryRow, DynError> {
        let tail_mass = state.prob(state.trunc());
        if tail_mass > cfg.tail_warn {
            if *warnings == 0 {
                log::warn!(
                    "tail mass {tail_mass:e} at t = {t} exceeds tail_warn = {:e}; \
                     the truncation may be too small",
                    cfg.tail_warn
                );
            }
            *warnings += 1;
        }
        let mut bounds = Vec::with_capacity(check_names.len());
        for check in &cfg.checks {
            for (_, outcome) in check.run(state) {
                bounds.push(outcome.ok());
            }
        }
        Ok(TrajectoryRow {
            t,
            mass: state.probs().iter().sum(),
            mean: state.mean(),
            gini: gini_cdf(state)?,
            w1_equil: wasserstein1(state, &target),
            l1_dirac0: lp_distance(state, &origin, 1.0)?,
            tail_mass,
            bounds,
        })
    };

    let mut rows = Vec::new();
    let mut state = d0.clone();
    rows.push(record(0.0, &state, &mut tail_warnings)?);
    let mut last_recorded = d0.clone();
    let mut converged_early = false;

    for step in 1..=n_steps {
        let t = step as f64 * cfg.dt;
        let rhs = |p: &[f64], out: &mut [f64]| model.rhs_into(p, out);
        state = match cfg.method {
            IntegratorKind::Rk4 => step_rk4(rhs, &state, cfg.dt, &tol),
            IntegratorKind::Euler => step_euler(rhs, &state, cfg.dt, &tol),
        }
        .map_err(|e| DynError::StepFailed {
            step,
            t,
            source: Box::new(e),
        })?;

        if step % cfg.record_every == 0 || step == n_steps {
            rows.push(record(t, &state, &mut tail_warnings)?);
            if cfg.stop_when_converged
                && lp_distance(&last_recorded, &state, 1.0)? < CONVERGENCE_EPS
            {
                converged_early = true;
                break;
            }
            last_recorded = state.clone();
        }
    }

    let mean_drift = (state.mean() - mu0).abs();
    if !matches!(model, ModelSpec::StickyDispersion { .. }) && mean_drift > cfg.tol_mean {
        log::warn!(
            "mean drifted by {mean_drift:e} over the run (tol_mean = {:e})",
            cfg.tol_mean
        );
    }

    Ok(TrajectoryRecord {
        model: model.name().to_string(),
        check_names,
        rows,
        final_state: state,
        tail_warnings,
        converged_early,
    })
}
