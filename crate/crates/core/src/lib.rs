//! Mean-field ODE systems on probability distributions over the non-negative
//! integers, with the Gini index as the central functional.
//!
//! The crate simulates three exchange/opinion/dispersion models (rich-biased
//! dollar exchange, iterative persuasion-polarization, sticky dispersion),
//! computes the Gini index and Wasserstein/l^p metrics, and numerically
//! verifies the inequalities relating them along trajectories and over
//! randomized sweeps of the constraint set `V_mu`.
//!
//! - [`dist`]: validated mass functions on `{0, .., N}` and the canonical
//!   equilibria (Dirac, shifted Bernoulli).
//! - [`metrics`]: Gini index (three routes), Wasserstein-1, l^p distances,
//!   and the proof-level intermediate functionals.
//! - [`dynamics`]: the three right-hand sides, fixed-step RK4/Euler, and
//!   trajectory recording.
//! - [`verifier`]: one [`verifier::BoundReport`] per inequality, a seeded
//!   sampler of `V_mu`, a brute-force transport oracle, and randomized sweeps.
//! - [`fileio`] and [`cli`]: file formats and the `ginidyn` binary.

pub mod cli;
pub mod dist;
pub mod dynamics;
pub mod fileio;
pub mod metrics;
pub mod verifier;

pub use dist::{dirac, gini_equilibrium_value, shifted_bernoulli, Dist, DistError, Tolerances};
pub use dynamics::{simulate, DynError, IntegratorKind, ModelSpec, SimConfig, TrajectoryRecord};
pub use metrics::{
    gini_cdf, gini_double_sum, gini_iid_form, key_tail_functionals, lp_distance, var_sqrt,
    wasserstein1, MetricsError,
};
pub use verifier::{
    sample_vmu, sweep, w1_bruteforce, BoundReport, CheckKind, SweepConfig, SweepReport,
    VerifierError,
};
