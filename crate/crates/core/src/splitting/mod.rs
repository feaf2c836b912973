//! Anchored two-step inertial forward-reflected-backward splitting and the
//! classical schemes it generalizes.
//!
//! For `0 ∈ F(u) + G(u)` with `F` reached through `J = J_{γF}` and a
//! Lipschitz `G`, each step forms the extrapolation
//!
//! ```text
//! w_k = u_k + θ1 (u_k - u_{k-1}) + θ2 (u_{k-1} - u_{k-2})
//! ```
//!
//! pulls it toward the anchor `w*` with weight `λ_k`, and applies a
//! reflected forward step (one fresh `G` evaluation per iteration):
//!
//! ```text
//! u_{k+1} = J(λ_k w* + (1 - λ_k) w_k - γ G u_k - γ (1 - λ_k)(G u_k - G u_{k-1}))
//! ```
//!
//! With `λ_k -> 0`, `Σ λ_k = ∞` and parameters inside the region checked by
//! [`validate_params`], the iterates converge strongly to the projection of
//! `w*` onto the solution set.

mod baselines;
mod frab;
mod params;
mod trace;

pub use baselines::{baseline_solve, frb_step, validate_baseline, BaselineMethod, BaselineParams};
pub use frab::{frab_solve, frab_step, frab_step_with_lambda, InitialPoints, IterState};
pub use params::{
    default_gamma, default_theta1, default_theta2, feasible_theta2_interval, lambda_value, validate_params,
    FrabParams, LambdaSchedule, StoppingRule, UpdateForm, Validation, Violation,
};
pub use trace::{SolveTrace, Status};

use crate::error::Result;
use crate::hilbert::Vector;
use crate::operators::{ForwardOperator, ResolventOperator};
use crate::scalar::Scalar;

/// `|u - J_{γF}(u - γ G u)| / (1 + |u|)`; zero exactly on `zer(F + G)`.
pub fn fixed_point_residual_of<S: Scalar>(
    f: &ResolventOperator<S>,
    g: &ForwardOperator<S>,
    u: &Vector<S>,
    gamma: S,
) -> Result<S> {
    f.check_gamma(gamma)?;
    let gu = g.eval(u)?;
    crate::error::check_dim(f.dim(), u.dim())?;
    frab::natural_residual(f, gamma, u, &gu)
}
