//! Splitting solvers for inclusions `0 ∈ F(u) + G(u)` in `R^n`, where `G`
//! is single-valued and Lipschitz and `F` is set-valued and reached through
//! its resolvent. Either operator may be non-monotone as long as the moduli
//! satisfy `μ_F + μ_G >= 0`.
//!
//! The main method is the anchored two-step inertial
//! forward-reflected-backward iteration ([`splitting::frab_solve`]), which
//! converges to the projection of the anchor `w*` onto the solution set.
//! Forward-backward, Tseng, forward-reflected-backward and an inertial
//! viscosity scheme are provided for comparison.
//!
//! ```
//! use frab::{make_problem, frab_solve, FrabParams64, InitialPoints, ProblemSpec, Vector64};
//!
//! let p = make_problem(&ProblemSpec::WeakPair { mu_f: -0.5, mu_g: 1.0, dim: 1 }, 0)?;
//! let params = FrabParams64::defaults(p.lipschitz(), Vector64::zeros(1))
//!     .with_gamma(0.4)
//!     .with_default_inertia(p.lipschitz());
//! let start = InitialPoints::constant(Vector64::from_f64(&[1.5])?);
//! let trace = frab_solve(p.f(), p.g(), &params, &start)?;
//! assert!(trace.final_point.norm() < 1e-3);
//! # Ok::<(), frab::Error>(())
//! ```
//!
//! Everything is generic over the scalar ([`Scalar`]: `f32` or `f64`); the
//! `*64` / `*32` aliases fix it.

pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod hilbert;
pub mod linalg;
pub mod operators;
pub mod problems;
pub mod scalar;
pub mod splitting;

pub use diagnostics::{
    check_sum_rule, estimate_moduli, fixed_point_residual, trace_stats, ModulusEstimate, SumRuleCheck, TraceSummary,
};
pub use error::{Error, Result};
pub use hilbert::{inner, verify_norm_identities, IdentityResiduals, Vector};
pub use linalg::Matrix;
pub use operators::{
    build_operator, forward_eval, resolve, resolve_shifted, soft_threshold, BuiltOperator, ForwardOperator,
    OperatorSpec, ResolventOperator,
};
pub use problems::{make_problem, project_solution, BoxSet, InclusionProblem, ProblemSpec, SolutionOracle};
pub use scalar::Scalar;
pub use splitting::{
    baseline_solve, feasible_theta2_interval, fixed_point_residual_of, frab_solve, frab_step, frab_step_with_lambda, frb_step,
    lambda_value, validate_baseline, validate_params, BaselineMethod, BaselineParams, FrabParams, InitialPoints,
    IterState, LambdaSchedule, SolveTrace, Status, StoppingRule, UpdateForm, Validation, Violation,
};

pub type Vector64 = Vector<f64>;
pub type Vector32 = Vector<f32>;
pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type ForwardOperator64 = ForwardOperator<f64>;
pub type ForwardOperator32 = ForwardOperator<f32>;
pub type ResolventOperator64 = ResolventOperator<f64>;
pub type ResolventOperator32 = ResolventOperator<f32>;
pub type FrabParams64 = FrabParams<f64>;
pub type FrabParams32 = FrabParams<f32>;
pub type InclusionProblem64 = InclusionProblem<f64>;
pub type InclusionProblem32 = InclusionProblem<f32>;
pub type SolveTrace64 = SolveTrace<f64>;
pub type SolveTrace32 = SolveTrace<f32>;
