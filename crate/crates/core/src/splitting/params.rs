use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::scalar::{lit, Scalar};

/// Anchor weights `λ_k ∈ (0, 1)` with `λ_k -> 0` and `Σ λ_k = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "S: Scalar")]
pub enum LambdaSchedule<S> {
    /// `1 / (k + 1)`
    Harmonic,
    /// `(k + 1)^{-p}`, `0 < p <= 1`
    Power { p: S },
    /// `min(c, 1 / (k + 1))`, `0 < c < 1`
    ConstantCapped { c: S },
}

impl<S: Scalar> Default for LambdaSchedule<S> {
    fn default() -> Self {
        Self::Harmonic
    }
}

impl<S: Scalar> LambdaSchedule<S> {
    pub fn power(p: S) -> Result<Self> {
        let s = Self::Power { p };
        s.validate()?;
        Ok(s)
    }

    pub fn constant_capped(c: S) -> Result<Self> {
        let s = Self::ConstantCapped { c };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Harmonic => Ok(()),
            Self::Power { p } if p > S::zero() && p <= S::one() => Ok(()),
            Self::Power { p } => Err(Error::Construction(format!("power schedule needs 0 < p <= 1, got {p}"))),
            Self::ConstantCapped { c } if c > S::zero() && c < S::one() => Ok(()),
            Self::ConstantCapped { c } => {
                Err(Error::Construction(format!("capped schedule needs 0 < c < 1, got {c}")))
            }
        }
    }

    /// `λ_k` for `k >= 1`.
    pub fn value(&self, k: usize) -> S {
        debug_assert!(k >= 1, "schedules are indexed from k = 1");
        let kp1: S = lit((k.max(1) + 1) as f64);
        match *self {
            Self::Harmonic => S::one() / kp1,
            Self::Power { p } => kp1.powf(-p),
            Self::ConstantCapped { c } => c.min(S::one() / kp1),
        }
    }
}

/// Free-function form of [`LambdaSchedule::value`].
pub fn lambda_value<S: Scalar>(schedule: &LambdaSchedule<S>, k: usize) -> S {
    schedule.value(k)
}

/// Which of the two published placements of the anchor average to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateForm {
    /// `J(λ w* + (1-λ) w_k - γ G u_k - γ(1-λ)(G u_k - G u_{k-1}))`
    #[default]
    ProofForm,
    /// `J(λ w* + (1-λ)(w_k - γ G u_k - γ(1-λ)(G u_k - G u_{k-1})))`
    AlgorithmForm,
}

/// When a solve stops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingRule<S> {
    /// Stop once the fixed-point residual is `<= tol`; `None` runs all
    /// `max_iter` iterations.
    pub tol: Option<S>,
    pub max_iter: usize,
}

impl<S: Scalar> StoppingRule<S> {
    pub fn new(tol: S, max_iter: usize) -> Self {
        Self { tol: Some(tol), max_iter }
    }

    pub fn fixed_iterations(max_iter: usize) -> Self {
        Self { tol: None, max_iter }
    }
}

impl<S: Scalar> Default for StoppingRule<S> {
    fn default() -> Self {
        Self::new(lit(1e-8), 1_000_000)
    }
}

/// Parameters of the anchored two-step inertial iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct FrabParams<S> {
    pub gamma: S,
    pub theta1: S,
    pub theta2: S,
    pub anchor: Vector<S>,
    pub schedule: LambdaSchedule<S>,
    pub stopping: StoppingRule<S>,
    pub update_form: UpdateForm,
    /// Use `u_k - θ1 (u_k - u_{k-1})` in the extrapolation instead of `+θ1`.
    pub negate_theta1: bool,
}

impl<S: Scalar> FrabParams<S> {
    /// Defaults for a problem with Lipschitz constant `lipschitz`:
    /// `γ = 0.9/(2L)` (1 when `L = 0`), `θ1` at half its upper bound, `θ2`
    /// at half of its lower bound, harmonic schedule, tol 1e-8, 10^6
    /// iterations.
    pub fn defaults(lipschitz: S, anchor: Vector<S>) -> Self {
        let gamma = default_gamma(lipschitz);
        let theta1 = default_theta1(gamma, lipschitz);
        let theta2 = default_theta2(theta1, gamma, lipschitz);
        Self {
            gamma,
            theta1,
            theta2,
            anchor,
            schedule: LambdaSchedule::Harmonic,
            stopping: StoppingRule::default(),
            update_form: UpdateForm::ProofForm,
            negate_theta1: false,
        }
    }

    pub fn with_gamma(mut self, gamma: S) -> Self {
        self.gamma = gamma;
        self
    }

    /// Re-derives the default `θ1`, `θ2` for the current `γ`.
    pub fn with_default_inertia(mut self, lipschitz: S) -> Self {
        self.theta1 = default_theta1(self.gamma, lipschitz);
        self.theta2 = default_theta2(self.theta1, self.gamma, lipschitz);
        self
    }

    pub fn with_inertia(mut self, theta1: S, theta2: S) -> Self {
        self.theta1 = theta1;
        self.theta2 = theta2;
        self
    }

    pub fn with_schedule(mut self, schedule: LambdaSchedule<S>) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_stopping(mut self, stopping: StoppingRule<S>) -> Self {
        self.stopping = stopping;
        self
    }

    pub fn with_update_form(mut self, form: UpdateForm) -> Self {
        self.update_form = form;
        self
    }
}

pub fn default_gamma<S: Scalar>(lipschitz: S) -> S {
    if lipschitz > S::zero() {
        lit::<S>(0.9) / (lit::<S>(2.0) * lipschitz)
    } else {
        S::one()
    }
}

pub fn default_theta1<S: Scalar>(gamma: S, lipschitz: S) -> S {
    let bound = (S::one() - lit::<S>(2.0) * gamma * lipschitz) / lit(3.0);
    (lit::<S>(0.5) * bound).max(S::zero())
}

/// Half of the feasible lower bound; `0` when `θ1` is infeasible.
pub fn default_theta2<S: Scalar>(theta1: S, gamma: S, lipschitz: S) -> S {
    feasible_theta2_interval(theta1, gamma, lipschitz)
        .map(|(lo, _)| lit::<S>(0.5) * lo)
        .unwrap_or_else(|_| S::zero())
}

/// `((3θ1 - 1 + 2γL) / (3 + 4θ1), 0]`: the admissible range of `θ2`,
/// exclusive below and inclusive above.
pub fn feasible_theta2_interval<S: Scalar>(theta1: S, gamma: S, lipschitz: S) -> Result<(S, S)> {
    let three: S = lit(3.0);
    let slack = S::one() - lit::<S>(2.0) * gamma * lipschitz;
    if !(theta1 >= S::zero() && three * theta1 < slack) {
        return Err(Error::ParameterRegion(format!(
            "θ2 interval needs 0 <= θ1 < (1 - 2γL)/3; got θ1 = {theta1}, (1 - 2γL)/3 = {}",
            slack / three
        )));
    }
    let lower = (three * theta1 - S::one() + lit::<S>(2.0) * gamma * lipschitz) / (three + lit::<S>(4.0) * theta1);
    Ok((lower, S::zero()))
}

/// One broken feasibility condition.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `γ ∈ (0, 1/(2L))`
    StepSize { gamma: f64, bound: f64 },
    /// `0 <= θ1 < (1 - 2γL)/3`
    Theta1 { theta1: f64, bound: f64 },
    /// `(3θ1 - 1 + 2γL)/(3 + 4θ1) < θ2 <= 0`
    Theta2 { theta2: f64, lower: f64 },
    /// `1 + γ μ_F > 0`
    ResolventRegion { gamma: f64, mu_f: f64 },
    /// `μ_F + μ_G >= 0`
    ModulusSum { mu_f: f64, mu_g: f64 },
    /// `γ L < 1` (forward-backward-forward corrections)
    TsengStep { gamma: f64, lipschitz: f64 },
    /// `γ > 0`
    NonPositiveStep { gamma: f64 },
    /// Anything else: non-finite inputs, contraction weight out of range.
    Other(String),
}

impl Violation {
    /// Short machine-friendly name of the broken condition.
    pub fn condition(&self) -> &'static str {
        match self {
            Self::StepSize { .. } => "step_size",
            Self::Theta1 { .. } => "theta1_range",
            Self::Theta2 { .. } => "theta2_range",
            Self::ResolventRegion { .. } => "resolvent_region",
            Self::ModulusSum { .. } => "modulus_sum",
            Self::TsengStep { .. } => "tseng_step",
            Self::NonPositiveStep { .. } => "positive_step",
            Self::Other(_) => "other",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::StepSize { gamma, bound } => write!(
                f,
                "step size: γ ∈ (0, 1/(2L)) violated: γ = {gamma}, 1/(2L) = {bound}"
            ),
            Self::Theta1 { theta1, bound } => write!(
                f,
                "inertia: 0 ≤ θ1 < (1−2γL)/3 violated: θ1 = {theta1}, (1−2γL)/3 = {bound}"
            ),
            Self::Theta2 { theta2, lower } => write!(
                f,
                "inertia: (3θ1−1+2γL)/(3+4θ1) < θ2 ≤ 0 violated: θ2 = {theta2}, lower bound = {lower}"
            ),
            Self::ResolventRegion { gamma, mu_f } => write!(
                f,
                "resolvent region: 1+γμ_F > 0 violated: 1+γμ_F = {} (γ = {gamma}, μ_F = {mu_f}; \
                 μ_F is the signed modulus of F, read as F being μ_F-monotone; under the \
                 reading \"F is (−μ_F)-monotone\" pass the negated modulus)",
                1.0 + gamma * mu_f
            ),
            Self::ModulusSum { mu_f, mu_g } => write!(
                f,
                "modulus sum: μ_F+μ_G ≥ 0 violated: μ_F+μ_G = {} (μ_F = {mu_f}, μ_G = {mu_g}; \
                 μ_F is the signed modulus of F; under the reading \"F is (−μ_F)-monotone\" \
                 pass the negated modulus)",
                mu_f + mu_g
            ),
            Self::TsengStep { gamma, lipschitz } => {
                write!(f, "step size: γL < 1 violated: γL = {}", gamma * lipschitz)
            }
            Self::NonPositiveStep { gamma } => write!(f, "step size: γ > 0 violated: γ = {gamma}"),
            Self::Other(msg) => write!(f, "{msg}"),
        }
    }
}

/// Outcome of a feasibility check: empty means every condition holds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::InfeasibleParameters(self.violations))
        }
    }

    pub fn conditions(&self) -> Vec<&'static str> {
        self.violations.iter().map(Violation::condition).collect()
    }
}

/// Checks the feasibility region of the anchored iteration for problem
/// constants `L`, `μ_F`, `μ_G`. With `L = 0` the step-size bound reads
/// `γ ∈ (0, ∞)`. Violations are reported, never raised.
pub fn validate_params<S: Scalar>(gamma: S, theta1: S, theta2: S, lipschitz: S, mu_f: S, mu_g: S) -> Validation {
    let f = |x: S| x.to_f64().unwrap_or(f64::NAN);
    let mut out = Validation::default();
    let inputs = [gamma, theta1, theta2, lipschitz, mu_f, mu_g];
    if inputs.iter().any(|x| !x.is_finite()) || lipschitz < S::zero() {
        out.violations.push(Violation::Other(
            "all parameters must be finite and L must be nonnegative".into(),
        ));
        return out;
    }
    let two: S = lit(2.0);
    let three: S = lit(3.0);

    let step_ok = gamma > S::zero() && (lipschitz == S::zero() || two * gamma * lipschitz < S::one());
    if !step_ok {
        let bound = if lipschitz > S::zero() { f(S::one() / (two * lipschitz)) } else { f64::INFINITY };
        out.violations.push(Violation::StepSize { gamma: f(gamma), bound });
    }

    let slack = S::one() - two * gamma * lipschitz;
    if !(theta1 >= S::zero() && three * theta1 < slack) {
        out.violations.push(Violation::Theta1 { theta1: f(theta1), bound: f(slack / three) });
    }

    let lower = (three * theta1 - S::one() + two * gamma * lipschitz) / (three + lit::<S>(4.0) * theta1);
    if !(lower < theta2 && theta2 <= S::zero()) {
        out.violations.push(Violation::Theta2 { theta2: f(theta2), lower: f(lower) });
    }

    if S::one() + gamma * mu_f <= S::zero() {
        out.violations.push(Violation::ResolventRegion { gamma: f(gamma), mu_f: f(mu_f) });
    }

    if mu_f + mu_g < S::zero() {
        out.violations.push(Violation::ModulusSum { mu_f: f(mu_f), mu_g: f(mu_g) });
    }
    out
}
