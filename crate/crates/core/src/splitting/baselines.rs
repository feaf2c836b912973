//! Classical splitting schemes kept for comparison with the anchored
//! iteration. All share its fixed-point residual and stopping rule.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::hilbert::Vector;
use crate::operators::{ForwardOperator, ResolventOperator};
use crate::scalar::{lit, Scalar};

use super::frab::{natural_residual, reflected_correction, InitialPoints, IterState, TraceBuilder};
use super::params::{default_gamma, LambdaSchedule, StoppingRule, Validation, Violation};
use super::trace::{SolveTrace, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineMethod {
    /// `u+ = J(u - γ G u)`
    ForwardBackward,
    /// `v = J(u - γ G u)`, `u+ = v - γ G v + γ G u`
    Tseng,
    /// Forward-reflected-backward: `u+ = J(u - 2γ G u + γ G u_prev)`
    Frb,
    /// `t = u + θ(u - u_prev)`, `v = J(t - γ G t)`, `w = v - γ G v + γ G t`,
    /// `u+ = α f(u) + (1-α) w` with `f(u) = κ u + (1-κ) w*`
    InertialViscosityFbf,
}

impl BaselineMethod {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ForwardBackward => "forward_backward",
            Self::Tseng => "tseng",
            Self::Frb => "frb",
            Self::InertialViscosityFbf => "inertial_viscosity_fbf",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineParams<S> {
    pub gamma: S,
    /// One-step inertia for the viscosity scheme.
    pub theta: S,
    /// Contraction factor of the viscosity map.
    pub kappa: S,
    /// Fixed point of the viscosity map.
    pub anchor: Vector<S>,
    /// Viscosity weights `α_k`.
    pub schedule: LambdaSchedule<S>,
    pub stopping: StoppingRule<S>,
}

impl<S: Scalar> BaselineParams<S> {
    /// `γ = 0.9/(2L)`, `θ = 0.1`, `κ = 0.5`, harmonic weights.
    pub fn defaults(lipschitz: S, anchor: Vector<S>) -> Self {
        Self {
            gamma: default_gamma(lipschitz),
            theta: lit(0.1),
            kappa: lit(0.5),
            anchor,
            schedule: LambdaSchedule::Harmonic,
            stopping: StoppingRule::default(),
        }
    }

    pub fn with_gamma(mut self, gamma: S) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_stopping(mut self, stopping: StoppingRule<S>) -> Self {
        self.stopping = stopping;
        self
    }
}

/// Step-size conditions of each baseline, plus `1 + γ μ_F > 0` so the
/// resolvent is defined.
pub fn validate_baseline<S: Scalar>(
    method: BaselineMethod,
    params: &BaselineParams<S>,
    lipschitz: S,
    mu_f: S,
) -> Validation {
    let f = |x: S| x.to_f64().unwrap_or(f64::NAN);
    let mut out = Validation::default();
    let gamma = params.gamma;
    if !gamma.is_finite() || !lipschitz.is_finite() {
        out.violations.push(Violation::Other("step size and L must be finite".into()));
        return out;
    }
    if gamma <= S::zero() {
        out.violations.push(Violation::NonPositiveStep { gamma: f(gamma) });
    }
    match method {
        BaselineMethod::ForwardBackward => {}
        BaselineMethod::Frb => {
            if lipschitz > S::zero() && lit::<S>(2.0) * gamma * lipschitz >= S::one() {
                out.violations.push(Violation::StepSize {
                    gamma: f(gamma),
                    bound: f(S::one() / (lit::<S>(2.0) * lipschitz)),
                });
            }
        }
        BaselineMethod::Tseng | BaselineMethod::InertialViscosityFbf => {
            if gamma * lipschitz >= S::one() {
                out.violations.push(Violation::TsengStep { gamma: f(gamma), lipschitz: f(lipschitz) });
            }
        }
    }
    if method == BaselineMethod::InertialViscosityFbf {
        if !(params.kappa >= S::zero() && params.kappa < S::one()) {
            out.violations.push(Violation::Other(format!(
                "viscosity contraction: κ ∈ [0, 1) violated: κ = {}",
                params.kappa
            )));
        }
        if !(params.theta >= S::zero() && params.theta < S::one()) {
            out.violations.push(Violation::Other(format!(
                "viscosity inertia: θ ∈ [0, 1) violated: θ = {}",
                params.theta
            )));
        }
    }
    if S::one() + gamma * mu_f <= S::zero() {
        out.violations.push(Violation::ResolventRegion { gamma: f(gamma), mu_f: f(mu_f) });
    }
    out
}

/// One forward-reflected-backward step on the shared state layout.
pub fn frb_step<S: Scalar>(
    f: &ResolventOperator<S>,
    g: &ForwardOperator<S>,
    gamma: S,
    state: IterState<S>,
) -> Result<IterState<S>> {
    check_dim(f.dim(), g.dim())?;
    f.check_gamma(gamma)?;
    let corr = reflected_correction(gamma, S::zero(), &state.g_k, &state.g_km1);
    let arg = state.u_k.zip_map(&corr, |u, c| u - c);
    let u_next = f.apply(gamma, &arg)?;
    let g_next = g.apply(&u_next);
    Ok(IterState {
        k: state.k + 1,
        u_km2: state.u_km1,
        u_km1: state.u_k,
        u_k: u_next,
        g_km1: state.g_k,
        g_k: g_next,
    })
}

/// Runs a baseline scheme from `init` (methods with one-point memory use
/// `u_0, u_1`; the rest start at `u_1`).
pub fn baseline_solve<S: Scalar>(
    method: BaselineMethod,
    f: &ResolventOperator<S>,
    g: &ForwardOperator<S>,
    params: &BaselineParams<S>,
    init: &InitialPoints<S>,
) -> Result<SolveTrace<S>> {
    check_dim(f.dim(), g.dim())?;
    check_dim(f.dim(), params.anchor.dim())?;
    init.check(f.dim())?;
    validate_baseline(method, params, g.lipschitz(), f.modulus()).into_result()?;
    params.schedule.validate()?;

    let gamma = params.gamma;
    let one = S::one();
    let mut u_prev = init.u_0.clone();
    let mut u = init.u_1.clone();
    let mut g_prev = g.apply(&u_prev);
    let mut g_u = g.apply(&u);

    let max_iter = params.stopping.max_iter;
    let mut trace = TraceBuilder::with_capacity(max_iter.min(1 << 20));
    let mut status = Status::MaxIter;

    for k in 1..=max_iter {
        let mut weight = S::zero();
        let u_next = match method {
            BaselineMethod::ForwardBackward => f.apply(gamma, &Vector::lincomb(one, &u, -gamma, &g_u))?,
            BaselineMethod::Tseng => {
                let v = f.apply(gamma, &Vector::lincomb(one, &u, -gamma, &g_u))?;
                let g_v = g.apply(&v);
                let step = v.zip_map(&g_v, |a, b| a - gamma * b);
                step.zip_map(&g_u, |a, b| a + gamma * b)
            }
            BaselineMethod::Frb => {
                let corr = reflected_correction(gamma, S::zero(), &g_u, &g_prev);
                f.apply(gamma, &u.zip_map(&corr, |a, c| a - c))?
            }
            BaselineMethod::InertialViscosityFbf => {
                let alpha = params.schedule.value(k);
                weight = alpha;
                let t = u.zip_map(&u_prev, |a, b| a + params.theta * (a - b));
                let g_t = g.apply(&t);
                let v = f.apply(gamma, &Vector::lincomb(one, &t, -gamma, &g_t))?;
                let g_v = g.apply(&v);
                let w = v.zip_map(&g_v, |a, b| a - gamma * b).zip_map(&g_t, |a, b| a + gamma * b);
                let contraction = Vector::lincomb(params.kappa, &u, one - params.kappa, &params.anchor);
                Vector::lincomb(alpha, &contraction, one - alpha, &w)
            }
        };
        let g_next = g.apply(&u_next);
        if !u_next.is_finite() || !g_next.is_finite() {
            return Err(Error::Divergence { iteration: k + 1 });
        }
        u_prev = std::mem::replace(&mut u, u_next);
        g_prev = std::mem::replace(&mut g_u, g_next);

        let r = natural_residual(f, gamma, &u, &g_u)?;
        trace.push(r, u.norm(), weight);
        if params.stopping.tol.is_some_and(|tol| r <= tol) {
            status = Status::Converged;
            break;
        }
    }
    Ok(trace.finish(u, status))
}
