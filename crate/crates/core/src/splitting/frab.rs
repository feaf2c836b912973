use crate::error::{check_dim, Error, Result};
use crate::hilbert::Vector;
use crate::operators::{ForwardOperator, ResolventOperator};
use crate::scalar::Scalar;

use super::params::{validate_params, FrabParams, UpdateForm};
use super::trace::{SolveTrace, Status};

/// Starting history `u_{-1}, u_0, u_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialPoints<S> {
    pub u_m1: Vector<S>,
    pub u_0: Vector<S>,
    pub u_1: Vector<S>,
}

impl<S: Scalar> InitialPoints<S> {
    pub fn new(u_m1: Vector<S>, u_0: Vector<S>, u_1: Vector<S>) -> Self {
        Self { u_m1, u_0, u_1 }
    }

    /// All three history points equal to `start`.
    pub fn constant(start: Vector<S>) -> Self {
        Self { u_m1: start.clone(), u_0: start.clone(), u_1: start }
    }

    pub(crate) fn check(&self, dim: usize) -> Result<()> {
        for p in [&self.u_m1, &self.u_0, &self.u_1] {
            check_dim(dim, p.dim())?;
        }
        Ok(())
    }
}

/// The three latest iterates with cached forward evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct IterState<S> {
    pub k: usize,
    pub u_km2: Vector<S>,
    pub u_km1: Vector<S>,
    pub u_k: Vector<S>,
    pub g_km1: Vector<S>,
    pub g_k: Vector<S>,
}

impl<S: Scalar> IterState<S> {
    /// State at `k = 1` from the starting history.
    pub fn new(g: &ForwardOperator<S>, init: &InitialPoints<S>) -> Result<Self> {
        init.check(g.dim())?;
        Ok(Self {
            k: 1,
            g_km1: g.apply(&init.u_0),
            g_k: g.apply(&init.u_1),
            u_km2: init.u_m1.clone(),
            u_km1: init.u_0.clone(),
            u_k: init.u_1.clone(),
        })
    }

    fn check(&self, dim: usize) -> Result<()> {
        for p in [&self.u_km2, &self.u_km1, &self.u_k, &self.g_km1, &self.g_k] {
            check_dim(dim, p.dim())?;
        }
        Ok(())
    }

    fn advance(self, u_next: Vector<S>, g_next: Vector<S>) -> Self {
        Self {
            k: self.k + 1,
            u_km2: self.u_km1,
            u_km1: self.u_k,
            u_k: u_next,
            g_km1: self.g_k,
            g_k: g_next,
        }
    }
}

/// `γ G u_k + γ(1-λ)(G u_k - G u_{k-1})`, shared with the reflected
/// baseline so both reduce to the same floating-point operations at `λ = 0`.
pub(crate) fn reflected_correction<S: Scalar>(gamma: S, lambda: S, g_k: &Vector<S>, g_km1: &Vector<S>) -> Vector<S> {
    let damp = gamma * (S::one() - lambda);
    g_k.zip_map(g_km1, |a, b| gamma * a + damp * (a - b))
}

/// Two-step inertial extrapolation `u_k ± θ1(u_k - u_{k-1}) + θ2(u_{k-1} - u_{k-2})`.
pub(crate) fn extrapolate<S: Scalar>(state: &IterState<S>, theta1: S, theta2: S, negate_theta1: bool) -> Vector<S> {
    let t1 = if negate_theta1 { -theta1 } else { theta1 };
    let s1 = state.u_k.zip_map(&state.u_km1, |a, b| a - b);
    let s2 = state.u_km1.zip_map(&state.u_km2, |a, b| a - b);
    let w = state.u_k.zip_map(&s1, |u, d| u + t1 * d);
    w.zip_map(&s2, |x, d| x + theta2 * d)
}

/// Fixed-point residual `|u - J_{γF}(u - γ G u)| / (1 + |u|)` given `G u`.
pub(crate) fn natural_residual<S: Scalar>(
    f: &ResolventOperator<S>,
    gamma: S,
    u: &Vector<S>,
    gu: &Vector<S>,
) -> Result<S> {
    let probe = Vector::lincomb(S::one(), u, -gamma, gu);
    let j = f.apply(gamma, &probe)?;
    Ok((u - &j).norm() / (S::one() + u.norm()))
}

/// One anchored step. With `w_k` the extrapolated point and `λ = λ_k`:
///
/// - proof form: `u_{k+1} = J(λ w* + (1-λ) w_k - γ G u_k - γ(1-λ)(G u_k - G u_{k-1}))`
/// - algorithm form: `u_{k+1} = J(λ w* + (1-λ)(w_k - γ G u_k - γ(1-λ)(G u_k - G u_{k-1})))`
///
/// The forms agree when `λ = 0`. Returns the shifted state.
pub fn frab_step<S: Scalar>(
    f: &ResolventOperator<S>,
    g: &ForwardOperator<S>,
    params: &FrabParams<S>,
    state: IterState<S>,
) -> Result<IterState<S>> {
    check_dim(f.dim(), g.dim())?;
    check_dim(f.dim(), params.anchor.dim())?;
    state.check(f.dim())?;
    f.check_gamma(params.gamma)?;
    let lambda = params.schedule.value(state.k);
    frab_step_unchecked(f, g, params, lambda, state)
}

/// [`frab_step`] with an explicit anchor weight `λ ∈ [0, 1)` in place of
/// the schedule value; `λ = 0` drops the anchor entirely.
pub fn frab_step_with_lambda<S: Scalar>(
    f: &ResolventOperator<S>,
    g: &ForwardOperator<S>,
    params: &FrabParams<S>,
    lambda: S,
    state: IterState<S>,
) -> Result<IterState<S>> {
    if !(lambda >= S::zero() && lambda < S::one()) {
        return Err(Error::ParameterRegion(format!("anchor weight must lie in [0, 1), got {lambda}")));
    }
    check_dim(f.dim(), g.dim())?;
    check_dim(f.dim(), params.anchor.dim())?;
    state.check(f.dim())?;
    f.check_gamma(params.gamma)?;
    frab_step_unchecked(f, g, params, lambda, state)
}

pub(crate) fn frab_step_unchecked<S: Scalar>(
    f: &ResolventOperator<S>,
    g: &ForwardOperator<S>,
    params: &FrabParams<S>,
    lambda: S,
    state: IterState<S>,
) -> Result<IterState<S>> {
    let gamma = params.gamma;
    let keep = S::one() - lambda;
    let w = extrapolate(&state, params.theta1, params.theta2, params.negate_theta1);
    let corr = reflected_correction(gamma, lambda, &state.g_k, &state.g_km1);
    let arg = match params.update_form {
        UpdateForm::ProofForm => {
            let z = params.anchor.zip_map(&w, |a, x| lambda * a + keep * x);
            z.zip_map(&corr, |a, c| a - c)
        }
        UpdateForm::AlgorithmForm => {
            let inner = w.zip_map(&corr, |x, c| x - c);
            params.anchor.zip_map(&inner, |a, x| lambda * a + keep * x)
        }
    };
    let u_next = f.apply(gamma, &arg)?;
    let g_next = g.apply(&u_next);
    Ok(state.advance(u_next, g_next))
}

/// Runs the anchored iteration from `init` until the fixed-point residual
/// drops to the tolerance or the iteration budget runs out.
///
/// Parameters are checked against the feasibility region for the declared
/// constants of `F` and `G` before the first step.
pub fn frab_solve<S: Scalar>(
    f: &ResolventOperator<S>,
    g: &ForwardOperator<S>,
    params: &FrabParams<S>,
    init: &InitialPoints<S>,
) -> Result<SolveTrace<S>> {
    check_dim(f.dim(), g.dim())?;
    check_dim(f.dim(), params.anchor.dim())?;
    validate_params(params.gamma, params.theta1, params.theta2, g.lipschitz(), f.modulus(), g.modulus())
        .into_result()?;
    params.schedule.validate()?;
    f.check_gamma(params.gamma)?;

    let mut state = IterState::new(g, init)?;
    let max_iter = params.stopping.max_iter;
    let mut trace = TraceBuilder::with_capacity(max_iter.min(1 << 20));
    let mut status = Status::MaxIter;

    for _ in 0..max_iter {
        let lambda = params.schedule.value(state.k);
        state = frab_step_unchecked(f, g, params, lambda, state)?;
        if !state.u_k.is_finite() || !state.g_k.is_finite() {
            return Err(Error::Divergence { iteration: state.k });
        }
        let r = natural_residual(f, params.gamma, &state.u_k, &state.g_k)?;
        trace.push(r, state.u_k.norm(), lambda);
        if params.stopping.tol.is_some_and(|tol| r <= tol) {
            status = Status::Converged;
            break;
        }
    }
    Ok(trace.finish(state.u_k, status))
}

pub(crate) struct TraceBuilder<S> {
    residuals: Vec<S>,
    norms: Vec<S>,
    lambdas: Vec<S>,
}

impl<S: Scalar> TraceBuilder<S> {
    pub(crate) fn with_capacity(n: usize) -> Self {
        Self { residuals: Vec::with_capacity(n), norms: Vec::with_capacity(n), lambdas: Vec::with_capacity(n) }
    }

    pub(crate) fn push(&mut self, residual: S, norm: S, lambda: S) {
        self.residuals.push(residual);
        self.norms.push(norm);
        self.lambdas.push(lambda);
    }

    pub(crate) fn finish(self, final_point: Vector<S>, status: Status) -> SolveTrace<S> {
        SolveTrace {
            iterations: self.residuals.len(),
            residuals: self.residuals,
            iterate_norms: self.norms,
            lambdas: self.lambdas,
            final_point,
            status,
        }
    }
}
