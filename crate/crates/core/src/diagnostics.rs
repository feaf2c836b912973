//! Empirical checks of declared operator constants and summaries of
//! solver traces.
//!
//! Sampling cannot certify maximality of a sum `F + G`; the sum-rule check
//! here only confirms that sampled monotonicity quotients of `F + G` never
//! fall below `μ_F + μ_G` for single-valued pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::operators::{ForwardOperator, ResolventOperator};
use crate::problems::InclusionProblem;
use crate::scalar::{lit, Scalar};
use crate::splitting::{fixed_point_residual_of, SolveTrace};

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_RADIUS: f64 = 10.0;
const MAX_REDRAWS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusEstimate<S> {
    /// `min <x-y, Gx-Gy> / |x-y|^2` over the samples.
    pub mu_hat: S,
    /// `max |Gx-Gy| / |x-y|` over the samples.
    pub l_hat: S,
    pub samples: usize,
}

/// Samples `n_samples` pairs uniformly from `[-radius, radius]^d` and
/// returns the extreme monotonicity and Lipschitz quotients of `g`.
/// Identical seeds give identical estimates.
pub fn estimate_moduli<S: Scalar>(
    g: &ForwardOperator<S>,
    n_samples: usize,
    radius: S,
    seed: u64,
) -> Result<ModulusEstimate<S>> {
    if !(radius > S::zero() && radius.is_finite()) {
        return Err(Error::Contract(format!("sampling radius must be positive, got {radius}")));
    }
    let r = radius.to_f64().unwrap_or(f64::NAN);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = g.dim();
    estimate_with(g, n_samples, || {
        Vector::new((0..dim).map(|_| lit(rng.gen_range(-r..=r))).collect()).expect("finite draw")
    })
}

fn estimate_with<S: Scalar>(
    g: &ForwardOperator<S>,
    n_samples: usize,
    mut draw: impl FnMut() -> Vector<S>,
) -> Result<ModulusEstimate<S>> {
    if n_samples < 2 {
        return Err(Error::Contract(format!("need at least 2 samples, got {n_samples}")));
    }
    let mut mu_hat = S::infinity();
    let mut l_hat = S::zero();
    for _ in 0..n_samples {
        let x = draw();
        let mut y = draw();
        let mut redraws = 0;
        while x == y {
            if redraws == MAX_REDRAWS {
                return Err(Error::Sampling(format!("drew x = y {MAX_REDRAWS} times in a row")));
            }
            y = draw();
            redraws += 1;
        }
        let dx = &x - &y;
        let dg = &g.eval(&x)? - &g.eval(&y)?;
        let nsq = dx.norm_sq();
        mu_hat = mu_hat.min(dx.dot(&dg) / nsq);
        l_hat = l_hat.max(dg.norm() / nsq.sqrt());
    }
    Ok(ModulusEstimate { mu_hat, l_hat, samples: n_samples })
}

/// Sampled check that `F + G` is at least `(μ_F + μ_G)`-monotone, for `F`
/// with an explicit single-valued graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRuleCheck<S> {
    pub mu_hat: S,
    pub declared: S,
    pub holds: bool,
}

pub fn check_sum_rule<S: Scalar>(
    f: &ResolventOperator<S>,
    g: &ForwardOperator<S>,
    n_samples: usize,
    radius: S,
    seed: u64,
) -> Result<SumRuleCheck<S>> {
    let f_fwd = f
        .as_forward()
        .ok_or_else(|| Error::Unsupported(format!("{} has no single-valued graph to sample", f.label())))?;
    let declared = f.modulus() + g.modulus();
    let est = estimate_moduli(&ForwardOperator::sum(f_fwd, g.clone())?, n_samples, radius, seed)?;
    Ok(SumRuleCheck { mu_hat: est.mu_hat, declared, holds: est.mu_hat >= declared - lit::<S>(1e-9) })
}

/// `|u - J_{γF}(u - γ G u)| / (1 + |u|)`.
pub fn fixed_point_residual<S: Scalar>(problem: &InclusionProblem<S>, u: &Vector<S>, gamma: S) -> Result<S> {
    fixed_point_residual_of(problem.f(), problem.g(), u, gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub final_residual: f64,
    pub iterations: usize,
    /// Median of `r_{k+1} / r_k` over the last quarter of the ratios;
    /// 0 when that tail has no nonzero denominator.
    pub rate: f64,
}

pub fn trace_stats<S: Scalar>(trace: &SolveTrace<S>) -> Result<TraceSummary> {
    let r: Vec<f64> = trace.residuals.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let Some(&last) = r.last() else {
        return Err(Error::Contract("trace_stats needs a nonempty trace".into()));
    };
    Ok(TraceSummary { final_residual: last, iterations: trace.iterations, rate: empirical_rate(&r) })
}

/// Rate estimate on a bare residual sequence.
pub fn empirical_rate(residuals: &[f64]) -> f64 {
    let n_ratios = residuals.len().saturating_sub(1);
    if n_ratios == 0 {
        return 0.0;
    }
    let tail = (n_ratios / 4).max(1);
    let mut ratios: Vec<f64> = residuals[residuals.len() - tail - 1..]
        .windows(2)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .collect();
    if ratios.is_empty() {
        return 0.0;
    }
    ratios.sort_by(f64::total_cmp);
    let mid = ratios.len() / 2;
    if ratios.len() % 2 == 1 {
        ratios[mid]
    } else {
        0.5 * (ratios[mid - 1] + ratios[mid])
    }
}
