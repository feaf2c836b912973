//! The two operator roles of `0 ∈ F(u) + G(u)`.
//!
//! [`ForwardOperator`] is the single-valued `G`, evaluated directly.
//! [`ResolventOperator`] is the set-valued `F`, reached only through its
//! resolvent `J_{γF} = (Id + γF)^{-1}`. Both carry a declared monotonicity
//! modulus `μ` (`<x-y, u-v> >= μ |x-y|^2` on the graph), which may be
//! negative, and `G` additionally carries a Lipschitz constant.
//!
//! Catalog members are built from the serializable [`OperatorSpec`].

pub(crate) mod catalog;

use std::fmt;
use std::sync::Arc;

pub use catalog::{build_operator, BuiltOperator, OperatorSpec};

use crate::error::{check_dim, Error, Result};
use crate::hilbert::Vector;
use crate::linalg::Matrix;
use crate::scalar::{lit, Scalar};

type ForwardFn<S> = Arc<dyn Fn(&Vector<S>) -> Vector<S> + Send + Sync>;
type ResolventFn<S> = Arc<dyn Fn(S, &Vector<S>) -> Vector<S> + Send + Sync>;

#[derive(Clone)]
pub enum ForwardMap<S> {
    Zero,
    ScaledIdentity(S),
    /// Pairwise quarter turn `(x, y) -> (y, -x)` on consecutive coordinates.
    Rotation,
    Linear(Matrix<S>),
    Affine(Matrix<S>, Vector<S>),
    Sum(Box<ForwardOperator<S>>, Box<ForwardOperator<S>>),
    Custom(ForwardFn<S>),
}

impl<S: fmt::Debug> fmt::Debug for ForwardMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "Zero"),
            Self::ScaledIdentity(c) => write!(f, "ScaledIdentity({c:?})"),
            Self::Rotation => write!(f, "Rotation"),
            Self::Linear(a) => f.debug_tuple("Linear").field(a).finish(),
            Self::Affine(a, b) => f.debug_tuple("Affine").field(a).field(b).finish(),
            Self::Sum(a, b) => f.debug_tuple("Sum").field(a).field(b).finish(),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Single-valued, Lipschitz, `μ_G`-monotone map `G`.
#[derive(Debug, Clone)]
pub struct ForwardOperator<S> {
    map: ForwardMap<S>,
    lipschitz: S,
    modulus: S,
    dim: usize,
    label: String,
}

impl<S: Scalar> ForwardOperator<S> {
    pub fn zero(dim: usize) -> Self {
        Self::from_parts(ForwardMap::Zero, S::zero(), S::zero(), dim, "zero")
    }

    pub fn scaled_identity(dim: usize, scale: S) -> Self {
        Self::from_parts(ForwardMap::ScaledIdentity(scale), scale.abs(), scale, dim, "scaled_identity")
    }

    /// Skew quarter turn on `R^dim`; `dim` must be even.
    pub fn rotation(dim: usize) -> Result<Self> {
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::Construction(format!("rotation needs an even positive dimension, got {dim}")));
        }
        Ok(Self::from_parts(ForwardMap::Rotation, S::one(), S::zero(), dim, "rotation"))
    }

    /// `u -> A u` with `L = σ_max(A)` and `μ = λ_min((A + A^T)/2)`.
    pub fn linear(a: Matrix<S>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Construction("linear operator matrix must be square".into()));
        }
        let (l, mu, n) = (a.spectral_norm(), a.sym_min_eigenvalue(), a.rows());
        Ok(Self::from_parts(ForwardMap::Linear(a), l, mu, n, "linear"))
    }

    /// `u -> A u + b`.
    pub fn affine(a: Matrix<S>, b: Vector<S>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Construction("affine operator matrix must be square".into()));
        }
        if b.dim() != a.rows() {
            return Err(Error::Construction(format!(
                "affine offset has dimension {} but matrix is {}x{}",
                b.dim(),
                a.rows(),
                a.cols()
            )));
        }
        let (l, mu, n) = (a.spectral_norm(), a.sym_min_eigenvalue(), a.rows());
        Ok(Self::from_parts(ForwardMap::Affine(a, b), l, mu, n, "affine"))
    }

    /// `G1 + G2`, declared with `L1 + L2` and `μ1 + μ2`.
    pub fn sum(a: Self, b: Self) -> Result<Self> {
        check_dim(a.dim, b.dim)?;
        let label = format!("{}+{}", a.label, b.label);
        let (l, mu, n) = (a.lipschitz + b.lipschitz, a.modulus + b.modulus, a.dim);
        Ok(Self::from_parts(ForwardMap::Sum(Box::new(a), Box::new(b)), l, mu, n, &label))
    }

    /// User-supplied map with declared constants. The declarations are
    /// trusted; `diagnostics::estimate_moduli` can spot-check them.
    pub fn custom(
        dim: usize,
        lipschitz: S,
        modulus: S,
        label: &str,
        f: impl Fn(&Vector<S>) -> Vector<S> + Send + Sync + 'static,
    ) -> Self {
        Self::from_parts(ForwardMap::Custom(Arc::new(f)), lipschitz, modulus, dim, label)
    }

    fn from_parts(map: ForwardMap<S>, lipschitz: S, modulus: S, dim: usize, label: &str) -> Self {
        Self { map, lipschitz, modulus, dim, label: label.to_string() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Overrides the declared modulus, e.g. to clamp eigen-solver round-off
    /// on a known positive semidefinite matrix.
    pub(crate) fn with_modulus(mut self, modulus: S) -> Self {
        self.modulus = modulus;
        self
    }

    pub fn lipschitz(&self) -> S {
        self.lipschitz
    }

    pub fn modulus(&self) -> S {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn map(&self) -> &ForwardMap<S> {
        &self.map
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.map, ForwardMap::Zero)
    }

    /// Checked evaluation `G(x)`.
    pub fn eval(&self, x: &Vector<S>) -> Result<Vector<S>> {
        check_dim(self.dim, x.dim())?;
        Ok(self.apply(x))
    }

    /// Unchecked evaluation for solver inner loops.
    pub(crate) fn apply(&self, x: &Vector<S>) -> Vector<S> {
        match &self.map {
            ForwardMap::Zero => Vector::zeros(x.dim()),
            ForwardMap::ScaledIdentity(c) => x.scale(*c),
            ForwardMap::Rotation => {
                let s = x.as_slice();
                let mut out = vec![S::zero(); s.len()];
                for (o, p) in out.chunks_mut(2).zip(s.chunks(2)) {
                    o[0] = p[1];
                    o[1] = -p[0];
                }
                Vector::from_raw(out)
            }
            ForwardMap::Linear(a) => a.matvec(x),
            ForwardMap::Affine(a, b) => &a.matvec(x) + b,
            ForwardMap::Sum(a, b) => &a.apply(x) + &b.apply(x),
            ForwardMap::Custom(f) => f(x),
        }
    }
}

/// Free-function form of [`ForwardOperator::eval`].
pub fn forward_eval<S: Scalar>(g: &ForwardOperator<S>, x: &Vector<S>) -> Result<Vector<S>> {
    g.eval(x)
}

#[derive(Clone)]
pub enum ResolventKind<S> {
    /// `F = 0`, so `J = Id`.
    Zero,
    ScaledIdentity(S),
    Linear(Matrix<S>),
    /// `F(u) = A u + b`.
    Affine(Matrix<S>, Vector<S>),
    /// Normal cone of a box; bounds may be infinite.
    NormalConeBox { lower: Vec<S>, upper: Vec<S> },
    NormalConeBall { center: Vector<S>, radius: S },
    /// Normal cone of `{u : <normal, u> <= offset}`.
    NormalConeHalfspace { normal: Vector<S>, offset: S },
    /// Subdifferential of `tau * |u|_1`.
    SubdiffL1 { tau: S },
    /// Gradient of `u^T Q u / 2 + <q, u>` with symmetric `Q`.
    SubdiffQuadratic { q: Matrix<S>, linear: Vector<S> },
    /// `F' + mu Id` for a monotone `F'`.
    Shifted { inner: Box<ResolventOperator<S>>, mu: S },
    Custom(ResolventFn<S>),
}

impl<S: fmt::Debug> fmt::Debug for ResolventKind<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "Zero"),
            Self::ScaledIdentity(c) => write!(f, "ScaledIdentity({c:?})"),
            Self::Linear(a) => f.debug_tuple("Linear").field(a).finish(),
            Self::Affine(a, b) => f.debug_tuple("Affine").field(a).field(b).finish(),
            Self::NormalConeBox { lower, upper } => {
                f.debug_struct("NormalConeBox").field("lower", lower).field("upper", upper).finish()
            }
            Self::NormalConeBall { center, radius } => {
                f.debug_struct("NormalConeBall").field("center", center).field("radius", radius).finish()
            }
            Self::NormalConeHalfspace { normal, offset } => f
                .debug_struct("NormalConeHalfspace")
                .field("normal", normal)
                .field("offset", offset)
                .finish(),
            Self::SubdiffL1 { tau } => f.debug_struct("SubdiffL1").field("tau", tau).finish(),
            Self::SubdiffQuadratic { q, linear } => {
                f.debug_struct("SubdiffQuadratic").field("q", q).field("linear", linear).finish()
            }
            Self::Shifted { inner, mu } => {
                f.debug_struct("Shifted").field("inner", inner).field("mu", mu).finish()
            }
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Set-valued `μ_F`-monotone operator `F`, presented through `J_{γF}`.
#[derive(Debug, Clone)]
pub struct ResolventOperator<S> {
    kind: ResolventKind<S>,
    modulus: S,
    dim: usize,
    label: String,
}

impl<S: Scalar> ResolventOperator<S> {
    pub fn zero(dim: usize) -> Self {
        Self::from_parts(ResolventKind::Zero, S::zero(), dim, "zero")
    }

    pub fn scaled_identity(dim: usize, scale: S) -> Self {
        Self::from_parts(ResolventKind::ScaledIdentity(scale), scale, dim, "scaled_identity")
    }

    pub fn linear(a: Matrix<S>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Construction("linear operator matrix must be square".into()));
        }
        let (mu, n) = (a.sym_min_eigenvalue(), a.rows());
        Ok(Self::from_parts(ResolventKind::Linear(a), mu, n, "linear"))
    }

    pub fn affine(a: Matrix<S>, b: Vector<S>) -> Result<Self> {
        if !a.is_square() || b.dim() != a.rows() {
            return Err(Error::Construction("affine operator needs a square matrix matching its offset".into()));
        }
        let (mu, n) = (a.sym_min_eigenvalue(), a.rows());
        Ok(Self::from_parts(ResolventKind::Affine(a, b), mu, n, "affine"))
    }

    /// `N_K` for `K = [lower, upper]`; infinite bounds allowed.
    pub fn normal_cone_box(lower: Vec<S>, upper: Vec<S>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::Construction(format!(
                "box bounds must be nonempty and of equal length (lower {}, upper {})",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if l.is_nan() || u.is_nan() || *l == S::infinity() || *u == S::neg_infinity() {
                return Err(Error::Construction(format!("box bound {i} is not a valid real bound")));
            }
            if l > u {
                return Err(Error::Construction(format!(
                    "box requires lower <= upper componentwise; violated at index {i} ({l} > {u})"
                )));
            }
        }
        let n = lower.len();
        Ok(Self::from_parts(ResolventKind::NormalConeBox { lower, upper }, S::zero(), n, "normal_cone_box"))
    }

    pub fn normal_cone_ball(center: Vector<S>, radius: S) -> Result<Self> {
        if !(radius > S::zero() && radius.is_finite()) {
            return Err(Error::Construction(format!("ball requires radius > 0, got {radius}")));
        }
        let n = center.dim();
        Ok(Self::from_parts(ResolventKind::NormalConeBall { center, radius }, S::zero(), n, "normal_cone_ball"))
    }

    pub fn normal_cone_halfspace(normal: Vector<S>, offset: S) -> Result<Self> {
        if normal.norm_sq() == S::zero() {
            return Err(Error::Construction("halfspace requires a nonzero normal vector".into()));
        }
        if !offset.is_finite() {
            return Err(Error::Construction("halfspace offset must be finite".into()));
        }
        let n = normal.dim();
        Ok(Self::from_parts(
            ResolventKind::NormalConeHalfspace { normal, offset },
            S::zero(),
            n,
            "normal_cone_halfspace",
        ))
    }

    pub fn subdiff_l1(dim: usize, tau: S) -> Result<Self> {
        if !(tau >= S::zero() && tau.is_finite()) {
            return Err(Error::Construction(format!("l1 weight requires tau >= 0, got {tau}")));
        }
        Ok(Self::from_parts(ResolventKind::SubdiffL1 { tau }, S::zero(), dim, "subdiff_l1"))
    }

    /// `∂f` for `f(u) = u^T Q u / 2 + <q, u>`; `μ_F = λ_min(Q)` may be
    /// negative (weakly convex `f`).
    pub fn subdiff_quadratic(q: Matrix<S>, linear: Vector<S>) -> Result<Self> {
        if !q.is_symmetric(lit(1e-12)) {
            return Err(Error::Construction("quadratic form matrix must be symmetric".into()));
        }
        if linear.dim() != q.rows() {
            return Err(Error::Construction("quadratic linear term dimension must match the matrix".into()));
        }
        let (mu, n) = (q.sym_min_eigenvalue(), q.rows());
        Ok(Self::from_parts(ResolventKind::SubdiffQuadratic { q, linear }, mu, n, "subdiff_quadratic"))
    }

    /// `F = F' + mu Id` for a monotone `F'` (declared modulus `>= 0`); the
    /// result has modulus `μ_{F'} + mu`.
    pub fn shifted(inner: Self, mu: S) -> Result<Self> {
        if !is_monotone_modulus(inner.modulus) {
            return Err(Error::Construction(format!(
                "shifted operator needs a monotone inner operator (modulus >= 0), got {}",
                inner.modulus
            )));
        }
        if !mu.is_finite() {
            return Err(Error::Construction("shift modulus must be finite".into()));
        }
        let (n, label, total) = (inner.dim, format!("shifted({})", inner.label), inner.modulus + mu);
        Ok(Self::from_parts(ResolventKind::Shifted { inner: Box::new(inner), mu }, total, n, &label))
    }

    /// Resolvent supplied as a closure `(γ, x) -> J_{γF}(x)`.
    pub fn custom(
        dim: usize,
        modulus: S,
        label: &str,
        f: impl Fn(S, &Vector<S>) -> Vector<S> + Send + Sync + 'static,
    ) -> Self {
        Self::from_parts(ResolventKind::Custom(Arc::new(f)), modulus, dim, label)
    }

    fn from_parts(kind: ResolventKind<S>, modulus: S, dim: usize, label: &str) -> Self {
        Self { kind, modulus, dim, label: label.to_string() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn modulus(&self) -> S {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &ResolventKind<S> {
        &self.kind
    }

    pub fn is_normal_cone(&self) -> bool {
        matches!(
            self.kind,
            ResolventKind::NormalConeBox { .. }
                | ResolventKind::NormalConeBall { .. }
                | ResolventKind::NormalConeHalfspace { .. }
        )
    }

    /// Checks `γ > 0` and `1 + γ μ_F > 0`.
    pub fn check_gamma(&self, gamma: S) -> Result<()> {
        if !(gamma > S::zero() && gamma.is_finite()) {
            return Err(Error::ParameterRegion(format!("resolvent step must satisfy γ > 0, got {gamma}")));
        }
        let margin = S::one() + gamma * self.modulus;
        if margin <= S::zero() {
            return Err(Error::ParameterRegion(format!(
                "resolvent undefined: 1 + γ·μ_F = {margin} <= 0 (γ = {gamma}, μ_F = {})",
                self.modulus
            )));
        }
        Ok(())
    }

    /// `J_{γF}(x)`: the unique `u` with `x ∈ u + γ F(u)`.
    pub fn resolve(&self, gamma: S, x: &Vector<S>) -> Result<Vector<S>> {
        self.check_gamma(gamma)?;
        check_dim(self.dim, x.dim())?;
        self.apply(gamma, x)
    }

    /// Resolvent without the region and dimension checks; the solvers
    /// validate once up front.
    pub(crate) fn apply(&self, gamma: S, x: &Vector<S>) -> Result<Vector<S>> {
        let one = S::one();
        Ok(match &self.kind {
            ResolventKind::Zero => x.clone(),
            ResolventKind::ScaledIdentity(c) => x.scale(one / (one + gamma * *c)),
            ResolventKind::Linear(a) => a.shifted_identity(gamma).solve(x)?,
            ResolventKind::Affine(a, b) | ResolventKind::SubdiffQuadratic { q: a, linear: b } => {
                a.shifted_identity(gamma).solve(&Vector::lincomb(one, x, -gamma, b))?
            }
            ResolventKind::NormalConeBox { lower, upper } => Vector::from_raw(
                x.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(&xi, (&l, &u))| xi.max(l).min(u))
                    .collect(),
            ),
            ResolventKind::NormalConeBall { center, radius } => {
                let d = x - center;
                let n = d.norm();
                if n <= *radius {
                    x.clone()
                } else {
                    &d.scale(*radius / n) + center
                }
            }
            ResolventKind::NormalConeHalfspace { normal, offset } => {
                let excess = normal.dot(x) - *offset;
                if excess <= S::zero() {
                    x.clone()
                } else {
                    Vector::lincomb(one, x, -excess / normal.norm_sq(), normal)
                }
            }
            ResolventKind::SubdiffL1 { tau } => soft_threshold(x, gamma * *tau),
            ResolventKind::Shifted { inner, mu } => shifted_apply(inner, *mu, gamma, x)?,
            ResolventKind::Custom(f) => f(gamma, x),
        })
    }

    /// Distance from `v` to `F(u)` for catalog kinds with an explicit
    /// graph; `None` for custom operators. Returns infinity when
    /// `u ∉ dom F`. Boundary detection uses a relative tolerance of 1e-12.
    pub fn membership_residual(&self, u: &Vector<S>, v: &Vector<S>) -> Option<S> {
        if u.dim() != self.dim || v.dim() != self.dim {
            return None;
        }
        let tol = |s: S| lit::<S>(1e-12) * (S::one() + s.abs());
        Some(match &self.kind {
            ResolventKind::Zero => v.norm(),
            ResolventKind::ScaledIdentity(c) => (v - &u.scale(*c)).norm(),
            ResolventKind::Linear(a) => (v - &a.matvec(u)).norm(),
            ResolventKind::Affine(a, b) | ResolventKind::SubdiffQuadratic { q: a, linear: b } => {
                (v - &(&a.matvec(u) + b)).norm()
            }
            ResolventKind::NormalConeBox { lower, upper } => {
                let mut acc = S::zero();
                for ((&ui, &vi), (&l, &h)) in u.iter().zip(v.iter()).zip(lower.iter().zip(upper)) {
                    let at_low = l.is_finite() && (ui - l).abs() <= tol(l);
                    let at_high = h.is_finite() && (ui - h).abs() <= tol(h);
                    if ui < l - tol(l) || ui > h + tol(h) {
                        return Some(S::infinity());
                    }
                    let d = match (at_low, at_high) {
                        (true, true) => S::zero(),
                        (true, false) => vi.max(S::zero()),
                        (false, true) => (-vi).max(S::zero()),
                        (false, false) => vi.abs(),
                    };
                    acc = acc + d * d;
                }
                acc.sqrt()
            }
            ResolventKind::NormalConeBall { center, radius } => {
                let d = u - center;
                let n = d.norm();
                if n > *radius + tol(*radius) {
                    return Some(S::infinity());
                }
                if n < *radius - tol(*radius) {
                    v.norm()
                } else {
                    distance_to_ray(v, &d)
                }
            }
            ResolventKind::NormalConeHalfspace { normal, offset } => {
                let s = normal.dot(u) - *offset;
                if s > tol(*offset) {
                    return Some(S::infinity());
                }
                if s < -tol(*offset) {
                    v.norm()
                } else {
                    distance_to_ray(v, normal)
                }
            }
            ResolventKind::SubdiffL1 { tau } => {
                let mut acc = S::zero();
                for (&ui, &vi) in u.iter().zip(v.iter()) {
                    let d = if ui == S::zero() {
                        (vi.abs() - *tau).max(S::zero())
                    } else {
                        (vi - *tau * ui.signum()).abs()
                    };
                    acc = acc + d * d;
                }
                acc.sqrt()
            }
            ResolventKind::Shifted { inner, mu } => {
                return inner.membership_residual(u, &Vector::lincomb(S::one(), v, -*mu, u));
            }
            ResolventKind::Custom(_) => return None,
        })
    }

    /// The single-valued forward form of `F` when its graph is a map
    /// (linear, affine, quadratic and shifts of those).
    pub fn as_forward(&self) -> Option<ForwardOperator<S>> {
        let op = match &self.kind {
            ResolventKind::Zero => ForwardOperator::zero(self.dim),
            ResolventKind::ScaledIdentity(c) => ForwardOperator::scaled_identity(self.dim, *c),
            ResolventKind::Linear(a) => ForwardOperator::linear(a.clone()).ok()?,
            ResolventKind::Affine(a, b) | ResolventKind::SubdiffQuadratic { q: a, linear: b } => {
                ForwardOperator::affine(a.clone(), b.clone()).ok()?
            }
            ResolventKind::Shifted { inner, mu } => ForwardOperator::sum(
                inner.as_forward()?,
                ForwardOperator::scaled_identity(self.dim, *mu),
            )
            .ok()?,
            _ => return None,
        };
        Some(op.with_label(self.label.clone()))
    }
}

/// Free-function form of [`ResolventOperator::resolve`].
pub fn resolve<S: Scalar>(f: &ResolventOperator<S>, gamma: S, x: &Vector<S>) -> Result<Vector<S>> {
    f.resolve(gamma, x)
}

/// `J_{γF}(x)` for `F = F' + mu Id` through the resolvent of the monotone
/// part: `J_{γ'F'}(x / (1 + γ mu))` with `γ' = γ / (1 + γ mu)`.
pub fn resolve_shifted<S: Scalar>(
    fprime: &ResolventOperator<S>,
    mu: S,
    gamma: S,
    x: &Vector<S>,
) -> Result<Vector<S>> {
    if !is_monotone_modulus(fprime.modulus) {
        return Err(Error::Contract(format!(
            "resolve_shifted expects a monotone operator (declared modulus >= 0), got {}",
            fprime.modulus
        )));
    }
    if !(gamma > S::zero()) {
        return Err(Error::ParameterRegion(format!("resolvent step must satisfy γ > 0, got {gamma}")));
    }
    if S::one() + gamma * mu <= S::zero() {
        return Err(Error::ParameterRegion(format!(
            "resolvent undefined: 1 + γ·μ = {} <= 0",
            S::one() + gamma * mu
        )));
    }
    check_dim(fprime.dim, x.dim())?;
    shifted_apply(fprime, mu, gamma, x)
}

/// Declared modulus counts as nonnegative up to eigen-solver round-off.
fn is_monotone_modulus<S: Scalar>(mu: S) -> bool {
    mu >= -lit::<S>(1e-12)
}

fn shifted_apply<S: Scalar>(
    inner: &ResolventOperator<S>,
    mu: S,
    gamma: S,
    x: &Vector<S>,
) -> Result<Vector<S>> {
    let denom = S::one() + gamma * mu;
    inner.apply(gamma / denom, &x.scale(S::one() / denom))
}

/// Componentwise soft threshold `sign(x) max(|x| - t, 0)`.
pub fn soft_threshold<S: Scalar>(x: &Vector<S>, t: S) -> Vector<S> {
    x.map(|xi| {
        if xi > t {
            xi - t
        } else if xi < -t {
            xi + t
        } else {
            S::zero()
        }
    })
}

/// Distance from `v` to the ray `{t d : t >= 0}`.
fn distance_to_ray<S: Scalar>(v: &Vector<S>, d: &Vector<S>) -> S {
    let dd = d.norm_sq();
    if dd == S::zero() {
        return v.norm();
    }
    let t = (v.dot(d) / dd).max(S::zero());
    (v - &d.scale(t)).norm()
}
