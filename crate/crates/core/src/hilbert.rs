//! Finite-dimensional Euclidean vectors and the norm identities the
//! convergence analysis of the splitting schemes leans on.

use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::scalar::{lit, Scalar};

/// A point of the Euclidean space `R^n`.
///
/// Values are immutable: every arithmetic operation returns a fresh vector.
/// Constructors reject non-finite entries; arithmetic does not re-check, so
/// solvers test [`Vector::is_finite`] on their iterates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<S>", into = "Vec<S>", bound = "S: Scalar")]
pub struct Vector<S> {
    coords: Vec<S>,
}

impl<S: Scalar> TryFrom<Vec<S>> for Vector<S> {
    type Error = Error;

    fn try_from(coords: Vec<S>) -> Result<Self> {
        Self::new(coords)
    }
}

impl<S: Scalar> From<Vector<S>> for Vec<S> {
    fn from(v: Vector<S>) -> Self {
        v.coords
    }
}

impl<S: Scalar> Vector<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { coords })
    }

    /// Builds a vector from `f64` values, converting into the working scalar.
    pub fn from_f64(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| lit(v)).collect())
    }

    /// Skips the finiteness check. Used for arithmetic results.
    pub(crate) fn from_raw(coords: Vec<S>) -> Self {
        Self { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_raw(vec![S::zero(); dim])
    }

    pub fn filled(dim: usize, value: S) -> Self {
        Self::from_raw(vec![value; dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.coords.iter()
    }

    pub fn to_vec(&self) -> Vec<S> {
        self.coords.clone()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    /// Euclidean inner product. Panics on dimension mismatch; use [`inner`]
    /// for the checked form.
    pub fn dot(&self, other: &Self) -> S {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot");
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(S::zero(), |acc, (&a, &b)| acc + a * b)
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    pub fn norm(&self) -> S {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> S {
        self.coords.iter().fold(S::zero(), |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: S) -> Self {
        self.map(|c| c * s)
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        Self::from_raw(self.coords.iter().map(|&c| f(c)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in zip_map");
        Self::from_raw(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// `a * x + b * y`
    pub fn lincomb(a: S, x: &Self, b: S, y: &Self) -> Self {
        x.zip_map(y, |xi, yi| a * xi + b * yi)
    }

    pub fn distance(&self, other: &Self) -> S {
        (self - other).norm()
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.coords[i]
    }
}

impl<'a, S: Scalar> Add<&'a Vector<S>> for &'a Vector<S> {
    type Output = Vector<S>;

    fn add(self, rhs: &'a Vector<S>) -> Vector<S> {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl<'a, S: Scalar> Sub<&'a Vector<S>> for &'a Vector<S> {
    type Output = Vector<S>;

    fn sub(self, rhs: &'a Vector<S>) -> Vector<S> {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl<S: Scalar> Add for Vector<S> {
    type Output = Vector<S>;

    fn add(self, rhs: Vector<S>) -> Vector<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for Vector<S> {
    type Output = Vector<S>;

    fn sub(self, rhs: Vector<S>) -> Vector<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul<S> for &Vector<S> {
    type Output = Vector<S>;

    fn mul(self, s: S) -> Vector<S> {
        self.scale(s)
    }
}

impl<S: Scalar> Mul<S> for Vector<S> {
    type Output = Vector<S>;

    fn mul(self, s: S) -> Vector<S> {
        self.scale(s)
    }
}

impl<S: Scalar> Neg for &Vector<S> {
    type Output = Vector<S>;

    fn neg(self) -> Vector<S> {
        self.map(|c| -c)
    }
}

/// Checked inner product `<x, y>`.
pub fn inner<S: Scalar>(x: &Vector<S>, y: &Vector<S>) -> Result<S> {
    check_dim(x.dim(), y.dim())?;
    Ok(x.dot(y))
}

/// Absolute gaps between the two sides of each norm identity, together with
/// the magnitude of the larger side (used for the relative check).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals<S> {
    /// `|(1+a)x - (a-b)y - bz|^2` expansion.
    pub residual_a: S,
    /// `<x - z, y - x>` polarization.
    pub residual_b: S,
    /// Convex-combination identity.
    pub residual_c: S,
    pub scale_a: S,
    pub scale_b: S,
    pub scale_c: S,
}

impl<S: Scalar> IdentityResiduals<S> {
    /// Largest residual after dividing by `1 + |larger side|`.
    pub fn max_relative(&self) -> S {
        let rel = |r: S, s: S| r / (S::one() + s);
        rel(self.residual_a, self.scale_a)
            .max(rel(self.residual_b, self.scale_b))
            .max(rel(self.residual_c, self.scale_c))
    }

    pub fn within(&self, tol: S) -> bool {
        self.max_relative() <= tol
    }
}

/// Evaluates both sides of the three norm identities
///
/// ```text
/// (a) |(1+a)x - (a-b)y - bz|^2 = (1+a)|x|^2 - (a-b)|y|^2 - b|z|^2
///         + (1+a)(a-b)|x-y|^2 + b(1+a)|x-z|^2 - b(a-b)|y-z|^2
/// (b) <x - z, y - x> = |z-y|^2/2 - |x-z|^2/2 - |y-x|^2/2
/// (c) |beta x + (1-beta) y|^2 = beta|x|^2 + (1-beta)|y|^2 - beta(1-beta)|x-y|^2
/// ```
///
/// and returns the absolute differences.
pub fn verify_norm_identities<S: Scalar>(
    x: &Vector<S>,
    y: &Vector<S>,
    z: &Vector<S>,
    a: S,
    b: S,
    beta: S,
) -> Result<IdentityResiduals<S>> {
    check_dim(x.dim(), y.dim())?;
    check_dim(x.dim(), z.dim())?;
    if !(a.is_finite() && b.is_finite() && beta.is_finite()) {
        return Err(Error::Contract("identity coefficients must be finite".into()));
    }
    let one = S::one();
    let half: S = lit(0.5);

    let (xx, yy, zz) = (x.norm_sq(), y.norm_sq(), z.norm_sq());
    let (xy, xz, yz) = ((x - y).norm_sq(), (x - z).norm_sq(), (y - z).norm_sq());

    let combo = x.zip_map(y, |xi, yi| (one + a) * xi - (a - b) * yi);
    let combo = combo.zip_map(z, |ci, zi| ci - b * zi);
    let lhs_a = combo.norm_sq();
    let rhs_a = (one + a) * xx - (a - b) * yy - b * zz + (one + a) * (a - b) * xy
        + b * (one + a) * xz
        - b * (a - b) * yz;

    let lhs_b = (x - z).dot(&(y - x));
    let rhs_b = half * (z - y).norm_sq() - half * xz - half * (y - x).norm_sq();

    let lhs_c = Vector::lincomb(beta, x, one - beta, y).norm_sq();
    let rhs_c = beta * xx + (one - beta) * yy - beta * (one - beta) * xy;

    let side = |l: S, r: S| l.abs().max(r.abs());
    Ok(IdentityResiduals {
        residual_a: (lhs_a - rhs_a).abs(),
        residual_b: (lhs_b - rhs_b).abs(),
        residual_c: (lhs_c - rhs_c).abs(),
        scale_a: side(lhs_a, rhs_a),
        scale_b: side(lhs_b, rhs_b),
        scale_c: side(lhs_c, rhs_c),
    })
}
