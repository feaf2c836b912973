//! Small dense matrices. Solves use Gaussian elimination in the working
//! scalar; spectral constants go through `nalgebra` in `f64`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::hilbert::Vector;
use crate::scalar::{lit, to_f64, Scalar};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<S>>", into = "Vec<Vec<S>>", bound = "S: Scalar")]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> TryFrom<Vec<Vec<S>>> for Matrix<S> {
    type Error = Error;

    fn try_from(rows: Vec<Vec<S>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl<S: Scalar> From<Matrix<S>> for Vec<Vec<S>> {
    fn from(m: Matrix<S>) -> Self {
        m.data.chunks(m.cols.max(1)).map(|r| r.to_vec()).collect()
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Construction("matrix must have at least one row".into()));
        }
        let m = rows[0].len();
        if m == 0 {
            return Err(Error::Construction("matrix must have at least one column".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != m) {
            return Err(Error::Construction(format!(
                "matrix row {bad} has length {} but row 0 has length {m}",
                rows[bad].len()
            )));
        }
        let data: Vec<S> = rows.into_iter().flatten().collect();
        if let Some(index) = data.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows: n, cols: m, data })
    }

    pub fn from_f64_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| lit(v)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![S::one(); n])
    }

    pub fn diagonal(diag: &[S]) -> Self {
        let n = diag.len();
        let mut data = vec![S::zero(); n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d;
        }
        Self { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dim(self.cols, other.rows)?;
        let mut data = vec![S::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    data[i * other.cols + j] = data[i * other.cols + j] + a * other.get(k, j);
                }
            }
        }
        Ok(Self { rows: self.rows, cols: other.cols, data })
    }

    /// `A x`. Panics on dimension mismatch.
    pub fn matvec(&self, x: &Vector<S>) -> Vector<S> {
        assert_eq!(self.cols, x.dim(), "dimension mismatch in matvec");
        Vector::from_raw(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(x.iter())
                        .fold(S::zero(), |acc, (&a, &b)| acc + a * b)
                })
                .collect(),
        )
    }

    /// `I + s A` for square `A`.
    pub fn shifted_identity(&self, s: S) -> Self {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = *v * s;
        }
        for i in 0..self.rows.min(self.cols) {
            out.data[i * self.cols + i] = out.data[i * self.cols + i] + S::one();
        }
        out
    }

    pub fn is_symmetric(&self, tol: S) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol)
            })
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| i == j || self.get(i, j) == S::zero()))
    }

    pub fn diag(&self) -> Vec<S> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// Solves `A u = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &Vector<S>) -> Result<Vector<S>> {
        if !self.is_square() {
            return Err(Error::Contract("solve requires a square matrix".into()));
        }
        check_dim(self.rows, rhs.dim())?;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut b = rhs.to_vec();
        let scale = a.iter().fold(S::zero(), |m, v| m.max(v.abs()));
        let tiny = scale * S::epsilon() * lit(n as f64);

        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[i * n + col]
                        .abs()
                        .partial_cmp(&a[j * n + col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if a[pivot * n + col].abs() <= tiny {
                return Err(Error::Singular);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                b.swap(col, pivot);
            }
            let p = a[col * n + col];
            for i in col + 1..n {
                let f = a[i * n + col] / p;
                if f == S::zero() {
                    continue;
                }
                for j in col..n {
                    a[i * n + j] = a[i * n + j] - f * a[col * n + j];
                }
                b[i] = b[i] - f * b[col];
            }
        }
        let mut u = vec![S::zero(); n];
        for i in (0..n).rev() {
            let s = (i + 1..n).fold(b[i], |acc, j| acc - a[i * n + j] * u[j]);
            u[i] = s / a[i * n + i];
        }
        Ok(Vector::from_raw(u))
    }

    fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(self.get(i, j)))
    }

    /// Smallest eigenvalue of the symmetric part `(A + A^T)/2`: the
    /// monotonicity modulus of `u -> A u`.
    pub fn sym_min_eigenvalue(&self) -> S {
        assert!(self.is_square(), "symmetric part needs a square matrix");
        let a = self.to_nalgebra();
        let sym = (&a + a.transpose()) * 0.5;
        let eig = sym.symmetric_eigenvalues();
        lit(eig.min())
    }

    /// Largest singular value: the Lipschitz constant of `u -> A u`.
    pub fn spectral_norm(&self) -> S {
        let sv = self.to_nalgebra().singular_values();
        lit(sv.max())
    }
}
