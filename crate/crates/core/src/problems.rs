//! Inclusion problems with known constants and, where a closed form
//! exists, a solution oracle `w -> P_{zer(F+G)}(w)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::hilbert::Vector;
use crate::linalg::Matrix;
use crate::operators::catalog::{lower_bounds, upper_bounds};
use crate::operators::{soft_threshold, ForwardOperator, OperatorSpec, ResolventOperator};
use crate::scalar::{lit, Scalar};
use crate::splitting::default_gamma;

/// Largest matrix dimension the catalog builds.
pub const MAX_DIM: usize = 1000;

/// Box `{l <= u <= h}`; `null` bounds in JSON are infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct BoxSet<S> {
    #[serde(with = "lower_bounds")]
    pub lower: Vec<S>,
    #[serde(with = "upper_bounds")]
    pub upper: Vec<S>,
}

/// Tagged problem descriptor, e.g.
///
/// ```json
/// {"kind": "vi_affine", "matrix": [[1, 0], [0, 2]], "offset": [-1, -4]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "S: Scalar")]
pub enum ProblemSpec<S> {
    /// `min τ|u|_1 + ½|A u - b|^2`: `F = τ ∂|·|_1`, `G(u) = Aᵀ(A u - b)`.
    CopLasso {
        matrix: Matrix<S>,
        rhs: Vector<S>,
        #[serde(default = "unit")]
        tau: S,
    },
    /// Lasso with a seeded random `A` (entries uniform in `±1/√rows`) and
    /// `b = A x` for a sparse `x`.
    CopLassoRandom {
        rows: usize,
        cols: usize,
        #[serde(default = "unit")]
        tau: S,
    },
    /// `G(u) = A u + b`, `F = N_C` for a box `C` (all of `R^n` if absent).
    ViAffine {
        matrix: Matrix<S>,
        offset: Vector<S>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        set: Option<BoxSet<S>>,
    },
    /// `G(u) = R(u - c)` for the planar quarter turn `R`, `F = 0`.
    ViRotation {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vector<S>>,
    },
    /// `F = ∂|·|_1 + μ_F Id`, `G = μ_G Id`; the solution set is `{0}`.
    WeakPair {
        mu_f: S,
        mu_g: S,
        #[serde(default = "one")]
        dim: usize,
    },
    /// Any catalog pair, `f` in the resolvent role and `g` forward.
    Composite { f: OperatorSpec<S>, g: OperatorSpec<S> },
}

fn unit<S: Scalar>() -> S {
    S::one()
}

fn one() -> usize {
    1
}

impl<S: Scalar> ProblemSpec<S> {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::CopLasso { .. } => "cop_lasso",
            Self::CopLassoRandom { .. } => "cop_lasso_random",
            Self::ViAffine { .. } => "vi_affine",
            Self::ViRotation { .. } => "vi_rotation",
            Self::WeakPair { .. } => "weak_pair",
            Self::Composite { .. } => "composite",
        }
    }
}

#[derive(Debug, Clone)]
pub enum SolutionOracle<S> {
    /// Singleton solution set.
    Point(Vector<S>),
    /// Solution set equal to the set whose normal cone this is.
    Projection(ResolventOperator<S>),
}

impl<S: Scalar> SolutionOracle<S> {
    pub fn project(&self, w: &Vector<S>) -> Result<Vector<S>> {
        match self {
            Self::Point(p) => {
                check_dim(p.dim(), w.dim())?;
                Ok(p.clone())
            }
            Self::Projection(cone) => cone.resolve(S::one(), w),
        }
    }
}

/// `0 ∈ F(u) + G(u)` with declared constants `(L, μ_F, μ_G)`.
#[derive(Debug, Clone)]
pub struct InclusionProblem<S> {
    f: ResolventOperator<S>,
    g: ForwardOperator<S>,
    oracle: Option<SolutionOracle<S>>,
    label: String,
}

impl<S: Scalar> InclusionProblem<S> {
    pub fn new(f: ResolventOperator<S>, g: ForwardOperator<S>, label: impl Into<String>) -> Result<Self> {
        check_dim(f.dim(), g.dim())?;
        Ok(Self { f, g, oracle: None, label: label.into() })
    }

    pub fn with_oracle(mut self, oracle: SolutionOracle<S>) -> Self {
        self.oracle = Some(oracle);
        self
    }

    pub fn f(&self) -> &ResolventOperator<S> {
        &self.f
    }

    pub fn g(&self) -> &ForwardOperator<S> {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn lipschitz(&self) -> S {
        self.g.lipschitz()
    }

    pub fn mu_f(&self) -> S {
        self.f.modulus()
    }

    pub fn mu_g(&self) -> S {
        self.g.modulus()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn oracle(&self) -> Option<&SolutionOracle<S>> {
        self.oracle.as_ref()
    }

    pub fn has_oracle(&self) -> bool {
        self.oracle.is_some()
    }

    /// `0.9 / (2L)`, or 1 when `L = 0`.
    pub fn default_gamma(&self) -> S {
        default_gamma(self.lipschitz())
    }
}

/// Builds a catalog problem. `seed` drives the random instances only.
pub fn make_problem<S: Scalar>(spec: &ProblemSpec<S>, seed: u64) -> Result<InclusionProblem<S>> {
    match spec {
        ProblemSpec::CopLasso { matrix, rhs, tau } => cop_lasso(matrix, rhs, *tau),
        ProblemSpec::CopLassoRandom { rows, cols, tau } => {
            cap_dim(*rows)?;
            cap_dim(*cols)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let scale = 1.0 / (*rows as f64).sqrt();
            let a: Vec<Vec<S>> = (0..*rows)
                .map(|_| (0..*cols).map(|_| lit(rng.gen_range(-scale..=scale))).collect())
                .collect();
            let a = Matrix::from_rows(a)?;
            let support = (*cols / 5).max(1);
            let mut x = vec![S::zero(); *cols];
            for _ in 0..support {
                let i = rng.gen_range(0..*cols);
                x[i] = lit(rng.gen_range(-2.0..2.0));
            }
            let b = a.matvec(&Vector::new(x)?);
            let p = cop_lasso(&a, &b, *tau)?;
            Ok(InclusionProblem { label: format!("cop_lasso_random({rows}x{cols})"), ..p })
        }
        ProblemSpec::ViAffine { matrix, offset, set } => vi_affine(matrix, offset, set.as_ref()),
        ProblemSpec::ViRotation { center } => {
            let (g, solution) = match center {
                None => (ForwardOperator::rotation(2)?, Vector::zeros(2)),
                Some(c) => {
                    check_dim(2, c.dim())?;
                    let r = Matrix::from_rows(vec![vec![S::zero(), S::one()], vec![-S::one(), S::zero()]])?;
                    let offset = -&r.matvec(c);
                    (ForwardOperator::affine(r, offset)?.with_modulus(S::zero()), c.clone())
                }
            };
            Ok(InclusionProblem::new(ResolventOperator::zero(2), g.with_label("rotation"), "vi_rotation")?
                .with_oracle(SolutionOracle::Point(solution)))
        }
        ProblemSpec::WeakPair { mu_f, mu_g, dim } => {
            if *dim == 0 {
                return Err(Error::Construction("weak_pair needs dim >= 1".into()));
            }
            if !(*mu_f + *mu_g >= S::zero()) {
                return Err(Error::Construction(format!(
                    "weak_pair violates μ_F + μ_G >= 0: μ_F = {mu_f}, μ_G = {mu_g}, sum = {}",
                    *mu_f + *mu_g
                )));
            }
            let f = ResolventOperator::shifted(ResolventOperator::subdiff_l1(*dim, S::one())?, *mu_f)?;
            let g = ForwardOperator::scaled_identity(*dim, *mu_g);
            Ok(InclusionProblem::new(f, g, format!("weak_pair({mu_f}, {mu_g})"))?
                .with_oracle(SolutionOracle::Point(Vector::zeros(*dim))))
        }
        ProblemSpec::Composite { f, g } => {
            let f = f.build_resolvent()?;
            let g = g.build_forward()?;
            let label = format!("composite({}, {})", f.label(), g.label());
            let oracle = (g.is_zero() && f.is_normal_cone()).then(|| SolutionOracle::Projection(f.clone()));
            let mut p = InclusionProblem::new(f, g, label)?;
            p.oracle = oracle;
            Ok(p)
        }
    }
}

/// Projection of `w` onto the solution set of `problem`.
pub fn project_solution<S: Scalar>(problem: &InclusionProblem<S>, w: &Vector<S>) -> Result<Vector<S>> {
    check_dim(problem.dim(), w.dim())?;
    match &problem.oracle {
        Some(o) => o.project(w),
        None => Err(Error::Unsupported(format!("problem {} has no solution oracle", problem.label))),
    }
}

fn cap_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        Err(Error::Construction(format!("matrix dimension must be in 1..={MAX_DIM}, got {n}")))
    } else {
        Ok(())
    }
}

fn cop_lasso<S: Scalar>(a: &Matrix<S>, b: &Vector<S>, tau: S) -> Result<InclusionProblem<S>> {
    cap_dim(a.rows())?;
    cap_dim(a.cols())?;
    if b.dim() != a.rows() {
        return Err(Error::Construction(format!(
            "lasso right-hand side has dimension {} but A has {} rows",
            b.dim(),
            a.rows()
        )));
    }
    let at = a.transpose();
    let gram = at.matmul(a)?;
    let atb = at.matvec(b);
    let g = ForwardOperator::affine(gram.clone(), -&atb)?;
    // Gram matrices are PSD; drop negative round-off in the eigen solve
    let mu = g.modulus().max(S::zero());
    let g = g.with_modulus(mu).with_label("lasso_gradient");
    let f = ResolventOperator::subdiff_l1(a.cols(), tau)?;
    let p = InclusionProblem::new(f, g, "cop_lasso")?;
    if a.is_square() && *a == Matrix::identity(a.rows()) {
        Ok(p.with_oracle(SolutionOracle::Point(soft_threshold(b, tau))))
    } else {
        Ok(p)
    }
}

fn vi_affine<S: Scalar>(a: &Matrix<S>, b: &Vector<S>, set: Option<&BoxSet<S>>) -> Result<InclusionProblem<S>> {
    cap_dim(a.rows())?;
    let g = ForwardOperator::affine(a.clone(), b.clone())?;
    let n = a.rows();
    let f = match set {
        Some(c) => {
            check_dim(n, c.lower.len())?;
            ResolventOperator::normal_cone_box(c.lower.clone(), c.upper.clone())?
        }
        None => ResolventOperator::zero(n),
    };
    let diag_positive = a.is_diagonal() && a.diag().iter().all(|&d| d > S::zero());
    let oracle = if diag_positive {
        let unconstrained: Vec<S> = a.diag().iter().zip(b.iter()).map(|(&d, &bi)| -bi / d).collect();
        let point = match set {
            Some(c) => Vector::new(
                unconstrained
                    .iter()
                    .zip(c.lower.iter().zip(&c.upper))
                    .map(|(&x, (&l, &h))| x.max(l).min(h))
                    .collect(),
            )?,
            None => Vector::new(unconstrained)?,
        };
        Some(SolutionOracle::Point(point))
    } else if set.is_none() && g.modulus() > S::zero() {
        // strongly monotone and unconstrained: the unique zero of A u + b
        Some(SolutionOracle::Point(a.solve(&-b)?))
    } else {
        None
    };
    let mut p = InclusionProblem::new(f, g, "vi_affine")?;
    p.oracle = oracle;
    Ok(p)
}
