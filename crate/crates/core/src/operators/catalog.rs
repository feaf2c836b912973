use serde::{Deserialize, Serialize};

use super::{ForwardOperator, ResolventOperator};
use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Serializable descriptor of a catalog operator, tagged by `kind`:
///
/// ```json
/// {"kind": "normal_cone_box", "lower": [-1, null], "upper": [1, 2]}
/// ```
///
/// `null` box bounds stand for `-inf`/`+inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "S: Scalar")]
pub enum OperatorSpec<S> {
    Zero {
        dim: usize,
    },
    Linear {
        matrix: Matrix<S>,
    },
    Affine {
        matrix: Matrix<S>,
        offset: Vector<S>,
    },
    Rotation {
        #[serde(default = "two")]
        dim: usize,
    },
    ScaledIdentity {
        dim: usize,
        scale: S,
    },
    NormalConeBox {
        #[serde(with = "lower_bounds")]
        lower: Vec<S>,
        #[serde(with = "upper_bounds")]
        upper: Vec<S>,
    },
    NormalConeBall {
        center: Vector<S>,
        radius: S,
    },
    NormalConeHalfspace {
        normal: Vector<S>,
        offset: S,
    },
    SubdiffL1 {
        dim: usize,
        #[serde(default = "unit")]
        tau: S,
    },
    SubdiffQuadratic {
        matrix: Matrix<S>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        linear: Option<Vector<S>>,
    },
    Shifted {
        inner: Box<OperatorSpec<S>>,
        modulus: S,
    },
}

fn two() -> usize {
    2
}

fn unit<S: Scalar>() -> S {
    S::one()
}

/// An operator built in the role its kind naturally plays.
#[derive(Debug, Clone)]
pub enum BuiltOperator<S> {
    Forward(ForwardOperator<S>),
    Resolvent(ResolventOperator<S>),
}

impl<S: Scalar> OperatorSpec<S> {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Zero { .. } => "zero",
            Self::Linear { .. } => "linear",
            Self::Affine { .. } => "affine",
            Self::Rotation { .. } => "rotation",
            Self::ScaledIdentity { .. } => "scaled_identity",
            Self::NormalConeBox { .. } => "normal_cone_box",
            Self::NormalConeBall { .. } => "normal_cone_ball",
            Self::NormalConeHalfspace { .. } => "normal_cone_halfspace",
            Self::SubdiffL1 { .. } => "subdiff_l1",
            Self::SubdiffQuadratic { .. } => "subdiff_quadratic",
            Self::Shifted { .. } => "shifted",
        }
    }

    /// Whether the kind is a single-valued map usable as `G`.
    pub fn is_forward_kind(&self) -> bool {
        matches!(
            self,
            Self::Zero { .. }
                | Self::Linear { .. }
                | Self::Affine { .. }
                | Self::Rotation { .. }
                | Self::ScaledIdentity { .. }
        )
    }

    pub fn build_forward(&self) -> Result<ForwardOperator<S>> {
        match self {
            Self::Zero { dim } => Ok(ForwardOperator::zero(positive_dim(*dim)?)),
            Self::Linear { matrix } => ForwardOperator::linear(matrix.clone()),
            Self::Affine { matrix, offset } => ForwardOperator::affine(matrix.clone(), offset.clone()),
            Self::Rotation { dim } => ForwardOperator::rotation(*dim),
            Self::ScaledIdentity { dim, scale } => {
                Ok(ForwardOperator::scaled_identity(positive_dim(*dim)?, *scale))
            }
            other => Err(Error::Construction(format!(
                "kind {} is set-valued and can only be used as the resolvent operator F",
                other.kind_name()
            ))),
        }
    }

    pub fn build_resolvent(&self) -> Result<ResolventOperator<S>> {
        match self {
            Self::Zero { dim } => Ok(ResolventOperator::zero(positive_dim(*dim)?)),
            Self::Linear { matrix } => ResolventOperator::linear(matrix.clone()),
            Self::Affine { matrix, offset } => ResolventOperator::affine(matrix.clone(), offset.clone()),
            Self::Rotation { dim } => {
                if *dim == 0 || dim % 2 != 0 {
                    return Err(Error::Construction(format!(
                        "rotation needs an even positive dimension, got {dim}"
                    )));
                }
                let mut rows = vec![vec![S::zero(); *dim]; *dim];
                for k in (0..*dim).step_by(2) {
                    rows[k][k + 1] = S::one();
                    rows[k + 1][k] = -S::one();
                }
                Ok(ResolventOperator::linear(Matrix::from_rows(rows)?)?.with_label("rotation"))
            }
            Self::ScaledIdentity { dim, scale } => {
                Ok(ResolventOperator::scaled_identity(positive_dim(*dim)?, *scale))
            }
            Self::NormalConeBox { lower, upper } => {
                ResolventOperator::normal_cone_box(lower.clone(), upper.clone())
            }
            Self::NormalConeBall { center, radius } => {
                ResolventOperator::normal_cone_ball(center.clone(), *radius)
            }
            Self::NormalConeHalfspace { normal, offset } => {
                ResolventOperator::normal_cone_halfspace(normal.clone(), *offset)
            }
            Self::SubdiffL1 { dim, tau } => ResolventOperator::subdiff_l1(positive_dim(*dim)?, *tau),
            Self::SubdiffQuadratic { matrix, linear } => {
                let linear = linear.clone().unwrap_or_else(|| Vector::zeros(matrix.rows()));
                ResolventOperator::subdiff_quadratic(matrix.clone(), linear)
            }
            Self::Shifted { inner, modulus } => {
                ResolventOperator::shifted(inner.build_resolvent()?, *modulus)
            }
        }
    }
}

/// Builds the operator in its natural role: single-valued kinds become
/// forward operators, cones, subdifferentials and shifts become resolvents.
pub fn build_operator<S: Scalar>(spec: &OperatorSpec<S>) -> Result<BuiltOperator<S>> {
    if spec.is_forward_kind() {
        spec.build_forward().map(BuiltOperator::Forward)
    } else {
        spec.build_resolvent().map(BuiltOperator::Resolvent)
    }
}

fn positive_dim(dim: usize) -> Result<usize> {
    if dim == 0 {
        Err(Error::Construction("dimension must be positive".into()))
    } else {
        Ok(dim)
    }
}

macro_rules! bound_serde {
    ($name:ident, $missing:ident) => {
        pub(crate) mod $name {
            use crate::scalar::Scalar;
            use serde::{Deserialize, Deserializer, Serialize, Serializer};

            pub fn serialize<S: Scalar, Ser: Serializer>(v: &[S], ser: Ser) -> Result<Ser::Ok, Ser::Error> {
                let opt: Vec<Option<S>> =
                    v.iter().map(|&b| if b.is_finite() { Some(b) } else { None }).collect();
                opt.serialize(ser)
            }

            pub fn deserialize<'de, S: Scalar, De: Deserializer<'de>>(de: De) -> Result<Vec<S>, De::Error> {
                let opt: Vec<Option<S>> = Vec::deserialize(de)?;
                Ok(opt.into_iter().map(|b| b.unwrap_or_else(S::$missing)).collect())
            }
        }
    };
}

bound_serde!(lower_bounds, neg_infinity);
bound_serde!(upper_bounds, infinity);
