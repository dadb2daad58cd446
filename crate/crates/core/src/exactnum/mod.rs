//! Exact Gaussian-rational arithmetic and linear algebra.

mod field;
mod matrix;
mod scalar;
mod subspace;

pub use field::Field;
pub use matrix::{complexify_vec, realify_vec, CMatrix, Matrix, QMatrix};
pub use scalar::{q, qi, LiteralError, Rational, Scalar};
pub use subspace::{image, kernel, restrict_scalars, CSubspace, QSubspace, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("second space is not contained in the first")]
    NotASubspace,
}
