//! Prime-field arithmetic, polynomials and Reed-Solomon decoding.

mod bivar;
mod field;
mod poly;
mod rs;

pub use bivar::SymBivarPoly;
pub use field::{is_prime, Fe, Field, MERSENNE_61};
pub use poly::{interpolate, lagrange_coeffs, EvalPoints, UniPoly};
pub use rs::rs_decode;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("field too small: need at least {needed} distinct nonzero points")]
    FieldTooSmall { needed: u64 },
    #[error("duplicate x coordinate {0}")]
    DuplicateX(u64),
    #[error("need {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("points are not consistent with a single polynomial")]
    Inconsistent,
    #[error("polynomial exceeds degree bound {bound}")]
    DegreeTooHigh { bound: usize },
    #[error("coefficient matrix is not symmetric")]
    NotSymmetric,
    #[error("party index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
}
