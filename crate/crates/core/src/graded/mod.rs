//! Exact scalars, sparse polynomials, graded signatures, weight-preserving
//! polynomial maps, dilation (homogeneity) structures, and weight vector fields.

mod derivation;
mod homogeneity;
mod poly;
mod polymap;
pub mod random;
mod scalar;
mod signature;

use thiserror::Error;

pub use derivation::{is_homogeneous, weight_components, weight_vector_field, Derivation};
pub use homogeneity::{
    check_compatible_structures, dilation, dilations, intertwines, is_graded_morphism,
    CompatibilityVerdict, HomogeneityStructure, PairVerdict,
};
pub use poly::{Exponents, Polynomial};
pub use polymap::PolyMap;
pub use scalar::{Field, Scalar, MAX_PRIME};
pub use signature::{Block, Caps, GradedSignature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("map is not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("not a homogeneity structure: {0}")]
    InvalidStructure(String),
    #[error("internal disagreement: {0}")]
    InternalDisagreement(String),
}

pub type Result<T> = std::result::Result<T, GradedError>;

/// Inverse of a square matrix by Gauss-Jordan elimination, `None` when singular.
pub fn invert_matrix(m: &[Vec<Scalar>], field: Field) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].inv().expect("pivot is nonzero");
        a[col] = a[col].iter().map(|x| x * &inv).collect();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Determinant by elimination.
pub fn determinant(m: &[Vec<Scalar>], field: Field) -> Scalar {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = field.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return field.zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -&det;
        }
        det = &det * &a[col][col];
        let inv = a[col][col].inv().expect("pivot is nonzero");
        for r in col + 1..n {
            let factor = &a[r][col] * &inv;
            let pivot_row = a[col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                *x = &*x - &(&factor * p);
            }
        }
    }
    det
}
