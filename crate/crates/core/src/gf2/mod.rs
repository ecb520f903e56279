//! Bit-packed linear algebra over GF(2).
//!
//! Rows are packed into 64-bit words, so matrices with a thousand or more
//! columns are handled without special casing. Row spaces of dimension up to
//! [`DEFAULT_MAX_DIM`] can be enumerated word by word.

mod enumerate;
mod matrix;
mod vector;

pub use enumerate::{
    for_each_in_coset, min_distance, min_weight_coset_representative, min_weight_outside,
    weight_distribution, CosetRepresentative, DEFAULT_MAX_DIM,
};
pub use matrix::{BinaryMatrix, Rref};
pub use vector::BinaryVector;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("space of dimension {dimension} exceeds the enumeration limit {max_dim}")]
    DimensionTooLarge { dimension: usize, max_dim: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Free-function form of [`BinaryMatrix::rref`], returning the echelon form and rank.
pub fn rref(m: &BinaryMatrix) -> (BinaryMatrix, usize) {
    let r = m.rref();
    (r.matrix, r.rank)
}

pub fn null_space(m: &BinaryMatrix) -> BinaryMatrix {
    m.null_space()
}

pub fn is_self_orthogonal(m: &BinaryMatrix) -> bool {
    m.is_self_orthogonal()
}
