//! Exact fields, sparse linear algebra and chain-complex homology.

mod complex;
mod dense;
mod field;
mod snf;
mod sparse;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use complex::{alternating_sum, ChainComplex, HomologyReport};
pub use dense::DenseMatrix;
pub use field::{
    common_denominator, cyclotomic_polynomial, is_prime, rational_parts, totient, CycloElem, Cyclotomic, Field,
    PrimeField, Rationals,
};
pub use snf::snf_oracle;
pub use sparse::SparseMatrix;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("d_{} ∘ d_{degree} is nonzero", degree - 1)]
    ComplexInvalid { degree: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("differential d_{degree} breaks the internal grading at entry ({row}, {col})")]
    GradingViolated { degree: usize, row: usize, col: usize },
}

/// Scales each row of a rational matrix by the lcm of its denominators,
/// giving an integer matrix of the same rank.
pub fn clear_denominators(m: &SparseMatrix<BigRational>) -> Vec<Vec<BigInt>> {
    let dense = m.to_dense(&Rationals);
    (0..dense.rows())
        .map(|i| {
            let row = dense.row(i);
            let l = common_denominator(row);
            row.iter()
                .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}
