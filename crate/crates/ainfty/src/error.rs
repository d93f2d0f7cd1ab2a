//! Error type shared across the kernel.

use thiserror::Error;

/// Errors produced by constructors and fallible operations.
///
/// Internal invariant violations (mixing scalars from different fields,
/// combining elements over different spaces) panic instead: they are
/// programming errors, not data errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("scalar inversion of zero")]
    ZeroInverse,
    #[error("rational {0}/{1} has no meaning mod {2}: denominator not invertible")]
    BadReduction(i64, i64, u64),
    #[error("permutation has length {perm} but {degrees} degrees were given")]
    PermutationLength { perm: usize, degrees: usize },
    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("invalid basis name {0:?}")]
    BadBasisName(String),
    #[error("duplicate basis name {0:?}")]
    DuplicateBasisName(String),
    #[error("vertex tuple {0} is not nonempty and strictly increasing")]
    BadIndexSet(String),
    #[error("basis vector {0:?} has filtration weight 0; weights start at 1")]
    ZeroWeight(String),
    #[error("unknown basis vector {0:?}")]
    UnknownBasis(String),
    #[error("expected a homogeneous element of degree {expected}, found degree {found:?}")]
    WrongDegree { expected: i64, found: Option<i64> },
    #[error("component {op}_{arity} on {word:?} must have degree {expected}, found {found:?}")]
    ComponentDegree {
        op: &'static str,
        arity: usize,
        word: String,
        expected: i64,
        found: Option<i64>,
    },
    #[error("component {op}_{arity} on {word:?} drops filtration weight ({from} to {to})")]
    ComponentWeight {
        op: &'static str,
        arity: usize,
        word: String,
        from: u32,
        to: u32,
    },
    #[error("index {index} out of range for dimension {n}")]
    IndexRange { index: usize, n: usize },
    #[error("cochain dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("morphism composition needs matching middle algebras")]
    ComposeMismatch,
    #[error("algebra table is not {0}")]
    BadAlgebraTable(&'static str),
    #[error("coalgebra table is not {0}")]
    BadCoalgebraTable(&'static str),
    #[error("horn faces are incompatible at ({j}, {k})")]
    IncompatibleHorn { j: usize, k: usize },
    #[error("horn needs {expected} faces for dimension {n}, found {found}")]
    HornFaceCount { n: usize, expected: usize, found: usize },
    #[error("element is not Maurer-Cartan (curvature {0})")]
    NotMaurerCartan(String),
    #[error("element is not in the image of R")]
    NotInImage,
    #[error("enumeration requires a finite field; over Q only witness verification is available")]
    EnumerationOverRationals,
    #[error("fixed-point iteration did not stabilize within {0} steps")]
    FixedPointDiverged(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
