pub mod arrangement;
pub mod error;
pub mod invariants;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod poset;
pub mod scalar;
pub mod toric;

pub use arrangement::{multiplicity, Arrangement, GroupSpec, SubsetData, SubsetMask};
pub use error::{Error, Result};
pub use invariants::QuasiPolynomial;
pub use scalar::{Coefficient, Scalar};

/// Arbitrary-precision integer used throughout the arrangement layer.
pub type Int = num_bigint::BigInt;
/// Exact rational, used for evaluation and character values.
pub type Rational = num_rational::BigRational;

pub type Matrix = linalg::IntegerMatrix<Int>;
pub type AbelianGroup = linalg::FgAbelianGroup<Int>;
pub type Smith = linalg::SmithDecomposition<Int>;
pub type Hom = linalg::FiniteHom<Int>;

pub type Poly = poly::UniPoly<Int>;
pub type TuttePoly = poly::BiPoly<Int>;
