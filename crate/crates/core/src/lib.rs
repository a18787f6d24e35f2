pub mod analysis;
pub mod cache;
pub mod error;
pub mod factor;
pub mod json;
pub mod linalg;
pub mod modular;
pub mod newton;
pub mod poly;
pub mod resultant;
pub mod scalar;
pub mod steiner;
pub mod tree;

pub use error::{Error, Result};

/// Exact integer coefficients.
pub type Integer = num_bigint::BigInt;
/// Exact rational evaluation points.
pub type Rational = num_rational::BigRational;
/// Floating point complex points for the Newton search.
pub type Complex = num_complex::Complex64;

pub use analysis::{Context, ResultantMode, Status, VerificationReport};
pub use resultant::{MacaulayResultantProblem, ResultantOutcome};
pub use steiner::Normalization;
pub use tree::Tree;
