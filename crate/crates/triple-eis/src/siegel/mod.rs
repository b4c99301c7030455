//! Local Siegel series `b_l(B, s)` and their polynomial parts `F_{B,l}`.

pub mod engine;
pub mod matrix;
pub mod oracle;
pub mod smith;

pub use matrix::HalfIntegralMatrix;
pub use oracle::siegel_coefficient;
pub use smith::nu_level;
pub mod jordan;
pub mod polynomial;

pub use polynomial::{a_b, local_polynomials, siegel_polynomial, SiegelOptions, SiegelPolynomial, SiegelSolver};
