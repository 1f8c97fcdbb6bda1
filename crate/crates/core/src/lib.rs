//! Exact algebra for skein-module relation computations, and the checks
//! built on it.

pub mod calculus;
pub mod character;
pub mod checks;
pub mod error;
pub mod families;
pub mod laurent;
pub mod linalg;
pub mod manifest;
pub mod mpoly;
pub mod parse;
pub mod reduction;
pub mod report;
pub mod scalar;
pub mod unipoly;

pub use num_traits::{One, Zero};
pub use error::{AlgebraError, Result};
pub use laurent::{Laurent, QScalar};
pub use mpoly::{Frac, Monomial, Poly, Var};
pub use scalar::{ExactDiv, Field, Rational, Ring};
pub use unipoly::UniPoly;

/// Polynomials in `t, r, r1..r4, mu, K` over the Laurent ground ring.
pub type MPoly = Poly<QScalar>;
/// Fractions of [`MPoly`].
pub type RatFrac = Frac<QScalar>;
/// Polynomials with exact rational coefficients (after specializing `q`).
pub type QPoly = Poly<Rational>;
