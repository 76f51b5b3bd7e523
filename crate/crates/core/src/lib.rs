pub mod bernstein_sato;
pub mod bump;
pub mod checks;
pub mod cli;
pub mod dyadic;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod multiplier;
pub mod oscillatory;
pub mod quad;
pub mod report;
pub mod riesz;
pub mod special;
pub mod transform;

pub use error::{Error, Result};

/// Exact rational numbers used for roots and exponents.
pub type Rational = num_rational::Ratio<i64>;
