//! Exact scalar, polynomial, series and matrix kernel.

pub mod biseries;
pub mod matrix;
mod parse;
pub mod poly;
pub mod series;

pub use biseries::BiSeries;
pub use matrix::{combinations, PolyMatrix, QMatrix};
pub use poly::{linear_combination, rat, ratio, Monomial, Poly, Rational};
pub use series::{TruncSeries, DEFAULT_TRUNCATION};
