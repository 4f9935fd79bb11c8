pub mod error;
pub mod exactalg;
pub mod groebner;
pub mod modulealg;
pub mod double;
pub mod closure;
pub mod equising;
pub mod curvefam;

pub use error::{Error, Result};
pub use exactalg::{BiSeries, Monomial, Poly, PolyMatrix, Rational, TruncSeries};
