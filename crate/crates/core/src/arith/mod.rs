//! Exact arithmetic over ℚ and one quadratic extension.

pub mod field;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod roots;
pub mod scalar;
pub mod series;

pub use field::{FieldSpec, QuadraticField};
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use scalar::Scalar;
pub use series::PowerSeries;
