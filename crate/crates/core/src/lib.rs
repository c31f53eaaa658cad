//! Exact and certified-numeric machinery for Ramanujan-type series for 1/π.
//!
//! Parameters of each series live in quadratic surd fields and are transformed
//! exactly; sums are evaluated with fixed-point big floats that carry a
//! rigorous absolute error bound.

pub mod catalog;
pub mod config;
pub mod congruence;
pub mod error;
pub mod exact;
pub mod families;
pub mod identities;
pub mod modular;
pub mod numeric;
pub mod series;
pub mod suite;
pub mod transforms;

pub use error::{Error, Result};
pub use exact::{Rational, Surd};
pub use numeric::BigFloat;
