//! Arbitrary-precision evaluation with certified error bounds.

pub mod bigfloat;
pub mod pi;
pub mod special;
pub mod sum;

pub use bigfloat::BigFloat;
pub use pi::{pi, pi_decimal, pi_with_leaf};
pub use special::{f_and_g, gamma, hyp_numeric};
pub use sum::{slow_series_sum, sum_formula, Route, SumConfig, VerificationReport};
