//! Exact coefficients: rationals and towers of algebraic extensions.

mod tower;
pub mod upoly;

pub use tower::{AlgebraicNumber, Level, Tower, Val, Q};
pub use upoly::{distinct_root_partition, rational_roots, squarefree};

pub(crate) use tower::join_terms;

use num_bigint::BigInt;
use num_rational::Ratio;

/// Exponents are small rationals.
pub type Q64 = Ratio<i64>;

pub fn q64(n: i64, d: i64) -> Q64 {
    Q64::new(n, d)
}

pub fn q64_to_q(x: Q64) -> Q {
    Q::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// Format an exponent for the series text form: integers bare, fractions
/// parenthesised.
pub fn fmt_exp(e: Q64) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}
