//! Minimal commutative ring interface used by the generic matrix and
//! polynomial code.

use std::fmt::Debug;

use crate::coeff::{AlgebraicNumber, Q};

/// A commutative Q-algebra. Truncated series implement it with precision
/// tracking, so `is_exact_zero` means "known to be zero", not "no known terms".
pub trait Ring: Clone + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn radd(&self, o: &Self) -> Self;
    fn rsub(&self, o: &Self) -> Self;
    fn rmul(&self, o: &Self) -> Self;
    fn rneg(&self) -> Self;
    fn mul_q(&self, q: &Q) -> Self;
    fn is_exact_zero(&self) -> bool;
    fn from_an(c: &AlgebraicNumber) -> Self;
}

impl Ring for AlgebraicNumber {
    fn zero() -> Self {
        AlgebraicNumber::zero()
    }
    fn one() -> Self {
        AlgebraicNumber::one()
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn mul_q(&self, q: &Q) -> Self {
        AlgebraicNumber::mul_q(self, q)
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn from_an(c: &AlgebraicNumber) -> Self {
        c.clone()
    }
}
