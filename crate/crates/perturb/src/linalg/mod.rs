//! Matrices over exact and series rings, the perturbed system type, gauge
//! transformations and valuation-aware elimination.

pub mod field;
mod gauge;
mod matrix;
mod ring;
mod system;
pub mod valuation;

pub use gauge::{gauge_apply, gauge_raw, inverse as series_inverse, lift_x, shear, similarity};
pub use matrix::{charpoly, det, Matrix, Poly};
pub use ring::Ring;
pub use system::{xi_monomial, PerturbedSystem, Rep};

use crate::coeff::Q64;

/// Truncation controls for every generated expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orders {
    /// Powers of the working parameter kept past the leading one.
    pub eps_terms: i64,
    /// Width of the `x` window kept past each valuation.
    pub x_rel: Q64,
    /// An entry whose known terms all vanish counts as zero only when its
    /// precision reaches this absolute `x` order.
    pub certainty: Q64,
}

impl Orders {
    pub fn with_order(n: i64) -> Self {
        let n = n.max(2);
        Orders { eps_terms: n, x_rel: Q64::from_integer(2 * n), certainty: Q64::from_integer(n) }
    }

    pub fn doubled(&self) -> Self {
        Orders::with_order(self.eps_terms * 2)
    }
}

impl Default for Orders {
    fn default() -> Self {
        Orders::with_order(8)
    }
}
