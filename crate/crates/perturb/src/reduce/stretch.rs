//! Stretching `x = tau eps^rho` of the independent variable.

use num_traits::Zero;

use crate::coeff::Q64;
use crate::error::{Error, Result};
use crate::linalg::PerturbedSystem;

/// Rewrite `dF/dx = M(x, eps) F` in `tau = x eps^-rho`: a term
/// `c x^a eps^b` of `M` becomes `c tau^a eps^(b + rho a + rho)`. The
/// parameter is ramified as needed to keep exponents on its lattice.
pub fn stretch(sys: &PerturbedSystem, rho: Q64) -> Result<PerturbedSystem> {
    if rho.is_zero() {
        return Ok(sys.clone());
    }
    if rho < Q64::zero() {
        return Err(Error::pre("stretching exponent must be positive"));
    }
    let m = sys.m.try_map(|f| f.remap(|a, b| (a, b + rho * a + rho)))?;
    PerturbedSystem::from_raw(m, sys.d)
}
