//! Turning points: `A_{0,0}` nilpotent while `A_0(x)` is not.
//!
//! The smallest leading exponent `q` of the nonzero eigenvalues of `A_0(x)`
//! is read off the characteristic polynomial. `N = x^-q A_0(x)` then has
//! eigenvalues of order one, and the rank-reduction engine applied to `N`
//! (with `x` playing the part of the parameter and no derivative terms)
//! yields `T(x)` such that `T^-1 N T` is holomorphic at `x = 0` with a
//! non-nilpotent constant term. Applying `T` to the full system changes
//! the slope `sigma` of the normal form.

use num_traits::Zero;

use super::rank::{eps_rank_reduce, ReduceMode};
use crate::coeff::Q64;
use crate::error::{Error, Result};
use crate::linalg::field::is_nilpotent;
use crate::linalg::{charpoly, gauge_apply, lift_x, Matrix, Orders, PerturbedSystem};
use crate::series::{BiSeries, Puiseux};

#[derive(Clone, Debug)]
pub struct TurningResult {
    pub sys: PerturbedSystem,
    /// `F = T G`, entries in `x` only.
    pub t: Matrix<Puiseux>,
    pub tinv: Matrix<Puiseux>,
    /// Leading exponent of the nonzero eigenvalues of `A_0(x)`.
    pub q: Q64,
    /// Denominator of the `x` exponents introduced by `T`.
    pub x_ram: i64,
}

/// Smallest leading exponent among the nonzero eigenvalues of `A_0(x)`,
/// or `None` when `A_0(x)` is nilpotent.
pub fn leading_eigen_valuation(a0: &Matrix<Puiseux>, ord: &Orders) -> Result<Option<Q64>> {
    let n = a0.rows();
    let cp = charpoly(a0);
    let mut best: Option<Q64> = None;
    for (i, c) in cp.iter().enumerate().take(n) {
        if c.is_zero_certain(ord.certainty)? {
            continue;
        }
        let v = c.val().ok_or_else(|| Error::order("characteristic coefficient has no known term"))?;
        let q = v / Q64::from_integer((n - i) as i64);
        if best.is_none_or(|b| q < b) {
            best = Some(q);
        }
    }
    Ok(best)
}

/// `sum c_e x^e` as a series in a stand-in parameter, `sum c_e eps^e`.
fn x_to_fake(p: &Puiseux) -> BiSeries {
    BiSeries::from_coeffs(p.terms().iter().map(|(e, c)| (*e, Puiseux::constant(c.clone()))), p.prec())
}

fn fake_to_x(f: &BiSeries) -> Result<Puiseux> {
    let mut out = Puiseux::from_terms(std::iter::empty(), f.prec());
    for (e, c) in f.terms() {
        if c.terms().keys().any(|k| !k.is_zero()) || c.prec().is_some() {
            return Err(Error::pre("turning-point transformation depends on the stand-in variable"));
        }
        let a = c.coeff(Q64::zero());
        if !a.is_zero() && f.prec().is_none_or(|p| *e < p) {
            out.add_term(*e, a);
        }
    }
    Ok(out)
}

/// Resolve a turning point of `sys`.
pub fn resolve_turning_point(sys: &PerturbedSystem, ord: &Orders) -> Result<TurningResult> {
    if !is_nilpotent(&sys.leading_constant()) {
        return Err(Error::pre("leading constant matrix is not nilpotent"));
    }
    let a0 = sys.leading();
    let q = leading_eigen_valuation(&a0, ord)?.ok_or_else(|| Error::pre("leading matrix A_0(x) is nilpotent"))?;
    let fake = PerturbedSystem::from_raw(a0.map(|p| x_to_fake(&p.shift(-q))), 1)?;
    let red = eps_rank_reduce(&fake, ord, ReduceMode::Algebraic)?;
    if red.exit_rep.h > 0 {
        return Err(Error::order("could not reduce the scaled leading matrix to a holomorphic one"));
    }
    let t = red.t.try_map(fake_to_x)?;
    let tinv = red.tinv.try_map(fake_to_x)?;
    let out = gauge_apply(sys, &lift_x(&t), &lift_x(&tinv))?;
    if is_nilpotent(&out.leading_constant()) {
        return Err(Error::order("leading constant matrix is still nilpotent after the turning-point step"));
    }
    Ok(TurningResult { sys: out, t, tinv, q, x_ram: fake.d })
}
