//! Eigenvalue shifting and the scalar base case. Both emit monomials of the
//! exponential part `Q`, obtained by integrating pole terms in `eps`.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::coeff::{AlgebraicNumber as An, Q64};
use crate::error::{Error, Result};
use crate::linalg::PerturbedSystem;
use crate::series::BiSeries;

/// One monomial `coeff * x^x_exp * eps^eps_exp` of an exponential part, or
/// `coeff * log(x) * eps^eps_exp` when `is_log` is set (then `x_exp = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct ExpTerm {
    pub coeff: An,
    pub x_exp: Q64,
    pub eps_exp: Q64,
    pub is_log: bool,
}

impl ExpTerm {
    /// Order: strongest pole in `eps` first, then increasing `x` exponent.
    pub fn order(a: &ExpTerm, b: &ExpTerm) -> Ordering {
        a.eps_exp.cmp(&b.eps_exp).then(a.x_exp.cmp(&b.x_exp)).then(a.is_log.cmp(&b.is_log))
    }
}

/// Subtract `gamma` from the leading constant matrix:
/// `M -> M - gamma x^(-p - sigma h) eps^(-h/d) I`, returning the integral
/// of the removed scalar term.
pub fn eigen_shift(sys: &PerturbedSystem, gamma: &An) -> Result<(PerturbedSystem, Vec<ExpTerm>)> {
    if gamma.is_zero() {
        return Ok((sys.clone(), Vec::new()));
    }
    let rep = sys.rep;
    let a = -rep.p - rep.sigma * Q64::from_integer(rep.h);
    let e = Q64::new(-rep.h, sys.d);
    let n = sys.n();
    let mono = BiSeries::monomial(gamma.clone(), a, e);
    let mut m = sys.m.clone();
    for i in 0..n {
        let v = m.get(i, i).sub(&mono);
        m.set(i, i, v);
    }
    let out = PerturbedSystem::from_raw(m, sys.d)?;
    Ok((out, vec![integrate_monomial(gamma, a, e)]))
}

fn integrate_monomial(c: &An, a: Q64, e: Q64) -> ExpTerm {
    if a == -Q64::one() {
        ExpTerm { coeff: c.clone(), x_exp: Q64::zero(), eps_exp: e, is_log: true }
    } else {
        let k = a + Q64::one();
        ExpTerm { coeff: c.mul_q(&crate::coeff::q64_to_q(k.recip())), x_exp: k, eps_exp: e, is_log: false }
    }
}

/// Integrated terms and `(eps exponent, x precision)` truncations.
pub type Integrated = (Vec<ExpTerm>, Vec<(Q64, Q64)>);

/// Scalar system `dw/dx = m(x, eps) w`: integrate every term with a
/// negative power of `eps`. Also returns `(eps exponent, x precision)` for
/// each integrated coefficient that is only known to finite `x` order.
pub fn integrate_rank1(sys: &PerturbedSystem) -> Result<Integrated> {
    if sys.n() != 1 {
        return Err(Error::pre("rank-one integration needs a scalar system"));
    }
    let f = sys.m.get(0, 0);
    if f.prec().is_some_and(|p| p < Q64::zero()) {
        return Err(Error::order("the pole part in eps is not fully known"));
    }
    let mut terms = Vec::new();
    let mut trunc = Vec::new();
    for (e, c) in f.terms() {
        if *e >= Q64::zero() {
            break;
        }
        for (xe, a) in c.terms() {
            terms.push(integrate_monomial(a, *xe, *e));
        }
        if let Some(p) = c.prec() {
            trunc.push((*e, p + Q64::one()));
        }
    }
    terms.sort_by(ExpTerm::order);
    Ok((terms, trunc))
}
