//! Truncated Puiseux series in `x` with exact coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::coeff::{fmt_exp, join_terms, q64_to_q, AlgebraicNumber, Q, Q64};
use crate::error::{Error, Result};
use crate::linalg::Ring;

/// Sparse Puiseux series `sum c_e x^e + O(x^prec)`.
///
/// `prec == None` marks an exact (finite) series. Every stored exponent is
/// below `prec` and every stored coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Puiseux {
    terms: BTreeMap<Q64, AlgebraicNumber>,
    prec: Option<Q64>,
}

pub(crate) fn min_opt(a: Option<Q64>, b: Option<Q64>) -> Option<Q64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl Puiseux {
    pub fn zero() -> Self {
        Puiseux::default()
    }

    pub fn one() -> Self {
        Self::constant(AlgebraicNumber::one())
    }

    pub fn constant(c: AlgebraicNumber) -> Self {
        Self::monomial(c, Q64::zero())
    }

    pub fn monomial(c: AlgebraicNumber, e: Q64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Puiseux { terms, prec: None }
    }

    /// `O(x^p)` with no known terms.
    pub fn big_o(p: Q64) -> Self {
        Puiseux { terms: BTreeMap::new(), prec: Some(p) }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Q64, AlgebraicNumber)>, prec: Option<Q64>) -> Self {
        let mut s = Puiseux { terms: BTreeMap::new(), prec };
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn add_term(&mut self, e: Q64, c: AlgebraicNumber) {
        if self.prec.is_some_and(|p| e >= p) || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Q64, AlgebraicNumber> {
        &self.terms
    }

    pub fn prec(&self) -> Option<Q64> {
        self.prec
    }

    pub fn coeff(&self, e: Q64) -> AlgebraicNumber {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    pub fn has_terms(&self) -> bool {
        !self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Exponent of the first known nonzero term.
    pub fn val(&self) -> Option<Q64> {
        self.terms.keys().next().copied()
    }

    /// Lower bound for the valuation: the first term or the precision.
    /// `None` for the exact zero.
    pub fn lower_bound(&self) -> Option<Q64> {
        self.val().or(self.prec)
    }

    pub fn leading(&self) -> Option<(Q64, &AlgebraicNumber)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    /// Least common multiple of exponent denominators.
    pub fn ram(&self) -> i64 {
        let mut l = 1i64;
        for e in self.terms.keys() {
            l = num_integer::lcm(l, *e.denom());
        }
        l
    }

    pub fn truncate(&self, p: Q64) -> Self {
        let prec = min_opt(self.prec, Some(p));
        Puiseux::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone())), prec)
    }

    pub fn truncate_opt(&self, p: Option<Q64>) -> Self {
        match p {
            Some(p) => self.truncate(p),
            None => self.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = Puiseux { terms: BTreeMap::new(), prec: min_opt(self.prec, o.prec) };
        for (e, c) in self.terms.iter().chain(o.terms.iter()) {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Puiseux { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(), prec: self.prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_exact_zero() || o.is_exact_zero() {
            return Puiseux::zero();
        }
        let la = self.lower_bound().unwrap();
        let lb = o.lower_bound().unwrap();
        let prec = min_opt(self.prec.map(|p| p + lb), o.prec.map(|p| p + la));
        let mut acc: BTreeMap<Q64, AlgebraicNumber> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea + eb;
                if prec.is_some_and(|p| e >= p) {
                    continue;
                }
                let v = ca * cb;
                match acc.get_mut(&e) {
                    Some(old) => *old = &*old + &v,
                    None => {
                        acc.insert(e, v);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Puiseux { terms: acc, prec }
    }

    pub fn scale(&self, c: &AlgebraicNumber) -> Self {
        if c.is_zero() {
            return match self.prec {
                None => Puiseux::zero(),
                Some(_) => Puiseux::zero(),
            };
        }
        Puiseux { terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(), prec: self.prec }
    }

    /// Multiply by `x^e`.
    pub fn shift(&self, e: Q64) -> Self {
        Puiseux {
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
            prec: self.prec.map(|p| p + e),
        }
    }

    /// Term-wise derivative in `x`.
    pub fn derive(&self) -> Self {
        let mut out = Puiseux { terms: BTreeMap::new(), prec: self.prec.map(|p| p - 1) };
        for (e, c) in &self.terms {
            if !e.is_zero() {
                out.add_term(e - 1, c.mul_q(&q64_to_q(*e)));
            }
        }
        out
    }

    /// Term-wise antiderivative. The coefficient of `x^-1` is returned
    /// separately as the coefficient of `log x`.
    pub fn integrate(&self) -> (Self, AlgebraicNumber) {
        let mut out = Puiseux { terms: BTreeMap::new(), prec: self.prec.map(|p| p + 1) };
        let mut log = AlgebraicNumber::zero();
        for (e, c) in &self.terms {
            if *e == -Q64::one() {
                log = c.clone();
            } else {
                let k = e + 1;
                out.add_term(k, c.mul_q(&q64_to_q(k).recip()));
            }
        }
        (out, log)
    }

    /// Multiplicative inverse, valid to relative order `rel` beyond the
    /// valuation (and never beyond what the input precision supports).
    pub fn inv(&self, rel: Q64) -> Result<Self> {
        let Some((v, c0)) = self.leading() else {
            return Err(if self.is_exact_zero() {
                Error::DivisionByZero
            } else {
                Error::order("inverse of a series with no known terms")
            });
        };
        let c0i = c0.inv()?;
        let mut rel_prec = self.prec.map(|p| p - v);
        if self.terms.len() > 1 || rel_prec.is_some() {
            rel_prec = min_opt(rel_prec, Some(rel));
        }
        let steps: Vec<(Q64, AlgebraicNumber)> =
            self.terms.iter().skip(1).map(|(e, c)| (e - v, c.clone())).collect();
        let mut b: BTreeMap<Q64, AlgebraicNumber> = BTreeMap::new();
        let mut work: BTreeSet<Q64> = BTreeSet::new();
        work.insert(Q64::zero());
        while let Some(t) = work.pop_first() {
            if rel_prec.is_some_and(|p| t >= p) {
                continue;
            }
            let bt = if t.is_zero() {
                c0i.clone()
            } else {
                let mut acc = AlgebraicNumber::zero();
                for (s, cs) in &steps {
                    if *s > t {
                        break;
                    }
                    if let Some(prev) = b.get(&(t - s)) {
                        acc = &acc + &(cs * prev);
                    }
                }
                -&(&acc * &c0i)
            };
            if !bt.is_zero() || t.is_zero() {
                b.insert(t, bt);
            }
            for (s, _) in &steps {
                let nt = t + s;
                if rel_prec.is_none_or(|p| nt < p) {
                    work.insert(nt);
                }
            }
        }
        Ok(Puiseux::from_terms(b.into_iter().map(|(t, c)| (t - v, c)), rel_prec.map(|p| p - v)))
    }

    /// Substitute `x -> c x^k` exponentwise (`k > 0`).
    pub fn map_exponents(&self, f: impl Fn(Q64) -> Q64) -> Self {
        Puiseux::from_terms(self.terms.iter().map(|(e, c)| (f(*e), c.clone())), self.prec.map(&f))
    }

    /// Known to be zero, or zero up to an order at least `threshold`.
    /// Fails when the question cannot be settled at the current precision.
    pub fn is_zero_certain(&self, threshold: Q64) -> Result<bool> {
        if self.has_terms() {
            return Ok(false);
        }
        match self.prec {
            None => Ok(true),
            Some(p) if p >= threshold => Ok(true),
            Some(p) => Err(Error::order(format!("cannot decide whether O(x^{}) vanishes", fmt_exp(p)))),
        }
    }

    /// All coefficients rational.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    pub fn coefficient_q(&self, e: Q64) -> Option<Q> {
        self.terms.get(&e).and_then(|c| c.to_rational())
    }
}

pub(crate) fn fmt_x_power(var: &str, e: Q64) -> String {
    if e.is_zero() {
        String::new()
    } else if e.is_one() {
        var.to_string()
    } else {
        format!("{var}^{}", fmt_exp(e))
    }
}

impl Puiseux {
    /// Text form using `var` for the variable.
    pub fn to_text(&self, var: &str) -> String {
        let mut terms: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| c.fmt_with(&fmt_x_power(var, *e)))
            .collect();
        if let Some(p) = self.prec {
            terms.push(format!("O({var}^{})", fmt_exp(p)));
        }
        join_terms(terms)
    }
}

impl fmt::Display for Puiseux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("x"))
    }
}

impl Ring for Puiseux {
    fn zero() -> Self {
        Puiseux::zero()
    }
    fn one() -> Self {
        Puiseux::one()
    }
    fn radd(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn rsub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn rmul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn rneg(&self) -> Self {
        self.neg()
    }
    fn mul_q(&self, q: &Q) -> Self {
        self.scale(&AlgebraicNumber::from_q(q.clone()))
    }
    fn is_exact_zero(&self) -> bool {
        Puiseux::is_exact_zero(self)
    }
    fn from_an(c: &AlgebraicNumber) -> Self {
        Puiseux::constant(c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::q64;

    fn an(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_i64(n)
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_x = Puiseux::from_terms([(q64(0, 1), an(1)), (q64(1, 1), an(-1))], None);
        let inv = one_minus_x.inv(q64(5, 1)).unwrap();
        assert_eq!(inv.prec(), Some(q64(5, 1)));
        for k in 0..5 {
            assert_eq!(inv.coeff(q64(k, 1)), an(1));
        }
        let prod = one_minus_x.mul(&inv);
        assert_eq!(prod.terms().len(), 1);
        assert_eq!(prod.coeff(q64(0, 1)), an(1));
    }

    #[test]
    fn fractional_inverse() {
        // x^(1/2) + x  -> x^(-1/2) (1 + x^(1/2))^-1
        let s = Puiseux::from_terms([(q64(1, 2), an(1)), (q64(1, 1), an(1))], None);
        let inv = s.inv(q64(2, 1)).unwrap();
        assert_eq!(inv.coeff(q64(-1, 2)), an(1));
        assert_eq!(inv.coeff(q64(0, 1)), an(-1));
        assert_eq!(inv.coeff(q64(1, 2)), an(1));
        assert_eq!(inv.prec(), Some(q64(3, 2)));
    }

    #[test]
    fn integrate_collects_log() {
        let s = Puiseux::from_terms([(q64(-1, 1), an(3)), (q64(2, 1), an(3))], None);
        let (i, l) = s.integrate();
        assert_eq!(l, an(3));
        assert_eq!(i.coeff(q64(3, 1)), an(1));
    }

    #[test]
    fn precision_of_products() {
        let a = Puiseux::from_terms([(q64(1, 1), an(1))], Some(q64(3, 1)));
        let b = Puiseux::from_terms([(q64(2, 1), an(1))], Some(q64(4, 1)));
        let p = a.mul(&b);
        assert_eq!(p.prec(), Some(q64(5, 1)));
        assert_eq!(p.coeff(q64(3, 1)), an(1));
    }
}
