//! Bivariate series: Laurent–Puiseux in `eps` with Puiseux coefficients
//! in `x`. Exponents of `eps` are rationals measured in units of `eps`
//! itself, so ramifying `eps` never rewrites stored data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::puiseux::{fmt_x_power, min_opt, Puiseux};
use crate::coeff::{fmt_exp, join_terms, AlgebraicNumber, Q, Q64};
use crate::error::{Error, Result};
use crate::linalg::Ring;

/// `sum_e c_e(x) eps^e + O(eps^prec)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BiSeries {
    terms: BTreeMap<Q64, Puiseux>,
    prec: Option<Q64>,
}

impl BiSeries {
    pub fn zero() -> Self {
        BiSeries::default()
    }

    pub fn one() -> Self {
        Self::from_x(Puiseux::one())
    }

    pub fn constant(c: AlgebraicNumber) -> Self {
        Self::from_x(Puiseux::constant(c))
    }

    pub fn from_x(p: Puiseux) -> Self {
        let mut s = BiSeries::zero();
        s.add_coeff(Q64::zero(), p);
        s
    }

    /// `c x^xe eps^ee`.
    pub fn monomial(c: AlgebraicNumber, xe: Q64, ee: Q64) -> Self {
        let mut s = BiSeries::zero();
        s.add_coeff(ee, Puiseux::monomial(c, xe));
        s
    }

    pub fn big_o(p: Q64) -> Self {
        BiSeries { terms: BTreeMap::new(), prec: Some(p) }
    }

    pub fn from_coeffs(it: impl IntoIterator<Item = (Q64, Puiseux)>, prec: Option<Q64>) -> Self {
        let mut s = BiSeries { terms: BTreeMap::new(), prec };
        for (e, c) in it {
            s.add_coeff(e, c);
        }
        s
    }

    pub fn add_coeff(&mut self, e: Q64, c: Puiseux) {
        if self.prec.is_some_and(|p| e >= p) || c.is_exact_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_exact_zero() {
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

    pub fn terms(&self) -> &BTreeMap<Q64, Puiseux> {
        &self.terms
    }

    pub fn prec(&self) -> Option<Q64> {
        self.prec
    }

    pub fn coeff(&self, e: Q64) -> Puiseux {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    /// Smallest `eps` exponent whose coefficient has a known nonzero term.
    pub fn val_eps(&self) -> Option<Q64> {
        self.terms.iter().find(|(_, c)| c.has_terms()).map(|(e, _)| *e)
    }

    fn lower_bound(&self) -> Option<Q64> {
        self.terms.keys().next().copied().or(self.prec)
    }

    /// Least common multiple of all exponent denominators, split into the
    /// `x` part and the `eps` part.
    pub fn ram(&self) -> (i64, i64) {
        let mut lx = 1i64;
        let mut le = 1i64;
        for (e, c) in &self.terms {
            le = num_integer::lcm(le, *e.denom());
            lx = num_integer::lcm(lx, c.ram());
        }
        (lx, le)
    }

    pub fn truncate_eps(&self, p: Q64) -> Self {
        BiSeries::from_coeffs(self.terms.iter().map(|(e, c)| (*e, c.clone())), min_opt(self.prec, Some(p)))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = BiSeries { terms: BTreeMap::new(), prec: min_opt(self.prec, o.prec) };
        for (e, c) in self.terms.iter().chain(o.terms.iter()) {
            out.add_coeff(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        BiSeries { terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(), prec: self.prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_exact_zero() || o.is_exact_zero() {
            return BiSeries::zero();
        }
        let la = self.lower_bound().unwrap();
        let lb = o.lower_bound().unwrap();
        let prec = min_opt(self.prec.map(|p| p + lb), o.prec.map(|p| p + la));
        let mut out = BiSeries { terms: BTreeMap::new(), prec };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea + eb;
                if prec.is_some_and(|p| e >= p) {
                    continue;
                }
                out.add_coeff(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &AlgebraicNumber) -> Self {
        BiSeries::from_coeffs(self.terms.iter().map(|(e, p)| (*e, p.scale(c))), self.prec)
    }

    pub fn mul_puiseux(&self, p: &Puiseux) -> Self {
        self.mul(&BiSeries::from_x(p.clone()))
    }

    /// Multiply by `x^xe eps^ee`.
    pub fn shift(&self, xe: Q64, ee: Q64) -> Self {
        BiSeries {
            terms: self.terms.iter().map(|(e, c)| (e + ee, c.shift(xe))).collect(),
            prec: self.prec.map(|p| p + ee),
        }
    }

    /// Derivative in `x`.
    pub fn derive(&self) -> Self {
        BiSeries::from_coeffs(self.terms.iter().map(|(e, c)| (*e, c.derive())), self.prec)
    }

    /// Multiplicative inverse, to `rel_eps` beyond the `eps` valuation and
    /// `rel_x` beyond each `x` valuation.
    pub fn inv(&self, rel_eps: Q64, rel_x: Q64) -> Result<Self> {
        let Some(e0) = self.val_eps() else {
            return Err(if self.is_exact_zero() {
                Error::DivisionByZero
            } else {
                Error::order("inverse of a bivariate series with no known terms")
            });
        };
        let c0i = self.terms[&e0].inv(rel_x)?;
        let steps: Vec<(Q64, Puiseux)> = self
            .terms
            .iter()
            .filter(|(e, _)| **e > e0)
            .map(|(e, c)| (e - e0, c.clone()))
            .collect();
        let mut rel_prec = self.prec.map(|p| p - e0);
        if !steps.is_empty() || rel_prec.is_some() {
            rel_prec = min_opt(rel_prec, Some(rel_eps));
        }
        let mut b: BTreeMap<Q64, Puiseux> = BTreeMap::new();
        let mut work: BTreeSet<Q64> = BTreeSet::new();
        work.insert(Q64::zero());
        while let Some(t) = work.pop_first() {
            let bt = if t.is_zero() {
                c0i.clone()
            } else {
                let mut acc = Puiseux::zero();
                for (s, cs) in &steps {
                    if *s > t {
                        break;
                    }
                    if let Some(prev) = b.get(&(t - s)) {
                        acc = acc.add(&cs.mul(prev));
                    }
                }
                acc.mul(&c0i).neg()
            };
            if !bt.is_exact_zero() {
                b.insert(t, bt);
            }
            for (s, _) in &steps {
                let nt = t + s;
                if rel_prec.is_none_or(|p| nt < p) {
                    work.insert(nt);
                }
            }
        }
        Ok(BiSeries::from_coeffs(b.into_iter().map(|(t, c)| (t - e0, c)), rel_prec.map(|p| p - e0)))
    }

    /// Apply `f` to every `(x exponent, eps exponent)` pair. `f` must be
    /// affine and increasing in the `eps` exponent for fixed `x` exponent;
    /// precision markers are mapped with `fx` (for `x`) and `fe` (for `eps`).
    pub fn remap(&self, f: impl Fn(Q64, Q64) -> (Q64, Q64)) -> Result<Self> {
        let mut out = BiSeries::zero();
        for (e, c) in &self.terms {
            if c.prec().is_some() {
                return Err(Error::pre("remapping needs exact x coefficients"));
            }
            for (xe, a) in c.terms() {
                let (nx, ne) = f(*xe, *e);
                out.add_coeff(ne, Puiseux::monomial(a.clone(), nx));
            }
        }
        if self.prec.is_some() {
            return Err(Error::pre("remapping needs an exact series"));
        }
        Ok(out)
    }

    /// Unknown-only coefficients (no known term, finite `x` precision).
    pub fn has_unknown_coeffs(&self) -> bool {
        self.terms.values().any(|c| !c.has_terms())
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none() && self.terms.values().all(|c| c.is_exact())
    }
}

impl BiSeries {
    pub fn to_text(&self, xvar: &str, evar: &str) -> String {
        let mut out: Vec<String> = Vec::new();
        for (e, c) in &self.terms {
            let ep = fmt_x_power(evar, *e);
            for (xe, a) in c.terms() {
                let xp = fmt_x_power(xvar, *xe);
                let mono = match (xp.is_empty(), ep.is_empty()) {
                    (true, true) => String::new(),
                    (false, true) => xp,
                    (true, false) => ep.clone(),
                    (false, false) => format!("{xp}*{ep}"),
                };
                out.push(a.fmt_with(&mono));
            }
            if let Some(p) = c.prec() {
                let o = format!("O({xvar}^{})", fmt_exp(p));
                out.push(if ep.is_empty() { o } else { format!("{o}*{ep}") });
            }
        }
        if let Some(p) = self.prec {
            out.push(format!("O({evar}^{})", fmt_exp(p)));
        }
        join_terms(out)
    }
}

impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("x", "eps"))
    }
}

impl Ring for BiSeries {
    fn zero() -> Self {
        BiSeries::zero()
    }
    fn one() -> Self {
        BiSeries::one()
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
        BiSeries::is_exact_zero(self)
    }
    fn from_an(c: &AlgebraicNumber) -> Self {
        BiSeries::constant(c.clone())
    }
}

impl BiSeries {
    pub fn is_one(&self) -> bool {
        self.prec.is_none()
            && self.terms.len() == 1
            && self.terms.get(&Q64::zero()).is_some_and(|c| {
                c.is_exact() && c.terms().len() == 1 && c.coeff(Q64::zero()).is_one()
            })
    }

    pub fn x_exponent_bounds(&self) -> Option<(Q64, Q64)> {
        let mut lo: Option<Q64> = None;
        let mut hi: Option<Q64> = None;
        for c in self.terms.values() {
            for e in c.terms().keys() {
                lo = Some(lo.map_or(*e, |l: Q64| l.min(*e)));
                hi = Some(hi.map_or(*e, |h: Q64| h.max(*e)));
            }
        }
        lo.zip(hi)
    }

    pub fn unit_eps() -> Q64 {
        Q64::one()
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
    fn inverse_of_unit_in_eps() {
        // 1 + x eps
        let s = BiSeries::one().add(&BiSeries::monomial(an(1), q64(1, 1), q64(1, 1)));
        let inv = s.inv(q64(4, 1), q64(8, 1)).unwrap();
        for k in 0..4 {
            let c = inv.coeff(q64(k, 1));
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(c.coeff(q64(k, 1)), an(sign));
        }
        let p = s.mul(&inv);
        assert_eq!(p.prec(), Some(q64(4, 1)));
        assert!(p.coeff(q64(0, 1)).coeff(q64(0, 1)).is_one());
        assert_eq!(p.terms().len(), 1);
    }

    #[test]
    fn display_has_eps_and_x() {
        let s = BiSeries::monomial(an(2), q64(3, 2), q64(-1, 3));
        assert_eq!(s.to_string(), "2*x^(3/2)*eps^(-1/3)");
    }
}
