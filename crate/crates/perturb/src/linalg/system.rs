//! Perturbed linear systems `dF/dx = M(x, eps) F` stored in raw form, with
//! the normal-form view `xi^h x^p dF/dx = A(x, xi) F`,
//! `xi = x^sigma eps^(1/d)`.

use std::fmt;

use num_traits::Zero;

use super::{Matrix, Orders};
use crate::coeff::{AlgebraicNumber as An, Q64};
use crate::error::{Error, Result};
use crate::series::{min_opt, newton_line, BiSeries, Puiseux};

/// Exponents of a normal-form view. `sigma` is measured per unit of the
/// ramified parameter `eps^(1/d)`, `h` counts powers of that parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rep {
    pub h: i64,
    pub sigma: Q64,
    pub p: Q64,
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={} sigma={} p={}", self.h, self.sigma, self.p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedSystem {
    /// Raw matrix `M` of `dF/dx = M F`.
    pub m: Matrix<BiSeries>,
    /// Ramification index of `eps`: the working parameter is `eps^(1/d)`.
    pub d: i64,
    /// Current normal-form view.
    pub rep: Rep,
}

fn eps_den_lcm(m: &Matrix<BiSeries>, d: i64) -> i64 {
    let mut l = d;
    for e in m.entries() {
        l = num_integer::lcm(l, e.ram().1);
        if let Some(p) = e.prec() {
            l = num_integer::lcm(l, *p.denom());
        }
    }
    l
}

impl PerturbedSystem {
    /// Build from a raw matrix and pick the normal form of maximal slope.
    pub fn from_raw(m: Matrix<BiSeries>, d: i64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("system matrix must be square".into()));
        }
        let d = eps_den_lcm(&m, d);
        let rep = Self::normal_rep(&m, d);
        Ok(PerturbedSystem { m, d, rep })
    }

    /// Build from `xi^h x^p dF/dx = A(x, xi) F` given `A` as a raw
    /// bivariate matrix in `(x, xi)` (the `eps` slot holds powers of `xi`,
    /// in units of the ramified parameter).
    pub fn from_normal_form(h: i64, sigma: Q64, p: Q64, d: i64, a: &Matrix<BiSeries>) -> Result<Self> {
        let m = a.try_map(|f| xi_to_raw(f, h, sigma, p, d))?;
        let d = eps_den_lcm(&m, d);
        let mut s = PerturbedSystem { m, d, rep: Rep { h, sigma, p } };
        s.renormalize();
        Ok(s)
    }

    fn normal_rep(m: &Matrix<BiSeries>, d: i64) -> Rep {
        match newton_line(m.entries()) {
            None => Rep { h: 0, sigma: Q64::zero(), p: Q64::zero() },
            Some(nl) => {
                let hq = -nl.nu * Q64::from_integer(d);
                debug_assert!(hq.is_integer(), "eps exponents off the lattice");
                Rep { h: hq.to_integer(), sigma: nl.sigma / Q64::from_integer(d), p: nl.p }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.m.entries().all(|e| e.val_eps().is_none())
    }

    /// Re-derive the maximal-slope normal form (and the ramification lattice).
    pub fn renormalize(&mut self) {
        self.d = eps_den_lcm(&self.m, self.d);
        self.rep = Self::normal_rep(&self.m, self.d);
    }

    /// Use `eps = eps~^k`: the stored data is unchanged, only the working
    /// parameter and the view.
    pub fn ramify(&self, k: i64) -> Self {
        let mut s = self.clone();
        s.d *= k;
        s.renormalize();
        s
    }

    /// `sigma` expressed per unit of `eps` itself.
    pub fn sigma_eps(&self) -> Q64 {
        self.rep.sigma * Q64::from_integer(self.d)
    }

    /// Raw exponents `(x, eps)` of `xi^k` in the view `rep`.
    pub fn xi_power(&self, rep: &Rep, k: i64) -> (Q64, Q64) {
        let k = Q64::from_integer(k);
        (rep.sigma * k, k / Q64::from_integer(self.d))
    }

    /// Coefficient `A_k(x)` of `xi^k` in the view `rep`.
    pub fn coeff_matrix(&self, rep: &Rep, k: i64) -> Matrix<Puiseux> {
        let kk = k - rep.h;
        let e = Q64::from_integer(kk) / Q64::from_integer(self.d);
        let shift = rep.p - rep.sigma * Q64::from_integer(kk);
        self.m.map(|f| f.coeff(e).shift(shift))
    }

    /// True when every `A_k` with `k <= kmax` is holomorphic in `x` and no
    /// raw term lies below `xi^-h`.
    pub fn is_holomorphic_in(&self, rep: &Rep) -> bool {
        let dq = Q64::from_integer(self.d);
        for f in self.m.entries() {
            for (e, c) in f.terms() {
                let kk = *e * dq;
                if !kk.is_integer() || kk.to_integer() < -rep.h {
                    return false;
                }
                let shift = rep.p - rep.sigma * kk;
                if c.val().is_some_and(|v| v + shift < Q64::zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Absolute `eps` precision of the raw matrix (`None` when exact).
    pub fn eps_prec(&self) -> Option<Q64> {
        self.m.entries().fold(None, |acc, e| min_opt(acc, e.prec()))
    }

    /// Number of `xi` coefficients known exactly in the current view.
    pub fn known_xi_terms(&self) -> Option<i64> {
        self.eps_prec().map(|p| (p * Q64::from_integer(self.d)).ceil().to_integer() + self.rep.h)
    }

    /// `A_0(x)` and `A_{0,0}` for the current view.
    pub fn leading(&self) -> Matrix<Puiseux> {
        self.coeff_matrix(&self.rep, 0)
    }

    pub fn leading_constant(&self) -> Matrix<An> {
        self.leading().map(|p| p.coeff(Q64::zero()))
    }

    pub fn identity_transform(n: usize) -> Matrix<BiSeries> {
        Matrix::identity(n)
    }

    /// Truncate all entries at absolute `eps` order `p`.
    pub fn truncate_eps(&self, p: Q64) -> Self {
        let m = self.m.map(|f| f.truncate_eps(p));
        let mut s = PerturbedSystem { m, d: self.d, rep: self.rep };
        s.renormalize();
        s
    }

    /// Default truncation for derived expansions: `orders.eps_terms`
    /// powers of the working parameter past the leading one.
    pub fn eps_window(&self, ord: &Orders) -> Q64 {
        Q64::from_integer(ord.eps_terms) / Q64::from_integer(self.d)
    }

    /// Text rendering of `A(x, xi)` for the current view.
    pub fn normal_form_text(&self, kmax: i64) -> Vec<Vec<String>> {
        let n = self.n();
        let mut out = vec![vec![String::new(); n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut terms: Vec<String> = Vec::new();
                for k in 0..=kmax {
                    let a = self.coeff_matrix(&self.rep, k);
                    let c = a.get(i, j);
                    let xip = crate::series::text::power("xi", Q64::from_integer(k));
                    for (e, v) in c.terms() {
                        let xp = crate::series::text::power("x", *e);
                        let mono = [xp, xip.clone()].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join("*");
                        terms.push(v.fmt_with(&mono));
                    }
                    if let Some(pr) = c.prec() {
                        terms.push(format!("O(x^{})*{}", crate::coeff::fmt_exp(pr), if xip.is_empty() { "1".into() } else { xip.clone() }));
                    }
                }
                *cell = crate::coeff::join_terms(terms);
            }
        }
        out
    }
}

/// Convert an entry of `A(x, xi)` (eps slot = powers of `xi` in units of
/// the ramified parameter) into raw form `x^-p xi^-h A`.
fn xi_to_raw(f: &BiSeries, h: i64, sigma: Q64, p: Q64, d: i64) -> Result<BiSeries> {
    let dq = Q64::from_integer(d);
    let mut out = BiSeries::zero();
    for (k, c) in f.terms() {
        let kk = *k - Q64::from_integer(h);
        out.add_coeff(kk / dq, c.shift(-p + sigma * kk));
    }
    if let Some(pr) = f.prec() {
        let kk = pr - Q64::from_integer(h);
        out = out.truncate_eps(kk / dq);
    }
    Ok(out)
}

/// Raw monomial `c xi^k x^a` for a view.
pub fn xi_monomial(c: An, rep: &Rep, d: i64, k: i64, a: Q64) -> BiSeries {
    let kq = Q64::from_integer(k);
    BiSeries::monomial(c, a + rep.sigma * kq, kq / Q64::from_integer(d))
}

impl fmt::Display for PerturbedSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d={} {}", self.d, self.rep)?;
        for i in 0..self.n() {
            let row: Vec<String> = (0..self.n()).map(|j| self.m.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::q64;

    fn mono(c: i64, xe: Q64, ee: Q64) -> BiSeries {
        BiSeries::monomial(An::from_i64(c), xe, ee)
    }

    #[test]
    fn intro_after_diagonal_shear_has_slope_minus_three() {
        // eps^-1 [[0, x^(3/2)], [x^(3/2) - x^(-3/2) eps, -3/2 x^-1 eps]]
        let z = BiSeries::zero;
        let m = Matrix::from_rows(vec![
            vec![z(), mono(1, q64(3, 2), q64(-1, 1))],
            vec![
                mono(1, q64(3, 2), q64(-1, 1)).add(&mono(-1, q64(-3, 2), q64(0, 1))),
                BiSeries::monomial(An::from_frac(-3, 2), q64(-1, 1), q64(0, 1)),
            ],
        ]);
        let s = PerturbedSystem::from_raw(m, 1).unwrap();
        assert_eq!(s.rep, Rep { h: 1, sigma: q64(-3, 1), p: q64(3, 2) });
        let a0 = s.leading_constant();
        assert!(a0.get(0, 1).is_one() && a0.get(1, 0).is_one());
        assert!(s.is_holomorphic_in(&s.rep));
    }

    #[test]
    fn normal_form_round_trip() {
        // xi^2 x^5 dF/dx = (1 + xi) F with sigma = -3.
        let a = Matrix::from_rows(vec![vec![mono(1, q64(0, 1), q64(0, 1)).add(&mono(1, q64(0, 1), q64(1, 1)))]]);
        let s = PerturbedSystem::from_normal_form(2, q64(-3, 1), q64(5, 1), 1, &a).unwrap();
        assert_eq!(s.rep, Rep { h: 2, sigma: q64(-3, 1), p: q64(5, 1) });
        let raw = s.m.get(0, 0);
        assert_eq!(raw.coeff(q64(-2, 1)).coeff(q64(1, 1)), An::one());
        assert_eq!(raw.coeff(q64(-1, 1)).coeff(q64(-2, 1)), An::one());
    }
}
