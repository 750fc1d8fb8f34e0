//! Scalar equations `D^n f + a_{n-1} D^{n-1} f + ... + a_0 f = 0` with
//! coefficients in `x` and `eps`: the eps-polygon, the exponential order,
//! and the conversion into an eps-irreducible first-order system.

use num_traits::{One, Zero};

use crate::coeff::{join_terms, Q64};
use crate::error::{Error, Result};
use crate::linalg::{shear, Matrix, PerturbedSystem, Rep};
use crate::series::text::power;
use crate::series::{BiSeries, Puiseux};

/// A monic scalar equation. `coeffs[i]` is the raw coefficient of `D^i f`
/// (so `coeffs[n] = 1`); `sigma` is the slope of the parameter
/// `xi = x^sigma eps` used to read off `x`-coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarEquation {
    pub sigma: Q64,
    pub coeffs: Vec<BiSeries>,
}

/// One edge of the eps-polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonEdge {
    pub slope: Q64,
    /// Indices `i` whose points lie on the edge, increasing.
    pub indices: Vec<usize>,
    /// `E(X) = sum a_{i, nu_i}(x) X^i` over the indices on the edge; entry
    /// `k` is the coefficient of `X^k`.
    pub poly: Vec<Puiseux>,
}

impl PolygonEdge {
    pub fn poly_text(&self) -> String {
        xpoly_text(&self.poly, "X")
    }
}

/// Render `sum c_k(x) X^k`, highest power first.
pub fn xpoly_text(p: &[Puiseux], var: &str) -> String {
    let mut terms = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        let xv = power(var, Q64::from_integer(k as i64));
        for (e, a) in c.terms().iter().rev() {
            let xp = power("x", *e);
            let mono = [xp, xv.clone()].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join("*");
            terms.push(a.fmt_with(&mono));
        }
    }
    join_terms(terms)
}

/// `a` and `b` agree up to a nonzero constant factor and a power of the
/// indeterminate.
pub fn equivalent_up_to_unit_monomial(a: &[Puiseux], b: &[Puiseux]) -> bool {
    let strip = |p: &[Puiseux]| -> Vec<Puiseux> {
        let start = p.iter().position(|c| !c.is_exact_zero()).unwrap_or(p.len());
        let mut v: Vec<Puiseux> = p[start..].to_vec();
        while v.last().is_some_and(|c| c.is_exact_zero()) {
            v.pop();
        }
        v
    };
    let (a, b) = (strip(a), strip(b));
    if a.len() != b.len() || a.is_empty() {
        return a.is_empty() && b.is_empty();
    }
    let (Some((ea, ca)), Some((eb, cb))) = (a[0].leading(), b[0].leading()) else { return false };
    if ea != eb {
        return false;
    }
    let Ok(c) = cb.checked_div(ca) else { return false };
    a.iter().zip(b.iter()).all(|(x, y)| x.scale(&c) == *y)
}

/// Invariants of the eps-Moser construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarInvariants {
    pub kappa: i64,
    pub nu: i64,
    pub mu: Q64,
    pub gamma: Vec<i64>,
    pub i0: usize,
}

impl ScalarEquation {
    /// Normalise by the leading coefficient.
    pub fn new(sigma: Q64, coeffs: Vec<BiSeries>, rel_eps: Q64, rel_x: Q64) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::pre("scalar equation needs order at least one"));
        }
        let lead = coeffs.last().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.inv(rel_eps, rel_x)?;
            coeffs = coeffs.iter().map(|c| c.mul(&inv)).collect();
        }
        Ok(ScalarEquation { sigma, coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `val_eps(a_i)`, or `None` for a zero coefficient.
    pub fn valuations(&self) -> Vec<Option<Q64>> {
        self.coeffs.iter().map(|c| c.val_eps()).collect()
    }

    /// `a_{i, nu_i}(x)`: the lowest coefficient read in the parameter `xi`.
    pub fn leading_x_coeff(&self, i: usize) -> Puiseux {
        match self.coeffs[i].val_eps() {
            None => Puiseux::zero(),
            Some(v) => self.coeffs[i].coeff(v).shift(-self.sigma * v),
        }
    }

    /// Edges of the eps-polygon with positive slope, left to right.
    pub fn eps_polygon(&self) -> Vec<PolygonEdge> {
        let n = self.order();
        let pts: Vec<(usize, Q64)> =
            self.valuations().iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v))).collect();
        // Start at the rightmost point of minimal valuation.
        let minv = pts.iter().map(|p| p.1).min().unwrap();
        let start = pts.iter().filter(|p| p.1 == minv).map(|p| p.0).max().unwrap();
        let mut edges = Vec::new();
        let mut cur = start;
        while cur < n {
            let (ci, cv) = pts.iter().find(|p| p.0 == cur).copied().unwrap();
            let mut best: Option<Q64> = None;
            for &(i, v) in pts.iter().filter(|p| p.0 > ci) {
                let s = (v - cv) / Q64::from_integer((i - ci) as i64);
                if best.is_none_or(|b| s < b) {
                    best = Some(s);
                }
            }
            let slope = best.unwrap();
            let on: Vec<usize> = pts
                .iter()
                .filter(|&&(i, v)| i >= ci && v - cv == slope * Q64::from_integer((i - ci) as i64))
                .map(|p| p.0)
                .collect();
            let last = *on.last().unwrap();
            let mut poly = vec![Puiseux::zero(); last + 1];
            for &i in &on {
                poly[i] = self.leading_x_coeff(i);
            }
            edges.push(PolygonEdge { slope, indices: on, poly });
            cur = last;
        }
        edges
    }

    /// Exponential order `max(0, max_{i<n} -val(a_i)/(n-i))`.
    pub fn exp_order(&self) -> Q64 {
        let n = self.order();
        let mut w = Q64::zero();
        for (i, v) in self.valuations().iter().enumerate().take(n) {
            if let Some(v) = v {
                let c = -*v / Q64::from_integer((n - i) as i64);
                if c > w {
                    w = c;
                }
            }
        }
        w
    }

    fn int_valuations(&self) -> Result<Vec<Option<i64>>> {
        self.valuations()
            .into_iter()
            .map(|v| match v {
                None => Ok(None),
                Some(v) if v.is_integer() => Ok(Some(v.to_integer())),
                Some(_) => Err(Error::pre("eps valuations must be integers")),
            })
            .collect()
    }

    /// `kappa`, `nu`, `mu = kappa + nu/n`, the broken line `gamma`, and `i0`.
    pub fn invariants(&self) -> Result<ScalarInvariants> {
        let n = self.order() as i64;
        let vals = self.int_valuations()?;
        let mut kappa = 0i64;
        for (i, v) in vals.iter().enumerate() {
            if let Some(v) = v {
                let k = n - i as i64;
                if k > 0 && *v < 0 {
                    // smallest rho with v + k rho >= 0
                    let need = (-*v + k - 1) / k;
                    kappa = kappa.max(need);
                }
            }
        }
        if kappa == 0 {
            return Err(Error::pre("no eps-singularity: every coefficient is holomorphic in eps"));
        }
        let mut nu = i64::MIN;
        for (i, v) in vals.iter().enumerate() {
            if let Some(v) = v {
                nu = nu.max((i as i64 - n) * (kappa - 1) - v);
            }
        }
        let gamma: Vec<i64> = (0..n).map(|i| (kappa * (i - n)).max((kappa - 1) * (i - n) - nu)).collect();
        let i0 = (n - nu) as usize;
        Ok(ScalarInvariants { kappa, nu, mu: Q64::from_integer(kappa) + Q64::new(nu, n), gamma, i0 })
    }

    /// Raw companion system for `(f, Df, ..., D^{n-1} f)`.
    pub fn companion(&self) -> Result<PerturbedSystem> {
        let n = self.order();
        let m = Matrix::from_fn(n, n, |i, j| {
            if i + 1 == j {
                BiSeries::one()
            } else if i == n - 1 {
                self.coeffs[j].neg()
            } else {
                BiSeries::zero()
            }
        });
        PerturbedSystem::from_raw(m, 1)
    }

    /// The eps-irreducible system `x xi^kappa dW/dx = A(x, xi) W` with
    /// `w_{i+1} = xi^{gamma_i} D^i f`, viewed with `h = kappa`,
    /// `sigma = sigma_a`, `p = 1`.
    pub fn to_irreducible_system(&self) -> Result<(PerturbedSystem, ScalarInvariants)> {
        let inv = self.invariants()?;
        let comp = self.companion()?;
        // F = T W with T = diag(xi^-gamma_i).
        let exps: Vec<(Q64, Q64)> = inv
            .gamma
            .iter()
            .map(|&g| {
                let g = Q64::from_integer(-g);
                (self.sigma * g, g)
            })
            .collect();
        let (t, ti) = shear(&exps);
        let mut sys = crate::linalg::gauge_apply(&comp, &t, &ti)?;
        let rep = Rep { h: inv.kappa, sigma: self.sigma, p: Q64::one() };
        if !sys.is_holomorphic_in(&rep) {
            return Err(Error::pre("constructed system is not holomorphic in the expected view"));
        }
        sys.rep = rep;
        Ok((sys, inv))
    }
}

/// Build the scalar equation from coefficient expressions `a_0 .. a_n`.
pub fn from_coeffs(sigma: Q64, coeffs: Vec<BiSeries>) -> Result<ScalarEquation> {
    ScalarEquation::new(sigma, coeffs, Q64::from_integer(16), Q64::from_integer(16))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::q64;
    use crate::series::text::{parse_linear, ParseCtx};

    fn eq(src: &str, sigma: Q64) -> ScalarEquation {
        let ctx = ParseCtx { sigma: Some(sigma), ..Default::default() };
        from_coeffs(sigma, parse_linear(src, 1, &ctx).unwrap()).unwrap()
    }

    #[test]
    fn polygon_of_third_order_example() {
        let e = eq("D^3 f - (x/xi^2) D^2 f - (1/xi^5) f", q64(0, 1));
        let edges = e.eps_polygon();
        let slopes: Vec<Q64> = edges.iter().map(|e| e.slope).collect();
        assert_eq!(slopes, vec![q64(3, 2), q64(2, 1)]);
        assert_eq!(e.exp_order(), q64(2, 1));
        assert_eq!(edges[0].poly_text(), "-x*X^2 - 1");
        assert_eq!(edges[1].poly_text(), "X^3 - x*X^2");
    }

    #[test]
    fn fifth_order_invariants() {
        let e = eq(
            "D^5 f + (x xi^-3 + x) D^4 f + 2 x^2 xi^-1 D^3 f + (xi^-3 + 1) D^2 f + (-3 xi^-4 + x^2 xi^-2) D f - xi^-2 f",
            q64(-1, 1),
        );
        let inv = e.invariants().unwrap();
        assert_eq!(inv.kappa, 3);
        assert_eq!(inv.nu, 1);
        assert_eq!(inv.gamma, vec![-11, -9, -7, -5, -3]);
        assert_eq!(inv.mu, q64(16, 5));
        assert_eq!(inv.i0, 4);
    }
}
