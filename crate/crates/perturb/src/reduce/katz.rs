//! Exponential order in `eps` and the ramification that makes the reduced
//! eps-rank integral.

use num_traits::Zero;

use super::rank::{eps_rank_reduce, RankReduction, ReduceMode};
use crate::coeff::Q64;
use crate::error::{Error, Result};
use crate::linalg::valuation::rank;
use crate::linalg::{charpoly, Orders, PerturbedSystem};
use crate::series::{BiSeries, Puiseux};

#[derive(Clone, Debug)]
pub struct ExpOrderResult {
    /// Exponential order `omega >= 0`.
    pub omega: Q64,
    /// Terms `(power of X, coefficient in x)` of the edge polynomial, in
    /// increasing powers, normalised to start at `X^0`.
    pub edge: Vec<(usize, Puiseux)>,
    /// Indices `i` of the characteristic coefficients on the edge.
    pub support: Vec<usize>,
    /// Denominator of `omega` measured in the working parameter.
    pub ramification: i64,
}

impl ExpOrderResult {
    /// The edge polynomial, highest power first, e.g. `X^2 + x^-1`.
    pub fn edge_text(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.edge.iter().rev() {
            let coeff = c.to_text("x");
            let mono = match k {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{k}"),
            };
            parts.push(match (coeff.as_str(), mono.is_empty()) {
                (_, true) => coeff.clone(),
                ("1", false) => mono,
                ("-1", false) => format!("-{mono}"),
                (_, false) if c.terms().len() == 1 => format!("{coeff}*{mono}"),
                (_, false) => format!("({coeff})*{mono}"),
            });
        }
        let mut out = String::new();
        for (i, p) in parts.into_iter().enumerate() {
            if i == 0 {
                out.push_str(&p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&p);
            }
        }
        out
    }
}

/// `omega = max(0, max_i -val_eps(alpha_i)/(n - i))` over the characteristic
/// coefficients `alpha_i` of the raw matrix, with the polynomial built from
/// the coefficients on the supporting line.
pub fn exp_order_system(sys: &PerturbedSystem, _ord: &Orders) -> Result<ExpOrderResult> {
    let n = sys.n();
    let alpha: Vec<BiSeries> = charpoly(&sys.m);
    let mut omega = Q64::zero();
    for (i, a) in alpha.iter().enumerate().take(n) {
        if let Some(v) = a.val_eps() {
            let w = -v / Q64::from_integer((n - i) as i64);
            if w > omega {
                omega = w;
            }
        }
    }
    // Every coefficient that could lie on or below the line must be known.
    for (i, a) in alpha.iter().enumerate().take(n) {
        let line = -omega * Q64::from_integer((n - i) as i64);
        if a.prec().is_some_and(|p| p <= line) {
            return Err(Error::order(format!("characteristic coefficient {i} is unknown at eps^{line}")));
        }
        if a.coeff(line).prec().is_some() && !a.coeff(line).has_terms() {
            return Err(Error::order(format!("characteristic coefficient {i} is undecided on the edge")));
        }
    }
    let mut support = Vec::new();
    for (i, a) in alpha.iter().enumerate() {
        let line = -omega * Q64::from_integer((n - i) as i64);
        if a.coeff(line).has_terms() && a.val_eps() == Some(line) {
            support.push(i);
        }
    }
    let i0 = support.first().copied().unwrap_or(n);
    let edge = support
        .iter()
        .map(|&i| (i - i0, alpha[i].coeff(-omega * Q64::from_integer((n - i) as i64))))
        .collect();
    let ramification = (omega * Q64::from_integer(sys.d)).denom().to_owned();
    Ok(ExpOrderResult { omega, edge, support, ramification })
}

/// Smallest `k` with `k >= n / (h - 1 + r/n)`, where `h` and `r` are the
/// eps-rank and the rank of `A_0(x)` of an irreducible system.
pub fn katz_ramify_degree(sys: &PerturbedSystem, ord: &Orders) -> Result<i64> {
    let n = sys.n() as i64;
    let h = sys.rep.h;
    if h < 1 {
        return Err(Error::pre("ramification rule needs a positive eps-rank"));
    }
    let r = rank(&sys.leading(), ord)? as i64;
    if h + r > n {
        return Ok(1);
    }
    // n / (h - 1 + r/n) = n^2 / (n (h - 1) + r)
    let den = n * (h - 1) + r;
    if den <= 0 {
        return Err(Error::pre("ramification rule is undefined for h = 1 and r = 0"));
    }
    Ok(((n * n + den - 1) / den).max(1))
}

/// Ramify `eps = eps~^k` (the smallest admissible `k` unless one is
/// given) and rank-reduce the result.
pub fn katz_ramify(sys: &PerturbedSystem, ord: &Orders, k: Option<i64>) -> Result<(i64, RankReduction)> {
    let k = match k {
        Some(k) if k >= 1 => k,
        Some(_) => return Err(Error::pre("ramification index must be positive")),
        None => katz_ramify_degree(sys, ord)?,
    };
    let ram = sys.ramify(k);
    let red = eps_rank_reduce(&ram, ord, ReduceMode::Differential)?;
    Ok((k, red))
}
