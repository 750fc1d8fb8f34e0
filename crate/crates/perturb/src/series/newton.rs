//! The half-plane of maximal slope that contains the support of a series,
//! measured in the `(eps exponent, x exponent)` plane.

use num_traits::Zero;

use super::BiSeries;
use crate::coeff::Q64;

/// Normal-form data of a bivariate series or matrix.
///
/// With `xi = x^sigma eps` (both measured per unit of `eps`), the series
/// equals `x^-p xi^nu a(x, xi)` with `a` holomorphic in `x` and
/// `a(x, 0) != 0`, where `nu` is the `eps` valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NewtonLine {
    pub nu: Q64,
    pub sigma: Q64,
    pub p: Q64,
}

/// Snap `v` down onto the lattice `(1/s) Z`.
fn snap_down(v: Q64, s: i64) -> Q64 {
    let scaled = v * Q64::from_integer(s);
    Q64::new(scaled.floor().to_integer(), s)
}

/// Normal-form data for the union of supports of `entries`. Only known
/// terms take part. `None` when every entry is (known) zero.
///
/// The slope is the largest value not exceeding zero that keeps every
/// known term on or above the line through the leftmost point, snapped
/// down onto the lattice `(1/s) Z` where `s` is the least common multiple
/// of the `x` exponent denominators.
pub fn newton_line<'a>(entries: impl IntoIterator<Item = &'a BiSeries>) -> Option<NewtonLine> {
    let mut pts: std::collections::BTreeMap<Q64, Q64> = std::collections::BTreeMap::new();
    let mut s = 1i64;
    for f in entries {
        let (sx, _) = f.ram();
        s = num_integer::lcm(s, sx);
        for (e, c) in f.terms() {
            if let Some(v) = c.val() {
                let slot = pts.entry(*e).or_insert(v);
                if v < *slot {
                    *slot = v;
                }
            }
        }
    }
    let (&nu, &a0) = pts.iter().next()?;
    let mut sigma = Q64::zero();
    let mut first = true;
    for (e, a) in pts.iter().skip(1) {
        let slope = (a - a0) / (e - nu);
        if first || slope < sigma {
            sigma = slope;
            first = false;
        }
    }
    if sigma > Q64::zero() {
        sigma = Q64::zero();
    }
    let sigma = snap_down(sigma, s);
    let p = pts.iter().map(|(e, a)| sigma * e - a).max().unwrap();
    Some(NewtonLine { nu, sigma, p })
}

/// Normal-form data of a single series.
pub fn normalize(f: &BiSeries) -> Option<NewtonLine> {
    newton_line(std::iter::once(f))
}
