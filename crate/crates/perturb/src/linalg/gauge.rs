//! Gauge transformations `F = T G`:
//! `M -> T^-1 M T - T^-1 dT/dx`.

use num_traits::Zero;

use super::{Matrix, PerturbedSystem};
use crate::coeff::Q64;
use crate::error::{Error, Result};
use crate::series::{BiSeries, Puiseux};

/// Apply a gauge transformation given `T` and its inverse.
pub fn gauge_apply(sys: &PerturbedSystem, t: &Matrix<BiSeries>, tinv: &Matrix<BiSeries>) -> Result<PerturbedSystem> {
    let m = gauge_raw(&sys.m, t, tinv);
    PerturbedSystem::from_raw(m, sys.d)
}

/// Raw form of [`gauge_apply`].
pub fn gauge_raw(m: &Matrix<BiSeries>, t: &Matrix<BiSeries>, tinv: &Matrix<BiSeries>) -> Matrix<BiSeries> {
    let dt = t.map(|f| f.derive());
    let mt = m.mul(t);
    tinv.mul(&mt).sub(&tinv.mul(&dt))
}

/// Lift an `x`-only matrix to bivariate entries.
pub fn lift_x(t: &Matrix<Puiseux>) -> Matrix<BiSeries> {
    t.map(|p| BiSeries::from_x(p.clone()))
}

/// Constant similarity `P^-1 M P`.
pub fn similarity(sys: &PerturbedSystem, p: &Matrix<BiSeries>, pinv: &Matrix<BiSeries>) -> Result<PerturbedSystem> {
    let m = pinv.mul(&sys.m).mul(p);
    PerturbedSystem::from_raw(m, sys.d)
}

/// Inverse of a bivariate matrix by elimination with pivots of lowest
/// `(eps, x)` valuation. `rel_eps` and `rel_x` bound generated expansions.
pub fn inverse(t: &Matrix<BiSeries>, rel_eps: Q64, rel_x: Q64) -> Result<Matrix<BiSeries>> {
    let n = t.rows();
    if !t.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let mut a = t.clone();
    let mut b = Matrix::<BiSeries>::identity(n);
    for c in 0..n {
        let mut best: Option<(Q64, Q64, usize)> = None;
        for r in c..n {
            let e = a.get(r, c);
            if let Some(ve) = e.val_eps() {
                let vx = e.coeff(ve).val().unwrap_or(Q64::zero());
                if best.as_ref().is_none_or(|(be, bx, _)| (ve, vx) < (*be, *bx)) {
                    best = Some((ve, vx, r));
                }
            }
        }
        let Some((_, _, r)) = best else { return Err(Error::NotInvertible) };
        a.swap_rows(r, c);
        b.swap_rows(r, c);
        let inv = a.get(c, c).inv(rel_eps, rel_x)?;
        for j in 0..n {
            let v = a.get(c, j).mul(&inv);
            a.set(c, j, v);
            let w = b.get(c, j).mul(&inv);
            b.set(c, j, w);
        }
        for r in 0..n {
            if r == c {
                continue;
            }
            let f = a.get(r, c).clone();
            if f.is_exact_zero() {
                continue;
            }
            for j in 0..n {
                let v = a.get(r, j).sub(&f.mul(a.get(c, j)));
                a.set(r, j, v);
                let w = b.get(r, j).sub(&f.mul(b.get(c, j)));
                b.set(r, j, w);
            }
        }
    }
    Ok(b)
}

/// Diagonal shear `diag(x^a_i eps^b_i)` and its exact inverse.
pub fn shear(exps: &[(Q64, Q64)]) -> (Matrix<BiSeries>, Matrix<BiSeries>) {
    use crate::coeff::AlgebraicNumber as An;
    let t = Matrix::diagonal(exps.iter().map(|(a, b)| BiSeries::monomial(An::one(), *a, *b)).collect());
    let ti = Matrix::diagonal(exps.iter().map(|(a, b)| BiSeries::monomial(An::one(), -*a, -*b)).collect());
    (t, ti)
}
