//! The reduction engines: splitting, eigenvalue shifting, turning-point
//! resolution, eps-rank reduction, the exponential order with its
//! ramification rule, and stretching of the independent variable.

mod katz;
mod rank;
mod shift;
mod split;
mod stretch;
mod theta;
mod turning;

pub use katz::{exp_order_system, katz_ramify, katz_ramify_degree, ExpOrderResult};
pub use rank::{eps_rank_reduce, RankReduction, ReduceMode};
pub use shift::{eigen_shift, integrate_rank1, ExpTerm};
pub use split::{split, split_residual, SplitResult};
pub use stretch::stretch;
pub use theta::{gauss_theta, theta, theta_is_zero, theta_text};
pub use turning::{leading_eigen_valuation, resolve_turning_point, TurningResult};

use num_traits::Zero;

use crate::coeff::Q64;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Orders, PerturbedSystem, Rep};
use crate::series::{BiSeries, Puiseux};

/// Fail unless the `xi^k` coefficient of `sys` in view `rep` is covered by
/// the stored `eps` precision.
pub(crate) fn require_known(sys: &PerturbedSystem, rep: &Rep, k: i64) -> Result<()> {
    if let Some(p) = sys.eps_prec() {
        let e = Q64::new(k - rep.h, sys.d);
        if e >= p {
            return Err(Error::order(format!("coefficient of xi^{k} lies beyond the stored eps precision")));
        }
    }
    Ok(())
}

/// Every entry is zero to the certainty threshold.
pub(crate) fn is_zero_matrix(a: &Matrix<Puiseux>, ord: &Orders) -> Result<bool> {
    for e in a.entries() {
        if !e.is_zero_certain(ord.certainty)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Raw form of `sum_k L_k(x) xi^k` for the view `rep`, with `eps`
/// precision `kmax` powers of `xi` when given.
pub(crate) fn xi_levels_to_raw(levels: &[Matrix<Puiseux>], rep: &Rep, d: i64, kmax: Option<i64>) -> Matrix<BiSeries> {
    let (rows, cols) = levels.first().map_or((0, 0), |m| (m.rows(), m.cols()));
    let dq = Q64::from_integer(d);
    Matrix::from_fn(rows, cols, |i, j| {
        let mut out = BiSeries::from_coeffs(
            levels.iter().enumerate().map(|(k, m)| {
                let kq = Q64::from_integer(k as i64);
                (kq / dq, m.get(i, j).shift(rep.sigma * kq))
            }),
            None,
        );
        if let Some(k) = kmax {
            out = out.truncate_eps(Q64::from_integer(k) / dq);
        }
        out
    })
}

/// Leading constant matrix of a Puiseux matrix (coefficient of `x^0`).
pub(crate) fn at_zero(a: &Matrix<Puiseux>) -> Matrix<crate::coeff::AlgebraicNumber> {
    a.map(|p| p.coeff(Q64::zero()))
}
