//! The reduction criterion `theta(lambda)`.
//!
//! `theta(lambda)` is the coefficient of `xi^(n-r)` in
//! `det(A_0 + xi (A_1 + lambda I))`, where `r = rank A_0`. When `A_0` has
//! its last `n - r` columns equal to zero the same polynomial is the
//! determinant of the pencil `G(lambda)` built from the first `r` columns
//! of `A_0` and the last `n - r` columns of `A_1 + lambda I`.

use super::require_known;
use crate::error::Result;
use crate::linalg::{det, valuation, Matrix, Orders, PerturbedSystem, Poly};
use crate::scalar::xpoly_text;
use crate::series::Puiseux;

/// `theta` of `sys` in its current view, from the defining determinant.
pub fn theta(sys: &PerturbedSystem, ord: &Orders) -> Result<Poly<Puiseux>> {
    require_known(sys, &sys.rep, 1)?;
    let a0 = sys.coeff_matrix(&sys.rep, 0);
    let a1 = sys.coeff_matrix(&sys.rep, 1);
    let r = valuation::rank(&a0, ord)?;
    Ok(theta_from(&a0, &a1, r))
}

/// Coefficient of `xi^(n-r)` in `det(A_0 + xi (A_1 + lambda I))`.
pub(crate) fn theta_from(a0: &Matrix<Puiseux>, a1: &Matrix<Puiseux>, r: usize) -> Poly<Puiseux> {
    let n = a0.rows();
    // Outer polynomial variable: xi. Inner: lambda.
    let m: Matrix<Poly<Poly<Puiseux>>> = Matrix::from_fn(n, n, |i, j| {
        let c0 = Poly::constant(a0.get(i, j).clone());
        let mut c1 = vec![a1.get(i, j).clone()];
        if i == j {
            c1.push(Puiseux::one());
        }
        Poly::trimmed(vec![c0, Poly::trimmed(c1)])
    });
    det(&m).coeff(n - r)
}

/// `det G(lambda)` for `A_0` whose last `n - r` columns vanish.
pub fn gauss_theta(a0: &Matrix<Puiseux>, a1: &Matrix<Puiseux>, r: usize) -> Poly<Puiseux> {
    let n = a0.rows();
    let g: Matrix<Poly<Puiseux>> = Matrix::from_fn(n, n, |i, j| {
        if j < r {
            Poly::constant(a0.get(i, j).clone())
        } else if i == j {
            Poly::trimmed(vec![a1.get(i, j).clone(), Puiseux::one()])
        } else {
            Poly::constant(a1.get(i, j).clone())
        }
    });
    det(&g)
}

/// Decide `theta == 0` at the certainty threshold.
pub fn theta_is_zero(t: &Poly<Puiseux>, ord: &Orders) -> Result<bool> {
    for c in &t.0 {
        if !c.is_zero_certain(ord.certainty)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Text form in `lambda`, highest power first.
pub fn theta_text(t: &Poly<Puiseux>) -> String {
    if t.0.iter().all(|c| !c.has_terms()) {
        return "0".into();
    }
    xpoly_text(&t.0, "lambda")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{q64, AlgebraicNumber as An};

    fn p(terms: &[(i64, i64)]) -> Puiseux {
        Puiseux::from_terms(terms.iter().map(|&(c, e)| (q64(e, 1), An::from_i64(c))), None)
    }

    #[test]
    fn firststep_pencil_vanishes_identically() {
        let z = Puiseux::zero;
        // A_0 and A_1 of the four-dimensional first-step example (h > 1).
        let a0 = Matrix::from_rows(vec![
            vec![z(), z(), z(), z()],
            vec![p(&[(1, 2)]), z(), z(), z()],
            vec![p(&[(-1, 1)]), z(), z(), z()],
            vec![z(), p(&[(2, 0)]), z(), z()],
        ]);
        let a1 = Matrix::from_rows(vec![
            vec![p(&[(1, 0)]), p(&[(-1, 3)]), p(&[(1, 0), (1, 1)]), z()],
            vec![z(), p(&[(1, 1)]), z(), p(&[(-2, 1)])],
            vec![z(), z(), z(), p(&[(2, 0)])],
            vec![z(), z(), z(), z()],
        ]);
        let g = gauss_theta(&a0, &a1, 2);
        let t = theta_from(&a0, &a1, 2);
        let ord = Orders::default();
        assert!(theta_is_zero(&g, &ord).unwrap());
        assert!(theta_is_zero(&t, &ord).unwrap());
    }

    #[test]
    fn pencil_matches_definition_on_a_nonzero_case() {
        // A_0 = [[0,0],[1,0]], A_1 = [[0,1],[0,0]]:
        // det([[0, xi], [1, lambda xi]]) = -xi, so theta = -1.
        let z = Puiseux::zero;
        let a0 = Matrix::from_rows(vec![vec![z(), z()], vec![p(&[(1, 0)]), z()]]);
        let a1 = Matrix::from_rows(vec![vec![z(), p(&[(1, 0)])], vec![z(), z()]]);
        let g = gauss_theta(&a0, &a1, 1);
        let t = theta_from(&a0, &a1, 1);
        assert_eq!(g, t);
        assert_eq!(theta_text(&t), "-1");
    }
}
