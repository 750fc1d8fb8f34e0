//! Exact linear algebra over the coefficient field.

use super::{charpoly, Matrix};
use crate::coeff::AlgebraicNumber as An;
use crate::error::{Error, Result};

/// Reduced row echelon form. Returns the form and the pivot columns.
pub fn rref(a: &Matrix<An>) -> Result<(Matrix<An>, Vec<usize>)> {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
        m.swap_rows(p, r);
        let inv = m.get(r, c).inv()?;
        for j in 0..cols {
            let v = m.get(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in 0..cols {
                let v = m.get(i, j) - &(&f * m.get(r, j));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok((m, pivots))
}

pub fn rank(a: &Matrix<An>) -> Result<usize> {
    Ok(rref(a)?.1.len())
}

/// Basis of the right kernel `{v : A v = 0}`.
pub fn kernel(a: &Matrix<An>) -> Result<Vec<Vec<An>>> {
    let (m, piv) = rref(a)?;
    let cols = a.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![An::zero(); cols];
        v[f] = An::one();
        for (r, &pc) in piv.iter().enumerate() {
            v[pc] = -m.get(r, f);
        }
        basis.push(v);
    }
    Ok(basis)
}

pub fn inverse(a: &Matrix<An>) -> Result<Matrix<An>> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let mut aug = Matrix::<An>::zeros(n, 2 * n);
    aug.set_block(0, 0, a);
    aug.set_block(0, n, &Matrix::identity(n));
    let (m, piv) = rref(&aug)?;
    if piv.len() < n || piv[n - 1] != n - 1 {
        return Err(Error::NotInvertible);
    }
    Ok(m.block(0, n, n, 2 * n))
}

/// Solve `A x = b` for a square nonsingular `A`.
pub fn solve(a: &Matrix<An>, b: &[An]) -> Result<Vec<An>> {
    let n = a.rows();
    let mut aug = Matrix::<An>::zeros(n, n + 1);
    aug.set_block(0, 0, a);
    for (i, x) in b.iter().enumerate() {
        aug.set(i, n, x.clone());
    }
    let (m, piv) = rref(&aug)?;
    if piv.len() < n || piv.contains(&n) {
        return Err(Error::NotInvertible);
    }
    Ok((0..n).map(|i| m.get(i, n).clone()).collect())
}

/// Solve the Sylvester equation `P X - X Q = C`.
///
/// Fails with [`Error::SpectraOverlap`] when `P` and `Q` share an
/// eigenvalue, which is exactly when the Kronecker operator is singular.
pub fn sylvester(p: &Matrix<An>, q: &Matrix<An>, c: &Matrix<An>) -> Result<Matrix<An>> {
    let (m, n) = (p.rows(), q.rows());
    let idx = |i: usize, j: usize| i * n + j;
    let mut k = Matrix::<An>::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            let row = idx(i, j);
            for l in 0..m {
                let v = p.get(i, l);
                if !v.is_zero() {
                    let cur = k.get(row, idx(l, j)) + v;
                    k.set(row, idx(l, j), cur);
                }
            }
            for l in 0..n {
                let v = q.get(l, j);
                if !v.is_zero() {
                    let cur = k.get(row, idx(i, l)) - v;
                    k.set(row, idx(i, l), cur);
                }
            }
        }
    }
    let rhs: Vec<An> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| c.get(i, j).clone()).collect();
    let x = solve(&k, &rhs).map_err(|e| match e {
        Error::NotInvertible => Error::SpectraOverlap,
        other => other,
    })?;
    Ok(Matrix::from_fn(m, n, |i, j| x[idx(i, j)].clone()))
}

pub fn is_nilpotent(a: &Matrix<An>) -> bool {
    let c = charpoly(a);
    c.iter().take(a.rows()).all(|x| x.is_zero())
}

pub fn matrix_pow(a: &Matrix<An>, k: usize) -> Matrix<An> {
    let mut acc = Matrix::identity(a.rows());
    for _ in 0..k {
        acc = acc.mul(a);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix<An> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| An::from_i64(x)).collect()).collect())
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let ai = inverse(&a).unwrap();
        assert_eq!(a.mul(&ai), Matrix::identity(2));
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a).unwrap();
        assert_eq!(k.len(), 2);
        for v in k {
            let col = Matrix::from_fn(3, 1, |i, _| v[i].clone());
            assert!(a.mul(&col).is_exact_zero());
        }
    }

    #[test]
    fn sylvester_solution_checks() {
        let p = m(&[&[1, 1], &[0, 1]]);
        let q = m(&[&[3]]);
        let c = m(&[&[5], &[-2]]);
        let x = sylvester(&p, &q, &c).unwrap();
        assert_eq!(p.mul(&x).sub(&x.mul(&q)), c);
        assert_eq!(sylvester(&p, &m(&[&[1]]), &c).unwrap_err(), Error::SpectraOverlap);
    }
}
