//! Elimination over the valuation ring of Puiseux series in `x`: column
//! reduction with unimodular transforms, rank, and left null vectors.
//!
//! Pivots are chosen by minimal `x` valuation, so every multiplier is
//! holomorphic. Truncated multipliers carry their precision, which keeps the
//! transforms exact as elements of the completed ring.

use num_traits::Zero;

use super::{field, Matrix, Orders};
use crate::coeff::{AlgebraicNumber as An, Q64};
use crate::error::{Error, Result};
use crate::series::Puiseux;

/// Outcome of [`smith_columns`]: `a * u` has its last `n - rank` columns
/// equal to zero (to the certainty threshold), and `uinv = u^-1`.
#[derive(Clone, Debug)]
pub struct ColumnReduction {
    pub u: Matrix<Puiseux>,
    pub uinv: Matrix<Puiseux>,
    pub rank: usize,
    pub reduced: Matrix<Puiseux>,
    /// True when `u` is a permutation matrix.
    pub is_permutation: bool,
}

fn pick_pivot(
    b: &Matrix<Puiseux>,
    rows: &[usize],
    cols: std::ops::Range<usize>,
    ord: &Orders,
) -> Result<Option<(usize, usize)>> {
    let mut best: Option<(Q64, usize, usize)> = None;
    let mut unknown_floor: Option<Q64> = None;
    for &i in rows {
        for j in cols.clone() {
            let e = b.get(i, j);
            match e.val() {
                Some(v) => {
                    if best.as_ref().is_none_or(|(bv, _, _)| v < *bv) {
                        best = Some((v, i, j));
                    }
                }
                None => {
                    if let Some(p) = e.prec() {
                        unknown_floor = Some(unknown_floor.map_or(p, |u: Q64| u.min(p)));
                    }
                }
            }
        }
    }
    match (best, unknown_floor) {
        (Some((v, _, _)), Some(u)) if u <= v => Err(Error::order(format!(
            "pivot of valuation {v} is hidden below an unknown entry O(x^{u})"
        ))),
        (Some((_, i, j)), _) => Ok(Some((i, j))),
        (None, Some(u)) if u < ord.certainty => {
            Err(Error::order(format!("cannot decide rank: entry O(x^{u}) below certainty threshold")))
        }
        (None, _) => Ok(None),
    }
}

/// Unimodular column reduction of a square holomorphic matrix.
pub fn smith_columns(a: &Matrix<Puiseux>, ord: &Orders) -> Result<ColumnReduction> {
    let n = a.cols();
    let mut b = a.clone();
    let mut u = Matrix::<Puiseux>::identity(n);
    let mut uinv = Matrix::<Puiseux>::identity(n);
    let mut free_rows: Vec<usize> = (0..a.rows()).collect();
    let mut is_perm = true;
    let mut t = 0;
    while t < n {
        let Some((i, j)) = pick_pivot(&b, &free_rows, t..n, ord)? else { break };
        b.swap_cols(t, j);
        u.swap_cols(t, j);
        uinv.swap_rows(t, j);
        let piv_inv = b.get(i, t).inv(ord.x_rel)?;
        for k in t + 1..n {
            let g = b.get(i, k).clone();
            if !g.has_terms() {
                continue;
            }
            let c = g.mul(&piv_inv);
            is_perm = false;
            for r in 0..b.rows() {
                let v = b.get(r, k).sub(&c.mul(b.get(r, t)));
                b.set(r, k, v);
            }
            for r in 0..n {
                let v = u.get(r, k).sub(&c.mul(u.get(r, t)));
                u.set(r, k, v);
            }
            for col in 0..n {
                let v = uinv.get(t, col).add(&c.mul(uinv.get(k, col)));
                uinv.set(t, col, v);
            }
            // The pivot row entry is zero by construction.
            let p = b.get(i, k).prec();
            b.set(i, k, match p {
                Some(p) => Puiseux::big_o(p),
                None => Puiseux::zero(),
            });
        }
        free_rows.retain(|&r| r != i);
        t += 1;
    }
    // Clear certified zeros in the trailing columns.
    for j in t..n {
        for i in 0..b.rows() {
            if b.get(i, j).is_zero_certain(ord.certainty)? {
                b.set(i, j, Puiseux::zero());
            }
        }
    }
    Ok(ColumnReduction { u, uinv, rank: t, reduced: b, is_permutation: is_perm })
}

/// Rank over the field of Puiseux series.
pub fn rank(a: &Matrix<Puiseux>, ord: &Orders) -> Result<usize> {
    Ok(smith_columns(a, ord)?.rank)
}

/// A nonzero vector `w` with `w a = 0`, scaled to be holomorphic with a
/// unit entry. `None` when the left kernel is trivial.
pub fn left_null_vector(a: &Matrix<Puiseux>, ord: &Orders) -> Result<Option<Vec<Puiseux>>> {
    let k = a.transpose();
    let (rows, cols) = (k.rows(), k.cols());
    let mut m = k;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    let mut free = Vec::new();
    for c in 0..cols {
        let cand: Vec<usize> = (r..rows).collect();
        let piv = pick_pivot(&m, &cand, c..c + 1, ord)?;
        let Some((pr, _)) = piv else {
            free.push(c);
            continue;
        };
        m.swap_rows(pr, r);
        let inv = m.get(r, c).inv(ord.x_rel)?;
        for i in r + 1..rows {
            let g = m.get(i, c).clone();
            if !g.has_terms() {
                continue;
            }
            let f = g.mul(&inv);
            for j in 0..cols {
                let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                m.set(i, j, v);
            }
            let p = m.get(i, c).prec();
            m.set(i, c, p.map_or_else(Puiseux::zero, Puiseux::big_o));
        }
        pivots.push((r, c));
        r += 1;
        if r == rows {
            free.extend(c + 1..cols);
            break;
        }
    }
    let Some(&f) = free.first() else { return Ok(None) };
    let mut w = vec![Puiseux::zero(); cols];
    w[f] = Puiseux::one();
    for &(pr, pc) in pivots.iter().rev() {
        let mut acc = Puiseux::zero();
        for j in pc + 1..cols {
            if w[j].is_exact_zero() {
                continue;
            }
            acc = acc.add(&m.get(pr, j).mul(&w[j]));
        }
        let inv = m.get(pr, pc).inv(ord.x_rel)?;
        w[pc] = acc.mul(&inv).neg();
    }
    let minv = w.iter().filter_map(|x| x.val()).min().unwrap_or(Q64::zero());
    Ok(Some(w.into_iter().map(|x| x.shift(-minv)).collect()))
}

/// Constant vectors `w` with `w a = 0` coefficientwise in `x`.
pub fn constant_left_kernel(a: &Matrix<Puiseux>) -> Result<Vec<Vec<An>>> {
    let n = a.rows();
    let mut eqs: Vec<Vec<An>> = Vec::new();
    for j in 0..a.cols() {
        let mut exps: std::collections::BTreeSet<Q64> = std::collections::BTreeSet::new();
        for i in 0..n {
            exps.extend(a.get(i, j).terms().keys().copied());
        }
        for e in exps {
            eqs.push((0..n).map(|i| a.get(i, j).coeff(e)).collect());
        }
    }
    if eqs.is_empty() {
        return Ok((0..n)
            .map(|i| (0..n).map(|k| if k == i { An::one() } else { An::zero() }).collect())
            .collect());
    }
    field::kernel(&Matrix::from_rows(eqs))
}
