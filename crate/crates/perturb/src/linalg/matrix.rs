//! Dense matrices and univariate polynomials over a [`Ring`], and the
//! division-free characteristic polynomial.

use num_bigint::BigInt;

use super::Ring;
use crate::coeff::{AlgebraicNumber, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| R::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(d: Vec<R>) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut R {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &R> {
        self.data.iter()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<S: Ring, E>(&self, f: impl Fn(&R) -> Result<S, E>) -> Result<Matrix<S>, E> {
        let data: Result<Vec<S>, E> = self.data.iter().map(f).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data: data? })
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = R::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                if a.is_exact_zero() || b.is_exact_zero() {
                    continue;
                }
                acc = acc.radd(&a.rmul(b));
            }
            acc
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).radd(o.get(i, j)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).rsub(o.get(i, j)))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.rneg())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.rmul(c))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> R {
        let mut acc = R::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.radd(self.get(i, i));
        }
        acc
    }

    /// Submatrix with the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_exact_zero())
    }

    pub fn row_vec(&self, i: usize) -> Vec<R> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }
}

/// Characteristic polynomial `det(lambda I - A)` by the Leverrier–Faddeev
/// recursion; coefficients from the constant term up, monic.
pub fn charpoly<R: Ring>(a: &Matrix<R>) -> Vec<R> {
    assert!(a.is_square());
    let n = a.rows();
    let mut c = vec![R::zero(); n + 1];
    c[n] = R::one();
    let mut m = Matrix::<R>::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut mk = a.mul(&m);
        for i in 0..n {
            let v = mk.get(i, i).radd(&c[n - k + 1]);
            mk.set(i, i, v);
        }
        let am = a.mul(&mk);
        let tr = am.trace();
        c[n - k] = tr.mul_q(&Q::new(BigInt::from(-1), BigInt::from(k as i64)));
        m = mk;
    }
    c
}

/// Determinant through the characteristic polynomial (division-free apart
/// from small integer denominators).
pub fn det<R: Ring>(a: &Matrix<R>) -> R {
    let n = a.rows();
    if n == 0 {
        return R::one();
    }
    let c = charpoly(a);
    if n.is_multiple_of(2) {
        c[0].clone()
    } else {
        c[0].rneg()
    }
}

/// Dense univariate polynomial over a ring, coefficients from the constant
/// term up. The zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R>(pub Vec<R>);

impl<R: Ring> Poly<R> {
    pub fn trimmed(mut v: Vec<R>) -> Self {
        while v.last().is_some_and(|c| c.is_exact_zero()) {
            v.pop();
        }
        Poly(v)
    }

    /// The indeterminate itself.
    pub fn var() -> Self {
        Poly(vec![R::zero(), R::one()])
    }

    pub fn constant(c: R) -> Self {
        Self::trimmed(vec![c])
    }

    pub fn coeff(&self, i: usize) -> R {
        self.0.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly(vec![])
    }
    fn one() -> Self {
        Poly(vec![R::one()])
    }
    fn radd(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Poly::trimmed(
            (0..n)
                .map(|i| match (self.0.get(i), o.0.get(i)) {
                    (Some(a), Some(b)) => a.radd(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    _ => unreachable!(),
                })
                .collect(),
        )
    }
    fn rsub(&self, o: &Self) -> Self {
        self.radd(&o.rneg())
    }
    fn rmul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(vec![]);
        }
        let mut out = vec![R::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                out[i + j] = out[i + j].radd(&a.rmul(b));
            }
        }
        Poly::trimmed(out)
    }
    fn rneg(&self) -> Self {
        Poly(self.0.iter().map(|c| c.rneg()).collect())
    }
    fn mul_q(&self, q: &Q) -> Self {
        Poly::trimmed(self.0.iter().map(|c| c.mul_q(q)).collect())
    }
    fn is_exact_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn from_an(c: &AlgebraicNumber) -> Self {
        Poly::constant(R::from_an(c))
    }
}
