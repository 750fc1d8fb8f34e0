//! Dense univariate polynomials with [`AlgebraicNumber`] coefficients,
//! stored from the constant term upwards, plus root finding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::tower::{join_terms, AlgebraicNumber, Tower, Q};
use crate::error::Result;

pub type Coeffs = Vec<AlgebraicNumber>;

pub fn trim(mut p: Coeffs) -> Coeffs {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn add(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> Coeffs {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => x + y,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                _ => unreachable!(),
            })
            .collect(),
    )
}

pub fn sub(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> Coeffs {
    let nb: Coeffs = b.iter().map(|x| -x).collect();
    add(a, &nb)
}

pub fn mul(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> Coeffs {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![AlgebraicNumber::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(out)
}

pub fn derivative(p: &[AlgebraicNumber]) -> Coeffs {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_q(&Q::from_integer(BigInt::from(i))))
            .collect(),
    )
}

pub fn eval(p: &[AlgebraicNumber], x: &AlgebraicNumber) -> AlgebraicNumber {
    let mut acc = AlgebraicNumber::zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

pub fn divrem(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> Result<(Coeffs, Coeffs)> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if b.is_empty() {
        return Err(crate::error::Error::DivisionByZero);
    }
    let db = b.len() - 1;
    let li = b[db].inv()?;
    if r.len() < b.len() {
        return Ok((vec![], r));
    }
    let mut q = vec![AlgebraicNumber::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() * &li;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &(&c * bj);
        }
        q[k] = c;
        r.pop();
        r = trim(r);
    }
    Ok((trim(q), r))
}

pub fn monic(p: &[AlgebraicNumber]) -> Result<Coeffs> {
    let p = trim(p.to_vec());
    match p.last() {
        None => Ok(p),
        Some(l) => {
            let li = l.inv()?;
            Ok(p.iter().map(|c| c * &li).collect())
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> Result<Coeffs> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y)?;
        x = std::mem::replace(&mut y, r);
    }
    monic(&x)
}

/// Yun's squarefree decomposition of a monic polynomial: pairs
/// `(factor, multiplicity)` with pairwise coprime squarefree factors.
pub fn squarefree(p: &[AlgebraicNumber]) -> Result<Vec<(Coeffs, usize)>> {
    let f = monic(p)?;
    if f.len() <= 1 {
        return Ok(vec![]);
    }
    let fp = derivative(&f);
    let a0 = gcd(&f, &fp)?;
    let mut b = divrem(&f, &a0)?.0;
    let c = divrem(&fp, &a0)?.0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d)?;
        let nb = divrem(&b, &a)?.0;
        let c = divrem(&d, &a)?.0;
        d = sub(&c, &derivative(&nb));
        if a.len() > 1 {
            out.push((a, i));
        }
        b = nb;
        i += 1;
    }
    Ok(out)
}

pub fn format(p: &[AlgebraicNumber], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(c.fmt_with(&mono));
    }
    join_terms(terms)
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Some(vec![]);
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &p * &p <= m {
        if p > limit {
            return None;
        }
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1;
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
        if divs.len() > 20_000 {
            return None;
        }
    }
    Some(divs)
}

/// Rational roots of a polynomial whose coefficients are all rational.
pub fn rational_roots(p: &[AlgebraicNumber]) -> Vec<Q> {
    let p = trim(p.to_vec());
    let qs: Option<Vec<Q>> = p.iter().map(|c| c.to_rational()).collect();
    let Some(qs) = qs else { return vec![] };
    if qs.len() < 2 {
        return vec![];
    }
    let mut roots = Vec::new();
    let mut start = 0;
    while start < qs.len() && qs[start].is_zero() {
        start += 1;
    }
    if start > 0 {
        roots.push(Q::zero());
    }
    let qs = &qs[start..];
    if qs.len() < 2 {
        return roots;
    }
    let l = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (q * Q::from_integer(l.clone())).to_integer()).collect();
    let (Some(pd), Some(qd)) = (small_divisors(&ints[0]), small_divisors(ints.last().unwrap())) else {
        return roots;
    };
    let evalq = |x: &Q| {
        let mut acc = Q::zero();
        for c in ints.iter().rev() {
            acc = acc * x + Q::from_integer(c.clone());
        }
        acc
    };
    let mut seen = std::collections::BTreeSet::new();
    for a in &pd {
        for b in &qd {
            for s in [1i32, -1] {
                let cand = Q::new(a * BigInt::from(s), b.clone());
                let key = (cand.numer().to_string(), cand.denom().to_string());
                if seen.insert(key) && evalq(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

/// Distinct roots of `p` with multiplicities, adjoining generators to the
/// tower as needed. Returns the final tower; every root lives in it.
pub fn distinct_root_partition(p: &[AlgebraicNumber]) -> Result<(Tower, Vec<(AlgebraicNumber, usize)>)> {
    let mut tower = Tower::rationals();
    for c in p {
        tower = Tower::join(&tower, c.tower());
    }
    let mut out = Vec::new();
    for (factor, mult) in squarefree(p)? {
        let (t2, roots) = squarefree_roots(&factor, &tower)?;
        tower = t2;
        out.extend(roots.into_iter().map(|r| (r, mult)));
    }
    let out = out.into_iter().map(|(r, m)| (r.lift(&tower), m)).collect();
    Ok((tower, out))
}

fn squarefree_roots(f: &[AlgebraicNumber], tower: &Tower) -> Result<(Tower, Vec<AlgebraicNumber>)> {
    let mut g = monic(f)?;
    let mut t = tower.clone();
    let mut out = Vec::new();
    loop {
        if g.len() <= 1 {
            break;
        }
        if g.len() == 2 {
            out.push(-&g[0]);
            break;
        }
        let rr = rational_roots(&g);
        if !rr.is_empty() {
            for r in rr {
                let r = AlgebraicNumber::from_q(r);
                out.push(r.clone());
                g = divrem(&g, &[-&r, AlgebraicNumber::one()])?.0;
            }
            continue;
        }
        if let Some(r) = root_in_tower(&g, &t)? {
            g = divrem(&g, &[-&r, AlgebraicNumber::one()])?.0;
            out.push(r);
            continue;
        }
        let (t2, theta) = t.adjoin_root(&g)?;
        t = t2;
        g = divrem(&g, &[-&theta, AlgebraicNumber::one()])?.0;
        out.push(theta);
    }
    Ok((t, out))
}

/// A root of the monic `g` already present in `t`: `+-r` for a generator
/// `r`, or for a quadratic `(-b + s r) / 2` with `disc / r^2 = s^2` rational.
/// Adjoining a root of a polynomial that splits over `t` would give a tower
/// whose modulus is reducible.
fn root_in_tower(g: &[AlgebraicNumber], t: &Tower) -> Result<Option<AlgebraicNumber>> {
    let gens: Vec<AlgebraicNumber> = (0..t.len()).map(|i| t.generator(i)).collect();
    for r in &gens {
        for c in [r.clone(), -r] {
            if eval(g, &c).is_zero() {
                return Ok(Some(c));
            }
        }
    }
    if g.len() == 3 {
        let disc = &(&g[1] * &g[1]) - &g[0].mul_q(&Q::from_integer(4.into()));
        for r in &gens {
            let Some(ratio) = disc.checked_div(&(r * r))?.to_rational() else { continue };
            if let Some(s) = rational_sqrt(&ratio) {
                let root = (&(-&g[1]) + &r.mul_q(&s)).mul_q(&Q::new(1.into(), 2.into()));
                if eval(g, &root).is_zero() {
                    return Ok(Some(root));
                }
            }
        }
    }
    Ok(None)
}

fn rational_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Q::new(n, d))
}

/// Convert a small nonnegative integer polynomial degree into `u32`.
pub fn deg(p: &[AlgebraicNumber]) -> Option<u32> {
    let p = trim(p.to_vec());
    if p.is_empty() {
        None
    } else {
        (p.len() - 1).to_u32()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[i64]) -> Coeffs {
        v.iter().map(|&n| AlgebraicNumber::from_i64(n)).collect()
    }

    #[test]
    fn yun_splits_multiplicities() {
        // (z-1)^2 (z+2)
        let p = mul(&mul(&c(&[-1, 1]), &c(&[-1, 1])), &c(&[2, 1]));
        let sf = squarefree(&p).unwrap();
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0], (c(&[2, 1]), 1));
        assert_eq!(sf[1], (c(&[-1, 1]), 2));
    }

    #[test]
    fn cyclotomic_cube_roots() {
        // z^3 - 1 : root 1 rational, then a quadratic extension.
        let p = c(&[-1, 0, 0, 1]);
        let (t, roots) = distinct_root_partition(&p).unwrap();
        assert_eq!(roots.len(), 3);
        assert_eq!(t.len(), 1);
        for (r, m) in &roots {
            assert_eq!(*m, 1);
            assert!(eval(&p, r).is_zero());
        }
    }

    #[test]
    fn roots_already_in_the_tower_are_reused() {
        // Over Q(i): z^2 + 4 and z^2 + 1 split, so no new level is needed.
        let (t, i) = Tower::rationals().adjoin_root(&c(&[1, 0, 1])).unwrap();
        for p in [c(&[4, 0, 1]), c(&[1, 0, 1])] {
            let p: Coeffs = p.iter().map(|a| a.lift(&t)).collect();
            let (t2, roots) = distinct_root_partition(&p).unwrap();
            assert_eq!(t2.len(), 1);
            assert_eq!(roots.len(), 2);
            for (r, _) in &roots {
                assert!(eval(&p, r).is_zero());
            }
        }
        assert!(eval(&c(&[1, 0, 1]), &i).is_zero());
    }

    #[test]
    fn repeated_roots_keep_multiplicity() {
        // z^2 (z^2 + 1)
        let p = c(&[0, 0, 1, 0, 1]);
        let (_t, roots) = distinct_root_partition(&p).unwrap();
        let zero = roots.iter().find(|(r, _)| r.is_zero()).unwrap();
        assert_eq!(zero.1, 2);
        assert_eq!(roots.len(), 3);
    }

    #[test]
    fn rational_root_theorem() {
        // 6z^2 - 5z + 1 = (2z-1)(3z-1)
        let mut r = rational_roots(&c(&[1, -5, 6]));
        r.sort();
        assert_eq!(r, vec![Q::new(1.into(), 3.into()), Q::new(1.into(), 2.into())]);
    }
}
