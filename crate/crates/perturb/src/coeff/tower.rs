//! Towers of simple algebraic extensions over the rationals and the exact
//! numbers living in them.
//!
//! An element at tower level `L` is a polynomial in the generator of that
//! level, of degree below the degree of its modulus, whose coefficients live
//! at levels strictly below `L`. Constants collapse to the lowest level that
//! can hold them, so structural equality is value equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

/// Raw recursive value. `P(level, coeffs)` always has at least two
/// coefficients and a nonzero last coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Val {
    Q(Q),
    P(usize, Vec<Val>),
}

impl Val {
    pub fn zero() -> Val {
        Val::Q(Q::zero())
    }

    pub fn one() -> Val {
        Val::Q(Q::one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Val::Q(q) if q.is_zero())
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            Val::Q(_) => None,
            Val::P(l, _) => Some(*l),
        }
    }

    fn canon(level: usize, mut coeffs: Vec<Val>) -> Val {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        match coeffs.len() {
            0 => Val::zero(),
            1 => coeffs.pop().unwrap(),
            _ => Val::P(level, coeffs),
        }
    }

    /// Deepest level referenced by this value.
    pub fn depth(&self) -> usize {
        match self {
            Val::Q(_) => 0,
            Val::P(l, _) => l + 1,
        }
    }
}

fn lvl_key(v: &Val) -> i64 {
    v.level().map(|l| l as i64).unwrap_or(-1)
}

pub(crate) fn vadd(a: &Val, b: &Val) -> Val {
    match (a, b) {
        (Val::Q(x), Val::Q(y)) => Val::Q(x + y),
        _ => {
            let (ka, kb) = (lvl_key(a), lvl_key(b));
            if ka > kb {
                let Val::P(l, c) = a else { unreachable!() };
                let mut c = c.clone();
                c[0] = vadd(&c[0], b);
                Val::canon(*l, c)
            } else if kb > ka {
                vadd(b, a)
            } else {
                let (Val::P(l, ca), Val::P(_, cb)) = (a, b) else { unreachable!() };
                let n = ca.len().max(cb.len());
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    match (ca.get(i), cb.get(i)) {
                        (Some(x), Some(y)) => out.push(vadd(x, y)),
                        (Some(x), None) => out.push(x.clone()),
                        (None, Some(y)) => out.push(y.clone()),
                        (None, None) => unreachable!(),
                    }
                }
                Val::canon(*l, out)
            }
        }
    }
}

pub(crate) fn vneg(a: &Val) -> Val {
    match a {
        Val::Q(x) => Val::Q(-x),
        Val::P(l, c) => Val::P(*l, c.iter().map(vneg).collect()),
    }
}

pub(crate) fn vsub(a: &Val, b: &Val) -> Val {
    vadd(a, &vneg(b))
}

pub(crate) fn vmul(t: &Tower, a: &Val, b: &Val) -> Val {
    match (a, b) {
        (Val::Q(x), Val::Q(y)) => Val::Q(x * y),
        _ => {
            if a.is_zero() || b.is_zero() {
                return Val::zero();
            }
            let (ka, kb) = (lvl_key(a), lvl_key(b));
            if ka > kb {
                let Val::P(l, c) = a else { unreachable!() };
                let out = c.iter().map(|x| vmul(t, x, b)).collect();
                Val::canon(*l, out)
            } else if kb > ka {
                vmul(t, b, a)
            } else {
                let (Val::P(l, ca), Val::P(_, cb)) = (a, b) else { unreachable!() };
                let mut prod = vec![Val::zero(); ca.len() + cb.len() - 1];
                for (i, x) in ca.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in cb.iter().enumerate() {
                        let p = vmul(t, x, y);
                        prod[i + j] = vadd(&prod[i + j], &p);
                    }
                }
                let red = reduce_mod(t, *l, prod);
                Val::canon(*l, red)
            }
        }
    }
}

/// Reduce a dense coefficient vector (generator of level `l`) modulo the
/// monic modulus of that level.
fn reduce_mod(t: &Tower, l: usize, mut c: Vec<Val>) -> Vec<Val> {
    let m = &t.level(l).modulus;
    let d = m.len() - 1;
    while c.len() > d {
        let top = c.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let k = c.len();
        for (j, mj) in m.iter().take(d).enumerate() {
            let p = vmul(t, &top, mj);
            let idx = k - d + j;
            c[idx] = vsub(&c[idx], &p);
        }
    }
    c
}

// Dense polynomial helpers in an indeterminate over the field at some level.
fn ptrim(p: &mut Vec<Val>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn pdivrem(t: &Tower, a: &[Val], b: &[Val]) -> Result<(Vec<Val>, Vec<Val>)> {
    let mut r: Vec<Val> = a.to_vec();
    ptrim(&mut r);
    let db = b.len() - 1;
    let lead_inv = vinv(t, b.last().unwrap())?;
    if r.len() < b.len() {
        return Ok((vec![], r));
    }
    let mut q = vec![Val::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = vmul(t, r.last().unwrap(), &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            let p = vmul(t, &c, bj);
            r[k + j] = vsub(&r[k + j], &p);
        }
        q[k] = c;
        r.pop();
        ptrim(&mut r);
    }
    ptrim(&mut q);
    Ok((q, r))
}

fn pmul(t: &Tower, a: &[Val], b: &[Val]) -> Vec<Val> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Val::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let p = vmul(t, x, y);
            out[i + j] = vadd(&out[i + j], &p);
        }
    }
    ptrim(&mut out);
    out
}

fn psub(a: &[Val], b: &[Val]) -> Vec<Val> {
    let n = a.len().max(b.len());
    let mut out: Vec<Val> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Val::zero);
            let y = b.get(i).cloned().unwrap_or_else(Val::zero);
            vsub(&x, &y)
        })
        .collect();
    ptrim(&mut out);
    out
}

pub(crate) fn vinv(t: &Tower, a: &Val) -> Result<Val> {
    match a {
        Val::Q(x) => {
            if x.is_zero() {
                Err(Error::DivisionByZero)
            } else {
                Ok(Val::Q(x.recip()))
            }
        }
        Val::P(l, c) => {
            let m = t.level(*l).modulus.clone();
            let (mut r0, mut r1) = (m, c.clone());
            let (mut s0, mut s1) = (vec![], vec![Val::one()]);
            while !r1.is_empty() {
                let (q, r) = pdivrem(t, &r0, &r1)?;
                let s2 = psub(&s0, &pmul(t, &q, &s1));
                r0 = std::mem::replace(&mut r1, r);
                s0 = std::mem::replace(&mut s1, s2);
            }
            if r0.len() > 1 {
                let li = vinv(t, r0.last().unwrap())?;
                let monic: Vec<Val> = r0.iter().map(|x| vmul(t, x, &li)).collect();
                return Err(Error::ZeroDivisor {
                    level: *l,
                    factor: fmt_dense(t, &monic, "z"),
                });
            }
            let g = vinv(t, &r0[0])?;
            let out: Vec<Val> = s0.iter().map(|x| vmul(t, x, &g)).collect();
            let red = reduce_mod(t, *l, out);
            Ok(Val::canon(*l, red))
        }
    }
}

/// One simple extension: a generator `name` with monic `modulus`
/// (coefficients listed from the constant term upwards).
#[derive(Debug)]
pub struct Level {
    pub name: String,
    pub modulus: Vec<Val>,
}

/// A finite tower of simple extensions. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Tower {
    levels: Arc<Vec<Arc<Level>>>,
}

fn empty_tower() -> &'static Tower {
    static EMPTY: OnceLock<Tower> = OnceLock::new();
    EMPTY.get_or_init(|| Tower { levels: Arc::new(vec![]) })
}

impl Default for Tower {
    fn default() -> Self {
        empty_tower().clone()
    }
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.is_prefix_of(other)
    }
}

impl Tower {
    pub fn rationals() -> Tower {
        Tower::default()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i]
    }

    pub fn is_prefix_of(&self, other: &Tower) -> bool {
        if Arc::ptr_eq(&self.levels, &other.levels) {
            return true;
        }
        if self.len() > other.len() {
            return false;
        }
        self.levels.iter().zip(other.levels.iter()).all(|(a, b)| {
            Arc::ptr_eq(a, b) || (a.name == b.name && a.modulus == b.modulus)
        })
    }

    /// The longer of two compatible towers.
    ///
    /// # Panics
    /// When neither tower is a prefix of the other; mixing numbers from
    /// unrelated towers is a programming error.
    pub fn join(a: &Tower, b: &Tower) -> Tower {
        if a.len() >= b.len() {
            assert!(b.is_prefix_of(a), "incompatible extension towers");
            a.clone()
        } else {
            assert!(a.is_prefix_of(b), "incompatible extension towers");
            b.clone()
        }
    }

    /// Generator of level `i` as a number.
    pub fn generator(&self, i: usize) -> AlgebraicNumber {
        AlgebraicNumber {
            tower: self.clone(),
            v: Val::P(i, vec![Val::zero(), Val::one()]),
        }
    }

    /// Extend by a root of the squarefree polynomial `poly`
    /// (coefficients from the constant term up). The polynomial must have
    /// degree at least two; a linear polynomial should be solved directly.
    pub fn adjoin_root(&self, poly: &[AlgebraicNumber]) -> Result<(Tower, AlgebraicNumber)> {
        let poly = super::upoly::trim(poly.to_vec());
        if poly.len() < 3 {
            return Err(Error::pre("adjoin_root needs degree at least two"));
        }
        let mut t = self.clone();
        for c in &poly {
            t = Tower::join(&t, &c.tower);
        }
        let g = super::upoly::gcd(&poly, &super::upoly::derivative(&poly))?;
        if g.len() > 1 {
            return Err(Error::NotSquarefree(super::upoly::format(&poly, "z")));
        }
        let lead_inv = poly.last().unwrap().inv()?;
        let modulus: Vec<Val> = poly.iter().map(|c| (c * &lead_inv).v).collect();
        let idx = t.len();
        let mut levels: Vec<Arc<Level>> = t.levels.iter().cloned().collect();
        levels.push(Arc::new(Level { name: format!("r{}", idx + 1), modulus }));
        let nt = Tower { levels: Arc::new(levels) };
        let g = nt.generator(idx);
        Ok((nt, g))
    }

    /// Human readable description of each level, e.g.
    /// `r1 = RootOf(z^2 + 1, index=1)`.
    pub fn describe(&self) -> Vec<(String, String)> {
        (0..self.len())
            .map(|i| {
                let lv = self.level(i);
                (
                    lv.name.clone(),
                    format!("RootOf({}, index={})", fmt_dense(self, &lv.modulus, "z"), i + 1),
                )
            })
            .collect()
    }
}

fn fmt_dense(t: &Tower, c: &[Val], var: &str) -> String {
    let mut terms: Vec<String> = Vec::new();
    for (i, ci) in c.iter().enumerate().rev() {
        if ci.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(fmt_term(t, ci, &mono));
    }
    join_terms(terms)
}

pub(crate) fn join_terms(terms: Vec<String>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, t) in terms.into_iter().enumerate() {
        if k == 0 {
            s.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            s.push_str(" - ");
            s.push_str(rest);
        } else {
            s.push_str(" + ");
            s.push_str(&t);
        }
    }
    s
}

/// Format `c * mono` where `mono` may be empty.
pub(crate) fn fmt_term(t: &Tower, c: &Val, mono: &str) -> String {
    let cs = fmt_val(t, c);
    if mono.is_empty() {
        return cs;
    }
    match c {
        Val::Q(q) if q.is_one() => mono.to_string(),
        Val::Q(q) if (-q).is_one() => format!("-{mono}"),
        Val::Q(_) => format!("{cs}*{mono}"),
        _ => format!("({cs})*{mono}"),
    }
}

pub(crate) fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_val(t: &Tower, v: &Val) -> String {
    match v {
        Val::Q(q) => fmt_q(q),
        Val::P(l, c) => {
            let name = if *l < t.len() { t.level(*l).name.clone() } else { format!("r{}", l + 1) };
            fmt_dense(t, c, &name)
        }
    }
}

/// Exact number in a tower of simple extensions of the rationals.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    pub(crate) tower: Tower,
    pub(crate) v: Val,
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl Eq for AlgebraicNumber {}

impl Default for AlgebraicNumber {
    fn default() -> Self {
        AlgebraicNumber::zero()
    }
}

impl AlgebraicNumber {
    pub fn zero() -> Self {
        AlgebraicNumber { tower: Tower::default(), v: Val::zero() }
    }

    pub fn one() -> Self {
        AlgebraicNumber { tower: Tower::default(), v: Val::one() }
    }

    pub fn from_q(q: Q) -> Self {
        AlgebraicNumber { tower: Tower::default(), v: Val::Q(q) }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_q(Q::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_q(Q::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_val(tower: Tower, v: Val) -> Self {
        AlgebraicNumber { tower, v }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn val(&self) -> &Val {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.v, Val::Q(q) if q.is_one())
    }

    /// The rational value, if this number is rational.
    pub fn to_rational(&self) -> Option<Q> {
        match &self.v {
            Val::Q(q) => Some(q.clone()),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.v, Val::Q(_))
    }

    /// Re-home this number in a longer compatible tower.
    pub fn lift(&self, t: &Tower) -> Self {
        AlgebraicNumber { tower: Tower::join(&self.tower, t), v: self.v.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(AlgebraicNumber { tower: self.tower.clone(), v: vinv(&self.tower, &self.v)? })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn mul_q(&self, q: &Q) -> Self {
        let t = &self.tower;
        AlgebraicNumber { tower: t.clone(), v: vmul(t, &self.v, &Val::Q(q.clone())) }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = AlgebraicNumber::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// True when the number is a single signed term, so it can be printed
    /// in front of a monomial without parentheses.
    pub fn is_simple(&self) -> bool {
        matches!(self.v, Val::Q(_))
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_val(&self.tower, &self.v))
    }
}

impl AlgebraicNumber {
    /// Format as a coefficient in front of `mono` (which may be empty).
    pub fn fmt_with(&self, mono: &str) -> String {
        fmt_term(&self.tower, &self.v, mono)
    }

    pub fn is_negative_rational(&self) -> bool {
        matches!(&self.v, Val::Q(q) if q.is_negative())
    }
}

impl<'a> Add<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn add(self, o: &AlgebraicNumber) -> AlgebraicNumber {
        let t = if self.tower.len() >= o.tower.len() { &self.tower } else { &o.tower };
        AlgebraicNumber { tower: t.clone(), v: vadd(&self.v, &o.v) }
    }
}

impl<'a> Sub<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn sub(self, o: &AlgebraicNumber) -> AlgebraicNumber {
        let t = if self.tower.len() >= o.tower.len() { &self.tower } else { &o.tower };
        AlgebraicNumber { tower: t.clone(), v: vsub(&self.v, &o.v) }
    }
}

impl<'a> Mul<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn mul(self, o: &AlgebraicNumber) -> AlgebraicNumber {
        if let (Val::Q(a), Val::Q(b)) = (&self.v, &o.v) {
            let t = if self.tower.len() >= o.tower.len() { &self.tower } else { &o.tower };
            return AlgebraicNumber { tower: t.clone(), v: Val::Q(a * b) };
        }
        let t = Tower::join(&self.tower, &o.tower);
        let v = vmul(&t, &self.v, &o.v);
        AlgebraicNumber { tower: t, v }
    }
}

impl Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        AlgebraicNumber { tower: self.tower.clone(), v: vneg(&self.v) }
    }
}

impl Neg for AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<AlgebraicNumber> for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, o: AlgebraicNumber) -> AlgebraicNumber {
                (&self).$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
