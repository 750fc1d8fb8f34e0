//! Text form of bivariate series and a small expression parser.
//!
//! Grammar (whitespace insensitive, `#` starts a comment to end of line):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/')? unary)*        juxtaposition multiplies
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' exponent)?
//! exponent:= int | '-' int | '(' ['-'] int ['/' int] ')'
//! primary := int | name | '(' expr ')' | 'O' '(' expr ')'
//! ```
//!
//! Names: `x`, `eps`, `xi` (only when a slope is supplied), tower
//! generators `r1, r2, ...`, and, in linear mode, `f` and `D` for
//! differential operators (`D^k f`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BiSeries, Puiseux};
use crate::coeff::{fmt_exp, AlgebraicNumber as An, Tower, Q, Q64};
use crate::error::{Error, Result};

/// `var^e` with the exponent in series text form, or the empty string.
pub fn power(var: &str, e: Q64) -> String {
    super::puiseux::fmt_x_power(var, e)
}

/// Render a series in the text form accepted by [`parse_series`].
pub fn print_series(s: &BiSeries) -> String {
    s.to_text("x", "eps")
}

/// Parsing context.
#[derive(Clone, Debug)]
pub struct ParseCtx {
    /// Slope used to expand `xi = x^sigma eps`; `xi` is rejected when unset.
    pub sigma: Option<Q64>,
    /// Tower whose generators may appear by name.
    pub tower: Tower,
    /// Relative orders for series division.
    pub rel_eps: Q64,
    pub rel_x: Q64,
}

impl Default for ParseCtx {
    fn default() -> Self {
        ParseCtx { sigma: None, tower: Tower::rationals(), rel_eps: Q64::from_integer(8), rel_x: Q64::from_integer(16) }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str, line0: usize) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (line0, 1);
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (l0, c0) = (line, col);
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Lexed { tok: Tok::Int(s.parse().unwrap()), line: l0, col: c0 });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Lexed { tok: Tok::Name(s), line: l0, col: c0 });
        } else if "+-*/^()".contains(c) {
            out.push(Lexed { tok: Tok::Sym(c), line: l0, col: c0 });
            i += 1;
            col += 1;
        } else {
            return Err(Error::Parse { line: l0, col: c0, msg: format!("unexpected character '{c}'") });
        }
    }
    out.push(Lexed { tok: Tok::End, line, col });
    Ok(out)
}

/// Value of a subexpression in linear mode: coefficient of `D^k f` for
/// each `k`, with key `None` for the pure part.
#[derive(Clone, Debug, Default)]
struct Lin(BTreeMap<Option<usize>, BiSeries>);

impl Lin {
    fn pure(s: BiSeries) -> Self {
        let mut m = BTreeMap::new();
        m.insert(None, s);
        Lin(m)
    }

    fn is_pure(&self) -> bool {
        self.0.keys().all(|k| k.is_none())
    }

    fn pure_part(&self) -> BiSeries {
        self.0.get(&None).cloned().unwrap_or_default()
    }

    fn add(mut self, o: Lin) -> Lin {
        for (k, v) in o.0 {
            let e = self.0.entry(k).or_default();
            *e = e.add(&v);
        }
        self
    }

    fn neg(self) -> Lin {
        Lin(self.0.into_iter().map(|(k, v)| (k, v.neg())).collect())
    }

    fn scale(self, s: &BiSeries) -> Lin {
        Lin(self.0.into_iter().map(|(k, v)| (k, v.mul(s))).collect())
    }
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    ctx: &'a ParseCtx,
    linear: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Parse { line: t.line, col: t.col, msg: msg.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Lin> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    acc = acc.add(self.term()?);
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Name(_) | Tok::Sym('('))
    }

    fn term(&mut self) -> Result<Lin> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    let r = self.unary()?;
                    acc = self.mul(acc, r)?;
                }
                Tok::Sym('/') => {
                    self.bump();
                    let r = self.unary()?;
                    if !r.is_pure() {
                        return self.err("cannot divide by an operator term");
                    }
                    let inv = self.invert(&r.pure_part())?;
                    acc = acc.scale(&inv);
                }
                _ if self.starts_primary() => {
                    let r = self.unary()?;
                    acc = self.mul(acc, r)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn mul(&self, a: Lin, b: Lin) -> Result<Lin> {
        if a.is_pure() {
            Ok(b.scale(&a.pure_part()))
        } else if b.is_pure() {
            Ok(a.scale(&b.pure_part()))
        } else {
            self.err("product of two operator terms")
        }
    }

    fn invert(&self, s: &BiSeries) -> Result<BiSeries> {
        if s.is_exact_zero() {
            return self.err("division by zero");
        }
        s.inv(self.ctx.rel_eps, self.ctx.rel_x).or_else(|e| self.err(format!("cannot invert divisor: {e}")))
    }

    fn unary(&mut self) -> Result<Lin> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn exponent(&mut self) -> Result<Q64> {
        let int = |p: &mut Self| -> Result<i64> {
            match p.bump() {
                Tok::Int(n) => i64::try_from(n).or_else(|_| p.err("exponent too large")),
                _ => p.err("expected an integer exponent"),
            }
        };
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Ok(Q64::from_integer(-int(self)?))
            }
            Tok::Sym('(') => {
                self.bump();
                let neg = if *self.peek() == Tok::Sym('-') {
                    self.bump();
                    true
                } else {
                    false
                };
                let n = int(self)?;
                let d = if *self.peek() == Tok::Sym('/') {
                    self.bump();
                    int(self)?
                } else {
                    1
                };
                self.expect(')')?;
                if d == 0 {
                    return self.err("zero denominator in exponent");
                }
                Ok(Q64::new(if neg { -n } else { n }, d))
            }
            _ => Ok(Q64::from_integer(int(self)?)),
        }
    }

    fn power(&mut self) -> Result<Lin> {
        // D^k f
        if self.linear && *self.peek() == Tok::Name("D".into()) {
            self.bump();
            let k = if *self.peek() == Tok::Sym('^') {
                self.bump();
                let e = self.exponent()?;
                if !e.is_integer() || e < Q64::zero() {
                    return self.err("derivative order must be a nonnegative integer");
                }
                e.to_integer() as usize
            } else {
                1
            };
            if *self.peek() != Tok::Name("f".into()) {
                return self.err("expected 'f' after derivative operator");
            }
            self.bump();
            let mut m = BTreeMap::new();
            m.insert(Some(k), BiSeries::one());
            return Ok(Lin(m));
        }
        let base = self.primary()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let e = self.exponent()?;
        if !base.is_pure() {
            return self.err("cannot raise an operator term to a power");
        }
        let b = base.pure_part();
        Ok(Lin::pure(self.pow(&b, e)?))
    }

    fn pow(&self, b: &BiSeries, e: Q64) -> Result<BiSeries> {
        let single = b.prec().is_none() && b.terms().len() == 1 && {
            let (_, c) = b.terms().iter().next().unwrap();
            c.prec().is_none() && c.terms().len() == 1
        };
        if single {
            let (ee, c) = b.terms().iter().next().unwrap();
            let (xe, a) = c.terms().iter().next().unwrap();
            let coeff = if e.is_integer() {
                let k = e.to_integer();
                if k >= 0 {
                    a.pow(k as u32)
                } else {
                    a.inv().or_else(|_| self.err("zero to a negative power"))?.pow((-k) as u32)
                }
            } else if a.is_one() {
                An::one()
            } else {
                return self.err("fractional power of a non-unit coefficient");
            };
            return Ok(BiSeries::monomial(coeff, xe * e, ee * e));
        }
        if !e.is_integer() {
            return self.err("fractional powers need a monomial base");
        }
        let k = e.to_integer();
        let base = if k < 0 { self.invert(b)? } else { b.clone() };
        let mut acc = BiSeries::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Lin> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Lin::pure(BiSeries::constant(An::from_q(Q::from_integer(n)))))
            }
            Tok::Sym('(') => {
                self.bump();
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Name(name) => {
                self.bump();
                self.name(&name)
            }
            _ => self.err("expected a number, a name or '('"),
        }
    }

    fn name(&mut self, name: &str) -> Result<Lin> {
        let one = An::one();
        let z = Q64::zero();
        let v = match name {
            "x" => BiSeries::monomial(one, Q64::one(), z),
            "eps" => BiSeries::monomial(one, z, Q64::one()),
            "xi" => match self.ctx.sigma {
                Some(s) => BiSeries::monomial(one, s, Q64::one()),
                None => return self.err("'xi' needs a slope (sigma) in the header"),
            },
            "O" => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                let s = inner.pure_part();
                if s.terms().len() != 1 || s.prec().is_some() {
                    return self.err("O(...) takes a single monomial");
                }
                let (ee, c) = s.terms().iter().next().unwrap();
                if c.terms().len() != 1 {
                    return self.err("O(...) takes a single monomial");
                }
                let (xe, _) = c.terms().iter().next().unwrap();
                if xe.is_zero() {
                    BiSeries::big_o(*ee)
                } else {
                    BiSeries::from_coeffs([(*ee, Puiseux::big_o(*xe))], None)
                }
            }
            "f" if self.linear => {
                let mut m = BTreeMap::new();
                m.insert(Some(0), BiSeries::one());
                return Ok(Lin(m));
            }
            _ => {
                let t = &self.ctx.tower;
                match (0..t.len()).find(|&i| t.level(i).name == name) {
                    Some(i) => BiSeries::constant(t.generator(i)),
                    None => return self.err(format!("unknown name '{name}'")),
                }
            }
        };
        Ok(Lin::pure(v))
    }
}

fn run(src: &str, line0: usize, ctx: &ParseCtx, linear: bool) -> Result<Lin> {
    let toks = lex(src, line0)?;
    let mut p = Parser { toks, pos: 0, ctx, linear };
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

/// Parse a series expression in `x`, `eps` (and `xi`).
pub fn parse_series(src: &str, ctx: &ParseCtx) -> Result<BiSeries> {
    parse_series_at(src, 1, ctx)
}

/// As [`parse_series`], reporting errors relative to line `line0`.
pub fn parse_series_at(src: &str, line0: usize, ctx: &ParseCtx) -> Result<BiSeries> {
    let v = run(src, line0, ctx, false)?;
    Ok(v.pure_part())
}

/// Parse a linear differential expression `sum c_k D^k f`; returns the
/// coefficient of `D^k f` at index `k` and rejects a pure (f-free) part.
pub fn parse_linear(src: &str, line0: usize, ctx: &ParseCtx) -> Result<Vec<BiSeries>> {
    let v = run(src, line0, ctx, true)?;
    if v.0.get(&None).is_some_and(|s| !s.is_exact_zero()) {
        return Err(Error::Parse { line: line0, col: 1, msg: "term without f".into() });
    }
    let n = v.0.keys().filter_map(|k| *k).max().unwrap_or(0);
    Ok((0..=n).map(|k| v.0.get(&Some(k)).cloned().unwrap_or_default()).collect())
}

/// Format an exponent as used in the text form.
pub fn exponent_text(e: Q64) -> String {
    fmt_exp(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::q64;

    #[test]
    fn parses_polynomial_entry() {
        let s = parse_series("(2*x+1)*eps^5 - x^3", &ParseCtx::default()).unwrap();
        assert_eq!(s.coeff(q64(5, 1)).coeff(q64(1, 1)), An::from_i64(2));
        assert_eq!(s.coeff(q64(0, 1)).coeff(q64(3, 1)), An::from_i64(-1));
    }

    #[test]
    fn xi_expands_with_slope() {
        let ctx = ParseCtx { sigma: Some(q64(-3, 1)), ..Default::default() };
        let s = parse_series("x^2 xi^2", &ctx).unwrap();
        assert_eq!(s.coeff(q64(2, 1)).coeff(q64(-4, 1)), An::one());
    }

    #[test]
    fn round_trip_with_precision() {
        let s = parse_series("3/2*x^(1/2)*eps^(-1/3) - x + O(x^4)*eps + O(eps^2)", &ParseCtx::default()).unwrap();
        let t = print_series(&s);
        let back = parse_series(&t, &ParseCtx::default()).unwrap();
        assert_eq!(s, back);
        assert_eq!(back.prec(), Some(q64(2, 1)));
    }

    #[test]
    fn linear_operator_terms() {
        let ctx = ParseCtx { sigma: Some(q64(0, 1)), ..Default::default() };
        let c = parse_linear("D^3 f - (x/xi^2) D^2 f - (1/xi^5) f", 1, &ctx).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c[2].coeff(q64(-2, 1)).coeff(q64(1, 1)), An::from_i64(-1));
        assert_eq!(c[0].coeff(q64(-5, 1)).coeff(q64(0, 1)), An::from_i64(-1));
    }

    #[test]
    fn error_carries_position() {
        let e = parse_series("x +\n  $", &ParseCtx::default()).unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, col: 3, msg: "unexpected character '$'".into() });
    }
}
