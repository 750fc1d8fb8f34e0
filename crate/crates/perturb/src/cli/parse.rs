//! Input files.
//!
//! A system file declares `xi^h x^p dF/dx = A F` with `xi = x^sigma eps`:
//!
//! ```text
//! # introductory example
//! n=2 h=1 p=0 sigma=0
//! A=[[0, 1],
//!    [x^3 - eps, 0]]
//! ```
//!
//! `n`, `h`, `p` and `sigma` are optional (`n` is checked against `A`, the
//! others default to zero). A scalar file gives `sigma` and an equation in
//! `D^k f`:
//!
//! ```text
//! sigma=0
//! eq= D^3 f - (x/xi^2) D^2 f - (1/xi^5) f
//! ```

use num_traits::Zero;

use crate::coeff::Q64;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, PerturbedSystem};
use crate::scalar::{from_coeffs, ScalarEquation};
use crate::series::text::{parse_linear, parse_series_at, print_series, ParseCtx};
use crate::series::BiSeries;

const KEYS: [&str; 6] = ["n", "h", "p", "sigma", "A", "eq"];

/// A `key=value` declaration with the line its value starts on.
#[derive(Debug)]
struct Decl {
    key: String,
    value: String,
    line: usize,
    col: usize,
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| match l.find('#') {
            Some(i) => format!("{}{}", &l[..i], " ".repeat(l.len() - i)),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn parse_err(text: &str, offset: usize, msg: impl Into<String>) -> Error {
    let (line, col) = position(text, offset);
    Error::Parse { line, col, msg: msg.into() }
}

/// Split into declarations: a key at bracket depth zero, preceded by
/// whitespace or the start of input, followed by `=`.
fn declarations(text: &str) -> Result<Vec<Decl>> {
    let b = text.as_bytes();
    let mut starts: Vec<(usize, usize, String)> = Vec::new(); // (key start, value start, key)
    let mut depth = 0i64;
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && c.is_ascii_alphabetic() && (i == 0 || (b[i - 1] as char).is_whitespace()) {
            let mut j = i;
            while j < b.len() && (b[j] as char).is_ascii_alphanumeric() {
                j += 1;
            }
            let word = &text[i..j];
            let mut k = j;
            while k < b.len() && (b[k] == b' ' || b[k] == b'\t') {
                k += 1;
            }
            if k < b.len() && b[k] == b'=' && KEYS.contains(&word) {
                starts.push((i, k + 1, word.to_string()));
                i = k + 1;
                continue;
            }
            i = j;
            continue;
        }
        i += 1;
    }
    if let Some(first) = starts.first() {
        if !text[..first.0].trim().is_empty() {
            return Err(parse_err(text, text.len() - text.trim_start().len(), "expected a declaration such as n=2"));
        }
    } else if !text.trim().is_empty() {
        return Err(parse_err(text, text.len() - text.trim_start().len(), "expected a declaration such as n=2"));
    }
    let mut out = Vec::new();
    for (idx, (_, vs, key)) in starts.iter().enumerate() {
        let end = starts.get(idx + 1).map_or(text.len(), |s| s.0);
        let raw = &text[*vs..end];
        let lead = raw.len() - raw.trim_start().len();
        let (line, col) = position(text, vs + lead);
        if out.iter().any(|d: &Decl| &d.key == key) {
            return Err(Error::Parse { line, col, msg: format!("duplicate declaration of {key}") });
        }
        out.push(Decl { key: key.clone(), value: raw.trim().to_string(), line, col });
    }
    Ok(out)
}

fn rational(d: &Decl) -> Result<Q64> {
    let err = || Error::Parse { line: d.line, col: d.col, msg: format!("{} must be a rational number", d.key) };
    let v = d.value.trim();
    let (num, den) = match v.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (v, "1"),
    };
    let num: i64 = num.parse().map_err(|_| err())?;
    let den: i64 = den.parse().map_err(|_| err())?;
    if den <= 0 {
        return Err(err());
    }
    Ok(Q64::new(num, den))
}

fn integer(d: &Decl) -> Result<i64> {
    d.value.trim().parse().map_err(|_| Error::Parse { line: d.line, col: d.col, msg: format!("{} must be an integer", d.key) })
}

/// Split at top-level occurrences of `sep`.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i64;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn bracketed(s: &str) -> Option<&str> {
    let t = s.trim();
    t.strip_prefix('[')?.strip_suffix(']')
}

fn matrix_rows(d: &Decl, ctx: &ParseCtx) -> Result<Vec<Vec<BiSeries>>> {
    let err = |msg: &str| Error::Parse { line: d.line, col: d.col, msg: msg.into() };
    // Line of a subslice of `d.value`.
    let line_of = |piece: &str| {
        let off = piece.as_ptr() as usize - d.value.as_ptr() as usize;
        d.line + d.value[..off].matches('\n').count()
    };
    let inner = bracketed(&d.value).ok_or_else(|| err("A must be written [[..], ..]"))?;
    let mut rows = Vec::new();
    for row in split_top(inner, ',') {
        let cells = bracketed(row).ok_or_else(|| err("each row of A must be bracketed"))?;
        let mut r = Vec::new();
        for cell in split_top(cells, ',') {
            if cell.trim().is_empty() {
                return Err(err("empty matrix entry"));
            }
            let cell = cell.trim_start();
            r.push(parse_series_at(cell, line_of(cell), ctx)?);
        }
        rows.push(r);
    }
    Ok(rows)
}

/// Parse a system file into raw form.
pub fn parse_system(text: &str) -> Result<PerturbedSystem> {
    let text = strip_comments(text);
    let decls = declarations(&text)?;
    let get = |k: &str| decls.iter().find(|d| d.key == k);
    let h = get("h").map(integer).transpose()?.unwrap_or(0);
    let p = get("p").map(rational).transpose()?.unwrap_or_else(Q64::zero);
    let sigma = get("sigma").map(rational).transpose()?.unwrap_or_else(Q64::zero);
    if sigma > Q64::zero() {
        let d = get("sigma").unwrap();
        return Err(Error::Parse { line: d.line, col: d.col, msg: "sigma must not be positive".into() });
    }
    if let Some(d) = get("eq") {
        return Err(Error::Parse { line: d.line, col: d.col, msg: "eq= belongs in a scalar file".into() });
    }
    let a = get("A").ok_or_else(|| Error::Parse { line: 1, col: 1, msg: "missing A=[[..]]".into() })?;
    let ctx = ParseCtx { sigma: Some(sigma), ..ParseCtx::default() };
    let rows = matrix_rows(a, &ctx)?;
    let n = rows.len();
    if let Some(d) = get("n") {
        let declared = integer(d)?;
        if declared != n as i64 {
            return Err(Error::DimensionMismatch(format!("n={declared} but A has {n} rows")));
        }
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("A must be square".into()));
    }
    let hq = Q64::from_integer(h);
    let m = Matrix::from_rows(rows).map(|f| f.shift(-p - sigma * hq, -hq));
    PerturbedSystem::from_raw(m, 1)
}

/// Parse a scalar file.
pub fn parse_scalar(text: &str) -> Result<ScalarEquation> {
    let text = strip_comments(text);
    let decls = declarations(&text)?;
    let get = |k: &str| decls.iter().find(|d| d.key == k);
    let sigma = get("sigma").map(rational).transpose()?.unwrap_or_else(Q64::zero);
    let eq = get("eq").ok_or_else(|| Error::Parse { line: 1, col: 1, msg: "missing eq= declaration".into() })?;
    let ctx = ParseCtx { sigma: Some(sigma), ..ParseCtx::default() };
    from_coeffs(sigma, parse_linear(&eq.value, eq.line, &ctx)?)
}

/// The raw system as a file accepted by [`parse_system`] (`h = p = 0`).
pub fn system_file(sys: &PerturbedSystem) -> String {
    let rows: Vec<String> = (0..sys.n())
        .map(|i| format!("[{}]", (0..sys.n()).map(|j| print_series(sys.m.get(i, j))).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("n={} h=0 p=0 sigma=0\nA=[{}]\n", sys.n(), rows.join(",\n   "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::q64;

    #[test]
    fn introductory_file() {
        let s = parse_system("n=2 h=1 p=0 sigma=0  A=[[0,1],[x^3-eps,0]]").unwrap();
        assert_eq!((s.rep.h, s.rep.sigma, s.rep.p), (1, q64(0, 1), q64(0, 1)));
        assert_eq!(s.m.get(1, 0).to_text("x", "eps"), "x^3*eps^-1 - 1");
    }

    #[test]
    fn ragged_matrix() {
        assert!(matches!(parse_system("A=[[0,1],[0]]"), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn entry_valuation() {
        let s = parse_system("A=[[(2*x+1)*eps^5]]").unwrap();
        assert_eq!(s.m.get(0, 0).val_eps(), Some(q64(5, 1)));
    }

    #[test]
    fn error_positions() {
        match parse_system("n=2\nA=[[0,1],\n   [x^3 - , 0]]") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_system("garbage"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn round_trip() {
        let s = parse_system("h=2 sigma=-1 A=[[x*xi, 1/2], [x^2 + xi^3, -3]]").unwrap();
        let back = parse_system(&system_file(&s)).unwrap();
        assert_eq!(back.m, s.m);
    }

    #[test]
    fn scalar_file() {
        let e = parse_scalar("sigma=0\neq= D^3 f - (x/xi^2) D^2 f - (1/xi^5) f").unwrap();
        assert_eq!(e.order(), 3);
    }
}
