//! Result types of the driver: exponential parts and the reduction trace.

use serde_json::{json, Value};

use crate::coeff::{join_terms, Q64};
use crate::linalg::Rep;
use crate::reduce::ExpTerm;
use crate::series::text::power;

/// One branch of the exponential part with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub multiplicity: usize,
    pub terms: Vec<ExpTerm>,
    /// `(eps exponent, x order)`: the coefficient of that power of `eps`
    /// is only known up to `O(x^order)`.
    pub truncations: Vec<(Q64, Q64)>,
}

/// The exponential part `Q`: one entry per block of the final
/// decomposition.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExpPart {
    pub branches: Vec<Branch>,
}

impl ExpPart {
    pub fn dimension(&self) -> usize {
        self.branches.iter().map(|b| b.multiplicity).sum()
    }
}

pub fn term_text(t: &ExpTerm) -> String {
    let x = if t.is_log { "log(x)".to_string() } else { power("x", t.x_exp) };
    let e = power("eps", t.eps_exp);
    let mono: Vec<String> = [x, e].into_iter().filter(|s| !s.is_empty()).collect();
    t.coeff.fmt_with(&mono.join("*"))
}

impl Branch {
    pub fn text(&self) -> String {
        let mut parts: Vec<String> = self.terms.iter().map(term_text).collect();
        for (e, xo) in &self.truncations {
            let eps = power("eps", *e);
            parts.push(format!("O(x^{})*{}", crate::coeff::fmt_exp(*xo), eps));
        }
        join_terms(parts)
    }

    /// `name = RootOf(..)` for every generator the coefficients use.
    pub fn generators(&self) -> Vec<String> {
        let deepest = self.terms.iter().map(|t| t.coeff.tower()).max_by_key(|t| t.len());
        deepest.map_or_else(Vec::new, |t| t.describe().into_iter().map(|(n, d)| format!("{n} = {d}")).collect())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "multiplicity": self.multiplicity,
            "generators": self.generators(),
            "q": self.text(),
            "terms": self.terms.iter().map(|t| json!({
                "coeff": t.coeff.to_string(),
                "x_exp": t.x_exp.to_string(),
                "eps_exp": t.eps_exp.to_string(),
                "log": t.is_log,
            })).collect::<Vec<_>>(),
            "truncations": self.truncations.iter().map(|(e, x)| json!({"eps_exp": e.to_string(), "x_order": x.to_string()})).collect::<Vec<_>>(),
        })
    }
}

/// Kind of a trace node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Split,
    Shift,
    Turning,
    RankReduce,
    Ramify,
    Stretch,
    BaseCase,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Split => "split",
            StepKind::Shift => "shift",
            StepKind::Turning => "turning",
            StepKind::RankReduce => "rank-reduce",
            StepKind::Ramify => "ramify",
            StepKind::Stretch => "stretch",
            StepKind::BaseCase => "base",
        }
    }
}

/// Normal-form data of a system at a trace node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct View {
    pub n: usize,
    pub d: i64,
    pub rep: Rep,
}

impl View {
    /// Slope per unit of `eps` itself.
    pub fn sigma_eps(&self) -> Q64 {
        self.rep.sigma * Q64::from_integer(self.d)
    }

    fn text(&self) -> String {
        format!("n={} d={} h={} sigma={} p={}", self.n, self.d, self.rep.h, self.rep.sigma, self.rep.p)
    }

    fn to_json(self) -> Value {
        json!({"n": self.n, "d": self.d, "h": self.rep.h, "sigma": self.rep.sigma.to_string(), "p": self.rep.p.to_string()})
    }
}

/// One node of the reduction trace. Every step has the system it acted on
/// (`before`) and a single child, except splits (one child per block) and
/// leaves (none).
#[derive(Clone, Debug, PartialEq)]
pub struct TraceNode {
    pub kind: StepKind,
    pub before: View,
    pub note: String,
    pub children: Vec<TraceNode>,
}

impl TraceNode {
    pub fn leaf(before: View, note: impl Into<String>) -> Self {
        TraceNode { kind: StepKind::BaseCase, before, note: note.into(), children: Vec::new() }
    }

    pub fn step(kind: StepKind, before: View, note: impl Into<String>, child: TraceNode) -> Self {
        TraceNode { kind, before, note: note.into(), children: vec![child] }
    }

    pub fn leaves(&self) -> Vec<&TraceNode> {
        if self.children.is_empty() {
            return vec![self];
        }
        self.children.iter().flat_map(|c| c.leaves()).collect()
    }

    /// `-1/sigma` per leaf with a negative final slope (in `eps` units),
    /// sorted and without repetitions.
    pub fn restraining_indices(&self) -> Vec<Q64> {
        let mut out: Vec<Q64> = self
            .leaves()
            .into_iter()
            .map(|l| l.before.sigma_eps())
            .filter(|s| *s < Q64::from_integer(0))
            .map(|s| -s.recip())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Indented text, one line per node.
    pub fn text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(self.kind.name());
        out.push_str(" [");
        out.push_str(&self.before.text());
        out.push(']');
        if !self.note.is_empty() {
            out.push_str(": ");
            out.push_str(&self.note);
        }
        out.push('\n');
        for c in &self.children {
            c.write_text(depth + 1, out);
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "step": self.kind.name(),
            "before": self.before.to_json(),
            "note": self.note,
            "children": self.children.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}
