//! Recursive formal reduction: decides which engine applies to a system,
//! collects the exponential part along every branch and records a trace.
//!
//! Decision order for a system with `h > 0` and `n > 1`:
//! distinct leading eigenvalues split the system; a single nonzero one is
//! shifted away; a nilpotent `A_{0,0}` with non-nilpotent `A_0(x)` is a
//! turning point; otherwise the eps-rank is reduced, and an irreducible
//! doubly nilpotent system is ramified according to its exponential order.

mod trace;

pub use trace::{term_text, Branch, ExpPart, StepKind, TraceNode, View};

use num_traits::Zero;

use crate::coeff::{distinct_root_partition, AlgebraicNumber as An, Q64};
use crate::error::{Error, Result};
use crate::linalg::{charpoly, Orders, PerturbedSystem};
use crate::reduce::{
    eigen_shift, eps_rank_reduce, exp_order_system, integrate_rank1, katz_ramify_degree, leading_eigen_valuation,
    resolve_turning_point, split, stretch, ExpTerm, RankReduction, ReduceMode,
};

/// Limits for [`formal_reduce`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    pub orders: Orders,
    /// Largest ramification index of `eps` allowed on any branch.
    pub max_ram: i64,
    /// Restarts with doubled orders after an insufficient-order failure.
    pub max_restarts: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config { orders: Orders::default(), max_ram: 64, max_restarts: 3 }
    }
}

/// Output of [`formal_reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub exp: ExpPart,
    pub trace: TraceNode,
    /// Orders of the successful attempt.
    pub orders: Orders,
    pub restarts: u32,
}

impl Reduction {
    pub fn restraining_indices(&self) -> Vec<Q64> {
        self.trace.restraining_indices()
    }
}

const MAX_DEPTH: usize = 64;

fn view(s: &PerturbedSystem) -> View {
    View { n: s.n(), d: s.d, rep: s.rep }
}

/// Add `head` in front of the terms of every branch, combining like terms.
fn prepend(head: &[ExpTerm], branches: Vec<Branch>) -> Vec<Branch> {
    branches
        .into_iter()
        .map(|mut b| {
            let mut all: Vec<ExpTerm> = head.to_vec();
            all.extend(b.terms);
            b.terms = combine(all);
            b
        })
        .collect()
}

fn combine(mut terms: Vec<ExpTerm>) -> Vec<ExpTerm> {
    terms.sort_by(ExpTerm::order);
    let mut out: Vec<ExpTerm> = Vec::new();
    for t in terms {
        match out.last_mut() {
            Some(l) if l.x_exp == t.x_exp && l.eps_exp == t.eps_exp && l.is_log == t.is_log => l.coeff = &l.coeff + &t.coeff,
            _ => out.push(t),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

fn zero_leaf(s: &PerturbedSystem, note: &str) -> (Vec<Branch>, TraceNode) {
    let b = Branch { multiplicity: s.n(), terms: Vec::new(), truncations: Vec::new() };
    (vec![b], TraceNode::leaf(view(s), note))
}

struct Run<'a> {
    ord: &'a Orders,
    cfg: &'a Config,
}

impl Run<'_> {
    fn go(&self, s: &PerturbedSystem, depth: usize) -> Result<(Vec<Branch>, TraceNode)> {
        if depth > MAX_DEPTH {
            return Err(Error::pre("reduction did not terminate"));
        }
        if s.d > self.cfg.max_ram {
            return Err(Error::RamificationLimit(format!("eps ramification {} exceeds {}", s.d, self.cfg.max_ram)));
        }
        let n = s.n();
        if n == 1 {
            let (terms, truncations) = integrate_rank1(s)?;
            let b = Branch { multiplicity: 1, terms, truncations };
            return Ok((vec![b], TraceNode::leaf(view(s), "scalar")));
        }
        if s.rep.h <= 0 || s.is_zero() {
            return Ok(zero_leaf(s, "h <= 0"));
        }
        let (_, roots) = distinct_root_partition(&charpoly(&s.leading_constant()))?;
        if roots.len() >= 2 {
            return self.split(s, depth);
        }
        let gamma = roots.into_iter().next().map(|r| r.0).unwrap_or_else(An::zero);
        if !gamma.is_zero() {
            let (rest, q) = eigen_shift(s, &gamma)?;
            let (branches, child) = self.go(&rest, depth + 1)?;
            let note = format!("gamma={gamma}");
            return Ok((prepend(&q, branches), TraceNode::step(StepKind::Shift, view(s), note, child)));
        }
        if leading_eigen_valuation(&s.leading(), self.ord)?.is_some() {
            let tp = resolve_turning_point(s, self.ord)?;
            let (branches, child) = self.go(&tp.sys, depth + 1)?;
            let note = format!("q={} sigma -> {}", tp.q, tp.sys.rep.sigma);
            return Ok((branches, TraceNode::step(StepKind::Turning, view(s), note, child)));
        }
        let red = eps_rank_reduce(s, self.ord, ReduceMode::Differential)?;
        if red.stuck {
            return self.rank_one(s, &red, depth);
        }
        if red.history.len() > 1 || !red.irreducible {
            let note = history_note(&red);
            let (branches, child) = self.go(&red.sys, depth + 1)?;
            return Ok((branches, TraceNode::step(StepKind::RankReduce, view(s), note, child)));
        }
        self.ramify_by_order(s, depth, "irreducible")
    }

    fn split(&self, s: &PerturbedSystem, depth: usize) -> Result<(Vec<Branch>, TraceNode)> {
        let res = split(s, self.ord)?;
        let mut branches = Vec::new();
        let mut children = Vec::new();
        for sub in &res.subsystems {
            let (b, c) = self.go(sub, depth + 1)?;
            branches.extend(b);
            children.push(c);
        }
        let sizes: Vec<String> = res.blocks.iter().map(|b| b.1.to_string()).collect();
        let eig: Vec<String> = res.eigenvalues.iter().map(|g| g.to_string()).collect();
        let note = format!("blocks {} eigenvalues {}", sizes.join("+"), eig.join(", "));
        Ok((branches, TraceNode { kind: StepKind::Split, before: view(s), note, children }))
    }

    /// Ramify by the denominator of the exponential order, falling back on
    /// the smallest index with `h + r > n`.
    fn ramify_by_order(&self, s: &PerturbedSystem, depth: usize, why: &str) -> Result<(Vec<Branch>, TraceNode)> {
        let eo = exp_order_system(s, self.ord)?;
        if eo.omega.is_zero() {
            return Ok(zero_leaf(s, "omega = 0"));
        }
        let mut k = eo.ramification;
        if k == 1 {
            k = katz_ramify_degree(s, self.ord)?;
        }
        if k == 1 {
            return Err(Error::pre("no admissible ramification for a doubly nilpotent irreducible system"));
        }
        let note = format!("{why}: omega={} E: {} = 0, eps = eps~^{k}", eo.omega, eo.edge_text());
        let (branches, child) = self.go(&s.ramify(k), depth + 1)?;
        Ok((branches, TraceNode::step(StepKind::Ramify, view(s), note, child)))
    }

    /// Eps-rank one without a constant elimination: try the exponential
    /// order, then the blanket ramification `eps = eps~^(n+1)`.
    fn rank_one(&self, s: &PerturbedSystem, red: &RankReduction, depth: usize) -> Result<(Vec<Branch>, TraceNode)> {
        let cur = &red.sys;
        let eo = exp_order_system(cur, self.ord)?;
        if eo.omega.is_zero() {
            return Ok(zero_leaf(cur, "h = 1, omega = 0"));
        }
        if eo.ramification > 1 {
            let k = eo.ramification;
            let note = format!("h = 1: omega={} eps = eps~^{k}", eo.omega);
            let (branches, child) = self.go(&cur.ramify(k), depth + 1)?;
            return Ok((branches, TraceNode::step(StepKind::Ramify, view(s), note, child)));
        }
        let k = s.n() as i64 + 1;
        let ram = cur.ramify(k);
        let red2 = eps_rank_reduce(&ram, self.ord, ReduceMode::Differential)?;
        if red2.sys.rep.h <= 1 {
            return Ok(zero_leaf(&red2.sys, "h = 1 resolved by ramification: true rank 0"));
        }
        if red2.stuck {
            return Err(Error::StalledH1(format!("no reduction found after eps = eps~^{k}")));
        }
        let note = format!("h = 1: eps = eps~^{k}, {}", history_note(&red2));
        let (branches, child) = self.go(&red2.sys, depth + 1)?;
        Ok((branches, TraceNode::step(StepKind::Ramify, view(s), note, child)))
    }
}

fn history_note(red: &RankReduction) -> String {
    let h: Vec<String> = red.history.iter().map(|(h, r)| format!("(h={h}, r={r})")).collect();
    format!("{} exit h={}", h.join(" "), red.exit_rep.h)
}

/// Compute the exponential part of `sys`, restarting with doubled orders
/// whenever a truncation turns out to be too short.
pub fn formal_reduce(sys: &PerturbedSystem, cfg: &Config) -> Result<Reduction> {
    let mut ord = cfg.orders;
    let mut restarts = 0;
    loop {
        let run = Run { ord: &ord, cfg };
        match run.go(sys, 0) {
            Ok((branches, trace)) => {
                return Ok(Reduction { exp: ExpPart { branches }, trace, orders: ord, restarts });
            }
            Err(Error::InsufficientOrder(_)) if restarts < cfg.max_restarts => {
                ord = ord.doubled();
                restarts += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

/// One stretched reduction of the iterative exploration.
#[derive(Clone, Debug)]
pub struct Stage {
    pub rho: Q64,
    pub reduction: Reduction,
}

/// Result of [`explore`].
#[derive(Clone, Debug)]
pub struct Exploration {
    /// Positive restraining indices found, ascending.
    pub rhos: Vec<Q64>,
    pub stages: Vec<Stage>,
}

/// Reduce `sys`, then stretch the original system by each restraining
/// index found and reduce again. A leaf of slope `sigma < 0` at stage `rho`
/// reveals the index `rho - 1/sigma`.
pub fn explore(sys: &PerturbedSystem, cfg: &Config, max_stages: usize) -> Result<Exploration> {
    let mut pending = vec![Q64::zero()];
    let mut seen: Vec<Q64> = Vec::new();
    let mut stages = Vec::new();
    while let Some(rho) = pending.first().copied() {
        pending.remove(0);
        if stages.len() >= max_stages {
            break;
        }
        let stretched = stretch(sys, rho)?;
        let red = formal_reduce(&stretched, cfg)?;
        for r in red.restraining_indices() {
            let next = rho + r;
            if next > rho && !seen.contains(&next) {
                seen.push(next);
                pending.push(next);
            }
        }
        pending.sort();
        stages.push(Stage { rho, reduction: red });
    }
    seen.sort();
    Ok(Exploration { rhos: seen, stages })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use num_traits::One;
    use crate::series::text::{parse_series, ParseCtx};

    fn raw(rows: &[&[&str]]) -> PerturbedSystem {
        let ctx = ParseCtx::default();
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_series(s, &ctx).unwrap()).collect()).collect());
        PerturbedSystem::from_raw(m, 1).unwrap()
    }

    fn leading(b: &Branch) -> &ExpTerm {
        &b.terms[0]
    }

    fn is_term(t: &ExpTerm, c: An, x: Q64, e: Q64) -> bool {
        t.coeff == c && t.x_exp == x && t.eps_exp == e && !t.is_log
    }

    #[test]
    fn introductory_branches() {
        // eps^2 y'' ~ x^3 y: y'/y ~ +-x^(3/2)/eps, integral +-(2/5) x^(5/2)/eps.
        let s = raw(&[&["0", "eps^-1"], &["x^3*eps^-1 - 1", "0"]]);
        let r = formal_reduce(&s, &Config::default()).unwrap();
        assert_eq!(r.exp.dimension(), 2);
        let mut signs = Vec::new();
        for b in &r.exp.branches {
            let t = leading(b);
            assert_eq!((t.x_exp, t.eps_exp), (Q64::new(5, 2), Q64::from_integer(-1)));
            signs.push(t.coeff.clone());
        }
        assert!(signs.contains(&An::from_frac(2, 5)) && signs.contains(&An::from_frac(-2, 5)));
        assert_eq!(r.restraining_indices(), vec![Q64::new(1, 3)]);
    }

    #[test]
    fn three_dimensional_example_scalar_branch() {
        let s = raw(&[&["0", "eps^-2", "0"], &["0", "0", "eps^-2"], &["eps^-1", "0", "x*eps^-2"]]);
        let r = formal_reduce(&s, &Config::default()).unwrap();
        assert_eq!(r.exp.dimension(), 3);
        let c = r.exp.branches.iter().find(|b| b.terms.len() == 2 && b.terms[0].eps_exp == Q64::from_integer(-2)).unwrap();
        assert!(is_term(&c.terms[0], An::from_frac(1, 2), Q64::from_integer(2), Q64::from_integer(-2)));
        assert!(is_term(&c.terms[1], An::from_i64(-1), Q64::from_integer(-1), Q64::from_integer(-1)));
    }

    #[test]
    fn three_dimensional_bender_example() {
        // eps f''' = f' - x f: roots of y^3 = y give 0 and +-x eps^(-1/2).
        let s = raw(&[&["0", "1", "0"], &["0", "0", "1"], &["-x*eps^-1", "eps^-1", "0"]]);
        let r = formal_reduce(&s, &Config::default()).unwrap();
        assert_eq!(r.exp.dimension(), 3);
        let mut lead: Vec<Option<An>> = r
            .exp
            .branches
            .iter()
            .map(|b| {
                b.terms.first().map(|t| {
                    assert_eq!((t.x_exp, t.eps_exp), (Q64::one(), Q64::new(-1, 2)));
                    t.coeff.clone()
                })
            })
            .collect();
        lead.sort_by_key(|c| c.as_ref().map(|c| c.to_string()));
        assert_eq!(lead, vec![None, Some(An::from_i64(-1)), Some(An::one())]);
    }

    #[test]
    fn non_positive_rank_is_a_leaf() {
        let s = raw(&[&["x", "1"], &["eps", "0"]]);
        let r = formal_reduce(&s, &Config::default()).unwrap();
        assert_eq!(r.trace.kind, StepKind::BaseCase);
        assert!(r.exp.branches.iter().all(|b| b.terms.is_empty()));
    }

    #[test]
    fn iterative_stretching_on_roo_equation() {
        let s = raw(&[&["0", "eps^-2"], &["x^5*eps^-2 + x^2*eps^-1 + 1", "0"]]);
        let e = explore(&s, &Config::default(), 6).unwrap();
        assert_eq!(e.rhos, vec![Q64::new(1, 3), Q64::new(1, 2)]);
    }
}
