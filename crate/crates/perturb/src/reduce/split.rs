//! Block diagonalisation of a system whose leading constant matrix has
//! several distinct eigenvalues.
//!
//! After a constant similarity that makes `A_{0,0}` block diagonal (one
//! block per generalised eigenspace) the transformation
//! `T = sum_k T_k(x) xi^k` and the block-diagonal `B = sum_k B_k(x) xi^k`
//! are found level by level in `xi`, and inside each level degree by degree
//! in `x`. Every step solves `A_00 T - T A_00 = B - R` blockwise: diagonal
//! blocks go to `B`, off-diagonal ones to `T` through a Sylvester equation.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{at_zero, xi_levels_to_raw};
use crate::coeff::{distinct_root_partition, q64_to_q, AlgebraicNumber as An, Q64};
use crate::error::{Error, Result};
use crate::linalg::field::{inverse, kernel, matrix_pow, sylvester};
use crate::linalg::{charpoly, lift_x, Matrix, Orders, PerturbedSystem, Rep};
use crate::series::{min_opt, BiSeries, Puiseux};

/// Outcome of [`split`].
#[derive(Clone, Debug)]
pub struct SplitResult {
    /// `F = T G` maps the input onto `system`; `T` includes the constant
    /// change of basis.
    pub t: Matrix<BiSeries>,
    /// Block-diagonal system.
    pub system: PerturbedSystem,
    /// `(start, size)` of each diagonal block.
    pub blocks: Vec<(usize, usize)>,
    /// Eigenvalue of `A_{0,0}` owning each block.
    pub eigenvalues: Vec<An>,
    /// The diagonal blocks as systems of their own.
    pub subsystems: Vec<PerturbedSystem>,
    /// Number of `xi` levels computed.
    pub levels: i64,
}

type Graded = BTreeMap<Q64, Matrix<An>>;

fn graded(m: &Matrix<Puiseux>) -> Graded {
    let mut exps = BTreeSet::new();
    for e in m.entries() {
        exps.extend(e.terms().keys().copied());
    }
    let mut out = Graded::new();
    for e in exps {
        let c = m.map(|p| p.coeff(e));
        if !c.entries().all(|v| v.is_zero()) {
            out.insert(e, c);
        }
    }
    out
}

fn min_prec(m: &Matrix<Puiseux>) -> Option<Q64> {
    m.entries().fold(None, |acc, e| min_opt(acc, e.prec()))
}

fn to_puiseux(n: usize, g: &Graded, cap: Option<Q64>) -> Matrix<Puiseux> {
    Matrix::from_fn(n, n, |i, j| Puiseux::from_terms(g.iter().map(|(e, m)| (*e, m.get(i, j).clone())), cap))
}

fn is_zero(m: &Matrix<An>) -> bool {
    m.entries().all(|v| v.is_zero())
}

/// Data fixed for every level: the block structure and `A_0 = A_00 + A_0^+`.
struct Frame<'a> {
    n: usize,
    blocks: &'a [(usize, usize)],
    a00: &'a Matrix<An>,
    a0p: Graded,
    x_rel: Q64,
}

impl Frame<'_> {
    /// Split `R` into the block-diagonal part (for `B`) and the solution
    /// of the off-diagonal Sylvester equations (for `T`).
    fn assign(&self, r: &Matrix<An>) -> Result<(Matrix<An>, Matrix<An>)> {
        let mut b = Matrix::<An>::zeros(self.n, self.n);
        let mut t = Matrix::<An>::zeros(self.n, self.n);
        for &(si, ni) in self.blocks {
            for &(sj, nj) in self.blocks {
                let rij = r.block(si, si + ni, sj, sj + nj);
                if si == sj {
                    b.set_block(si, sj, &rij);
                } else if !is_zero(&rij) {
                    let aii = self.a00.block(si, si + ni, si, si + ni);
                    let ajj = self.a00.block(sj, sj + nj, sj, sj + nj);
                    t.set_block(si, sj, &sylvester(&aii, &ajj, &rij.neg())?);
                }
            }
        }
        Ok((b, t))
    }

    /// Solve one `xi` level. `lower` is `Some((T_0^+, B_0^+))` for levels
    /// past the first; at level zero those are the maps being built.
    fn level(
        &self,
        known: &Graded,
        bound: Option<Q64>,
        lower: Option<(&Graded, &Graded)>,
    ) -> Result<(Graded, Graded, Option<Q64>)> {
        let mut tk = Graded::new();
        let mut bk = Graded::new();
        let mut todo: BTreeSet<Q64> = known.keys().copied().collect();
        let window = match lower {
            None => self.x_rel,
            Some(_) => match todo.first() {
                Some(e0) => *e0 + self.x_rel,
                None => return Ok((tk, bk, bound)),
            },
        };
        let mut cap = bound;
        while let Some(e) = todo.pop_first() {
            if bound.is_some_and(|b| e >= b) {
                break;
            }
            if e >= window {
                cap = min_opt(bound, Some(window));
                break;
            }
            let mut r = known.get(&e).cloned().unwrap_or_else(|| Matrix::zeros(self.n, self.n));
            for (te, t) in &tk {
                if let Some(a) = self.a0p.get(&(e - *te)) {
                    r = r.add(&a.mul(t));
                }
                let right = lower.map_or(&bk, |l| l.1);
                if let Some(b) = right.get(&(e - *te)) {
                    r = r.sub(&t.mul(b));
                }
            }
            if let Some((t0p, _)) = lower {
                for (te, t0) in t0p {
                    if let Some(b) = bk.get(&(e - *te)) {
                        r = r.sub(&t0.mul(b));
                    }
                }
            }
            let (b, t) = self.assign(&r)?;
            if !is_zero(&t) {
                todo.extend(self.a0p.keys().map(|a| e + *a));
                let right = lower.map_or(&bk, |l| l.1);
                todo.extend(right.keys().map(|a| e + *a));
                tk.insert(e, t);
            }
            if !is_zero(&b) {
                match lower {
                    None => todo.extend(tk.keys().map(|a| e + *a)),
                    Some((t0p, _)) => todo.extend(t0p.keys().map(|a| e + *a)),
                }
                bk.insert(e, b);
            }
        }
        Ok((tk, bk, cap))
    }
}

/// Basis matrix, `(start, size)` blocks and the owning eigenvalues.
type EigenBasis = (Matrix<An>, Vec<(usize, usize)>, Vec<An>);

/// Constant change of basis onto the generalised eigenspaces of `a00`.
fn eigen_basis(a00: &Matrix<An>) -> Result<EigenBasis> {
    let n = a00.rows();
    let (_, roots) = distinct_root_partition(&charpoly(a00))?;
    if roots.len() < 2 {
        return Err(Error::pre("splitting needs at least two distinct leading eigenvalues"));
    }
    let mut cols: Vec<Vec<An>> = Vec::new();
    let mut blocks = Vec::new();
    let mut eig = Vec::new();
    for (g, m) in roots {
        let shifted = a00.sub(&Matrix::<An>::identity(n).scale(&g));
        let ker = kernel(&matrix_pow(&shifted, m))?;
        if ker.len() != m {
            return Err(Error::pre("generalised eigenspace has the wrong dimension"));
        }
        blocks.push((cols.len(), m));
        eig.push(g);
        cols.extend(ker);
    }
    Ok((Matrix::from_fn(n, n, |i, j| cols[j][i].clone()), blocks, eig))
}

fn q_an(q: Q64) -> An {
    An::from_q(q64_to_q(q))
}

/// Block diagonalise `sys` according to the distinct eigenvalues of its
/// leading constant matrix.
pub fn split(sys: &PerturbedSystem, ord: &Orders) -> Result<SplitResult> {
    let n = sys.n();
    let rep: Rep = sys.rep;
    if rep.h < 1 {
        return Err(Error::pre("splitting needs a positive eps-rank"));
    }
    let (p, blocks, eigenvalues) = eigen_basis(&sys.leading_constant())?;
    let pinv = inverse(&p)?;
    let pl = lift_x(&p.map(|c| Puiseux::constant(c.clone())));
    let pil = lift_x(&pinv.map(|c| Puiseux::constant(c.clone())));
    let base = PerturbedSystem { m: pil.mul(&sys.m).mul(&pl), d: sys.d, rep };

    let kexcl = match base.known_xi_terms() {
        Some(k) => k.min(rep.h + ord.eps_terms + 1),
        None => rep.h + ord.eps_terms + 1,
    };
    if kexcl < 1 {
        return Err(Error::order("the leading coefficient is not known"));
    }
    let a: Vec<Matrix<Puiseux>> = (0..kexcl).map(|k| base.coeff_matrix(&rep, k)).collect();
    let a00 = at_zero(&a[0]);
    let mut a0p = graded(&a[0]);
    a0p.remove(&Q64::zero());
    let prec_a0 = min_prec(&a[0]);
    let frame = Frame { n, blocks: &blocks, a00: &a00, a0p, x_rel: ord.x_rel };

    // Level zero.
    let (t0p, b0p, cap0) = frame.level(&frame.a0p, prec_a0, None)?;
    let id = Matrix::<Puiseux>::identity(n);
    let mut t_lv = vec![id.add(&to_puiseux(n, &t0p, cap0))];
    let a00p = a00.map(|c| Puiseux::constant(c.clone()));
    let mut b_lv = vec![a00p.add(&to_puiseux(n, &b0p, cap0))];

    for k in 1..kexcl as usize {
        let mut known = a[k].mul(&t_lv[0]);
        for j in 1..k {
            known = known.add(&a[k - j].mul(&t_lv[j])).sub(&t_lv[j].mul(&b_lv[k - j]));
        }
        let kh = k as i64 - rep.h;
        if kh >= 0 {
            let tj = &t_lv[kh as usize];
            let c = q_an(Q64::from_integer(kh) * rep.sigma);
            let delta = tj.map(|f| f.derive().shift(rep.p).add(&f.scale(&c).shift(rep.p - Q64::one())));
            known = known.sub(&delta);
        }
        let kg = graded(&known);
        let mut bound = min_prec(&known);
        if let Some(e0) = kg.keys().next() {
            bound = min_opt(bound, prec_a0.map(|q| q + *e0));
            bound = min_opt(bound, cap0.map(|q| q + *e0));
        }
        let (tk, bk, cap) = frame.level(&kg, bound, Some((&t0p, &b0p)))?;
        t_lv.push(to_puiseux(n, &tk, cap));
        b_lv.push(to_puiseux(n, &bk, cap));
    }

    let kq = Q64::from_integer(kexcl);
    let bm = Matrix::from_fn(n, n, |i, j| {
        BiSeries::from_coeffs(b_lv.iter().enumerate().map(|(k, m)| (Q64::from_integer(k as i64), m.get(i, j).clone())), Some(kq))
    });
    let system = PerturbedSystem::from_normal_form(rep.h, rep.sigma, rep.p, sys.d, &bm)?;
    let subsystems = blocks
        .iter()
        .map(|&(s, m)| PerturbedSystem::from_normal_form(rep.h, rep.sigma, rep.p, sys.d, &bm.block(s, s + m, s, s + m)))
        .collect::<Result<Vec<_>>>()?;
    let t = pl.mul(&xi_levels_to_raw(&t_lv, &rep, sys.d, Some(kexcl)));
    Ok(SplitResult { t, system, blocks, eigenvalues, subsystems, levels: kexcl })
}

/// `M T - T M_B - dT/dx` for the input system and a split result. Every
/// known coefficient below `eps^((levels - h)/d)` should vanish.
pub fn split_residual(sys: &PerturbedSystem, res: &SplitResult) -> Matrix<BiSeries> {
    let dt = res.t.map(|f| f.derive());
    sys.m.mul(&res.t).sub(&res.t.mul(&res.system.m)).sub(&dt)
}
