//! Eps-rank reduction: column reduction of the leading matrix, the
//! elimination sweep driven by left null vectors of `G(0)`, and shearing,
//! repeated until `theta` stops vanishing or the eps-rank drops to zero.

use num_traits::{One, Zero};

use super::theta::gauss_theta;
use super::{is_zero_matrix, require_known, theta_is_zero};
use crate::coeff::Q64;
use crate::error::{Error, Result};
use crate::linalg::valuation::{constant_left_kernel, left_null_vector, rank, smith_columns};
use crate::linalg::{gauge_raw, lift_x, shear, Matrix, Orders, PerturbedSystem, Rep};
use crate::series::{BiSeries, Puiseux};

/// How derivative terms of the transformations enter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceMode {
    /// A genuine differential system: at `h = 1` only constant eliminations
    /// are allowed, since `x`-dependent ones disturb `A_1`.
    Differential,
    /// A matrix with constant coefficients in the distinguished variable
    /// (used for the leading matrix at a turning point): derivatives vanish.
    Algebraic,
}

/// Outcome of [`eps_rank_reduce`].
#[derive(Clone, Debug)]
pub struct RankReduction {
    /// The reduced system, renormalised.
    pub sys: PerturbedSystem,
    /// `F = T G` maps the input system onto `sys`.
    pub t: Matrix<BiSeries>,
    pub tinv: Matrix<BiSeries>,
    /// `(h, rank A_0)` at the start of every sweep, in the engine's view.
    pub history: Vec<(i64, usize)>,
    /// Exit view of the engine; `sys.rep` is the renormalised one.
    pub exit_rep: Rep,
    /// `theta` is not identically zero at exit.
    pub irreducible: bool,
    /// Stopped at `h = 1` without a constant elimination.
    pub stuck: bool,
}

impl RankReduction {
    pub fn final_rank(&self) -> Option<usize> {
        self.history.last().map(|x| x.1)
    }
}

/// View used while transforming. With `p < 1` the derivative of an
/// `x`-dependent transformation can leave the holomorphic ring, so the
/// slope is lowered to `sigma + (p - 1)/h` and `p` raised to one.
fn working_view(sys: &PerturbedSystem) -> Rep {
    let r = sys.rep;
    let frac = sys.m.entries().any(|e| e.ram().0 > 1);
    if r.h > 0 && r.p < Q64::one() && (!r.sigma.is_zero() || frac || r.p < Q64::zero()) {
        Rep { h: r.h, sigma: r.sigma + (r.p - Q64::one()) / Q64::from_integer(r.h), p: Q64::one() }
    } else {
        r
    }
}

struct State {
    m: Matrix<BiSeries>,
    d: i64,
    t: Matrix<BiSeries>,
    tinv: Matrix<BiSeries>,
}

impl State {
    fn sys(&self, rep: Rep) -> PerturbedSystem {
        PerturbedSystem { m: self.m.clone(), d: self.d, rep }
    }

    fn coeff(&self, rep: &Rep, k: i64) -> Result<Matrix<Puiseux>> {
        let s = self.sys(*rep);
        require_known(&s, rep, k)?;
        Ok(s.coeff_matrix(rep, k))
    }

    fn apply(&mut self, g: &Matrix<BiSeries>, ginv: &Matrix<BiSeries>) {
        self.m = gauge_raw(&self.m, g, ginv);
        self.t = self.t.mul(g);
        self.tinv = ginv.mul(&self.tinv);
    }
}

/// `G(0)`: the first `r` columns of `A_0` next to the last `n - r`
/// columns of `A_1`.
fn pencil_at_zero(a0: &Matrix<Puiseux>, a1: &Matrix<Puiseux>, r: usize) -> Matrix<Puiseux> {
    let n = a0.rows();
    Matrix::from_fn(n, n, |i, j| if j < r { a0.get(i, j).clone() } else { a1.get(i, j).clone() })
}

fn permutation(n: usize, a: usize, b: usize) -> Matrix<BiSeries> {
    let mut p = Matrix::<BiSeries>::identity(n);
    p.swap_cols(a, b);
    p
}

/// Reduce the eps-rank of `sys` (Moser-type reduction in the parameter).
pub fn eps_rank_reduce(sys: &PerturbedSystem, ord: &Orders, mode: ReduceMode) -> Result<RankReduction> {
    let n = sys.n();
    let mut rep = working_view(sys);
    let mut st = State { m: sys.m.clone(), d: sys.d, t: Matrix::identity(n), tinv: Matrix::identity(n) };
    let mut history = Vec::new();
    let mut irreducible = false;
    let mut stuck = false;
    let budget = (n as i64 + 1) * (rep.h.max(0) + 2) + 8;
    let mut sweeps = 0i64;

    'outer: loop {
        while rep.h > 0 && is_zero_matrix(&st.coeff(&rep, 0)?, ord)? {
            rep.h -= 1;
        }
        if rep.h <= 0 {
            break;
        }
        sweeps += 1;
        if sweeps > budget {
            return Err(Error::pre("eps-rank reduction did not terminate"));
        }

        // Bring A_0 into the form with its last n - r columns zero.
        let a0 = st.coeff(&rep, 0)?;
        let cr = smith_columns(&a0, ord)?;
        let r = cr.rank;
        let mut in_form = true;
        for j in r..n {
            for i in 0..n {
                if !a0.get(i, j).is_zero_certain(ord.certainty)? {
                    in_form = false;
                }
            }
        }
        if !in_form {
            st.apply(&lift_x(&cr.u), &lift_x(&cr.uinv));
        }
        history.push((rep.h, r));

        let a0 = st.coeff(&rep, 0)?;
        let a1 = st.coeff(&rep, 1)?;
        if !theta_is_zero(&gauss_theta(&a0, &a1, r), ord)? {
            irreducible = true;
            break;
        }

        let constant_only = rep.h == 1 && mode == ReduceMode::Differential;
        let mut rho = 0usize;
        while rho < n - r {
            let a0 = st.coeff(&rep, 0)?;
            let a1 = st.coeff(&rep, 1)?;
            let g0 = pencil_at_zero(&a0, &a1, r);
            if rank(&g0.block(0, r, 0, n - rho), ord)? < r {
                break;
            }
            let sub = g0.block(0, n - rho, 0, n - rho);
            let last = n - rho - 1;
            let w: Vec<Puiseux> = if constant_only {
                let basis = constant_left_kernel(&sub)?;
                match basis.into_iter().find(|v| v[r..=last].iter().any(|c| !c.is_zero())) {
                    Some(v) => v.into_iter().map(Puiseux::constant).collect(),
                    None => {
                        stuck = true;
                        break 'outer;
                    }
                }
            } else {
                match left_null_vector(&sub, ord)? {
                    Some(w) => w,
                    None => return Err(Error::order("G(0) is nonsingular although theta vanishes")),
                }
            };
            // Pivot: least valuation among the lower entries, ties to the
            // highest index.
            let mut piv: Option<(Q64, usize)> = None;
            for (j, wj) in w.iter().enumerate().take(last + 1).skip(r) {
                if let Some(v) = wj.val() {
                    if piv.is_none_or(|(pv, _)| v <= pv) {
                        piv = Some((v, j));
                    }
                }
            }
            let Some((_, pj)) = piv else {
                return Err(Error::order("left null vector has no known entry past the first block"));
            };
            let mut w = w;
            w.swap(pj, last);
            let p = permutation(n, pj, last);
            let inv = w[last].inv(ord.x_rel)?;
            let mut q = Matrix::<BiSeries>::zeros(n, n);
            for j in r..last {
                if w[j].has_terms() {
                    q.set(last, j, BiSeries::from_x(w[j].mul(&inv).neg()));
                }
            }
            let id = Matrix::<BiSeries>::identity(n);
            let t = p.mul(&id.add(&q));
            let tinv = id.sub(&q).mul(&p);
            st.apply(&t, &tinv);
            rho += 1;
        }

        let xi = (rep.sigma, Q64::new(1, st.d));
        let exps: Vec<(Q64, Q64)> =
            (0..n).map(|i| if i < r || i >= n - rho { xi } else { (Q64::zero(), Q64::zero()) }).collect();
        let (s, sinv) = shear(&exps);
        st.apply(&s, &sinv);
    }

    let mut out = st.sys(rep);
    out.renormalize();
    Ok(RankReduction { sys: out, t: st.t, tinv: st.tinv, history, exit_rep: rep, irreducible, stuck })
}
