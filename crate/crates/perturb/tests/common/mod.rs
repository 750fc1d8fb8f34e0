//! Strategies and checks shared by the property tests and the acceptance
//! harness. Each `check_*` returns a proptest verdict for one input.

#![allow(dead_code)]

use num_traits::Zero;
use perturb::coeff::{AlgebraicNumber as An, Q64};
use perturb::linalg::valuation::rank;
use perturb::linalg::{charpoly, gauge_apply, shear, Matrix, Orders, PerturbedSystem, Poly, Rep, Ring};
use perturb::reduce::{eps_rank_reduce, exp_order_system, gauss_theta, split, split_residual, theta, ReduceMode};
use perturb::scalar::from_coeffs;
use perturb::series::{BiSeries, Puiseux};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CASES: u32 = 256;

type Verdict = Result<(), TestCaseError>;

fn q(n: i64, d: i64) -> Q64 {
    Q64::new(n, d)
}

/// `(coefficient, x exponent, eps exponent)` triples.
pub type Terms = Vec<(i64, i64, i64)>;
pub type PencilCase = (usize, usize, Vec<i64>, Vec<Vec<(i64, i64)>>, Vec<Vec<(i64, i64)>>);
pub type ReducibleCase = (usize, i64, Vec<Terms>, Vec<i64>);
pub type GaugeCase = ((usize, i64, Vec<Terms>), Vec<(usize, usize, i64, i64, i64)>);

fn bi(terms: &[(i64, i64, i64)]) -> BiSeries {
    terms
        .iter()
        .fold(BiSeries::zero(), |acc, &(c, xe, ee)| acc.add(&BiSeries::monomial(An::from_i64(c), q(xe, 1), q(ee, 1))))
}

fn puiseux(terms: &[(i64, i64)]) -> Puiseux {
    terms.iter().fold(Puiseux::zero(), |acc, &(c, e)| acc.add(&Puiseux::monomial(An::from_i64(c), q(e, 1))))
}

fn terms(len: usize, xe: i64, ee: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Terms> {
    prop::collection::vec((-3i64..=3, 0..=xe, ee), 0..=len)
}

fn matrix_terms(n: usize, len: usize, xe: i64, ee: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Vec<Terms>> {
    prop::collection::vec(terms(len, xe, ee), n * n)
}

fn bi_matrix(n: usize, entries: &[Terms]) -> Matrix<BiSeries> {
    Matrix::from_fn(n, n, |i, j| bi(&entries[i * n + j]))
}

fn poly_eq(a: &Poly<Puiseux>, b: &Poly<Puiseux>) -> bool {
    let len = a.0.len().max(b.0.len());
    (0..len).all(|i| a.coeff(i).sub(&b.coeff(i)).is_exact_zero())
}

// ---------------------------------------------------------------------------
// (a) det G(lambda) = theta(lambda)

/// Coefficient of `xi^(n-r)` in `det(A_0 + xi (A_1 + lambda I))` by the
/// permutation expansion, choosing per column which summand contributes.
fn theta_by_permutations(a0: &Matrix<Puiseux>, a1: &Matrix<Puiseux>, r: usize) -> Poly<Puiseux> {
    let n = a0.rows();
    let mut total = Poly::<Puiseux>::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut perms = Vec::new();
    permutations(&mut perm, 0, &mut perms);
    for (p, sign) in perms {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != n - r {
                continue;
            }
            let mut prod = Poly::constant(Puiseux::one());
            for (j, &i) in p.iter().enumerate() {
                let f = if mask & (1 << j) != 0 {
                    let mut v = vec![a1.get(i, j).clone()];
                    if i == j {
                        v.push(Puiseux::one());
                    }
                    Poly::trimmed(v)
                } else {
                    Poly::constant(a0.get(i, j).clone())
                };
                prod = prod.rmul(&f);
            }
            total = if sign { total.radd(&prod) } else { total.rsub(&prod) };
        }
    }
    total
}

/// All permutations (as `row = p[col]`) with `true` for even ones.
fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<(Vec<usize>, bool)>) {
    if k == p.len() {
        let mut inversions = 0;
        for a in 0..p.len() {
            for b in a + 1..p.len() {
                if p[a] > p[b] {
                    inversions += 1;
                }
            }
        }
        out.push((p.clone(), inversions % 2 == 0));
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

pub fn pencil_case() -> impl Strategy<Value = PencilCase> {
    (2usize..=4).prop_flat_map(|n| {
        let cell = || prop::collection::vec((-3i64..=3, 0i64..=2), 0..=2);
        (
            Just(n),
            1..n,
            prop::collection::vec(prop::sample::select(vec![-2i64, -1, 1, 2, 3]), n),
            prop::collection::vec(cell(), n * n),
            prop::collection::vec(cell(), n * n),
        )
    })
}

pub fn pencil_determinant_is_theta((n, r, diag, c0, c1): PencilCase) -> Verdict {
    // A_0: first r columns with an invertible upper-triangular top block,
    // remaining columns zero, so rank A_0 = r.
    let a0 = Matrix::from_fn(n, n, |i, j| {
        if j >= r || (i < r && i > j) {
            Puiseux::zero()
        } else if i == j {
            puiseux(&[(diag[i], 0)])
        } else {
            puiseux(&c0[i * n + j])
        }
    });
    let a1 = Matrix::from_fn(n, n, |i, j| puiseux(&c1[i * n + j]));
    let a = Matrix::from_fn(n, n, |i, j| {
        BiSeries::from_x(a0.get(i, j).clone()).add(&BiSeries::from_x(a1.get(i, j).clone()).shift(Q64::zero(), q(1, 1)))
    });
    let mut sys = PerturbedSystem::from_normal_form(1, Q64::zero(), Q64::zero(), 1, &a).unwrap();
    sys.rep = Rep { h: 1, sigma: Q64::zero(), p: Q64::zero() };

    let oracle = theta_by_permutations(&a0, &a1, r);
    let pencil = gauss_theta(&a0, &a1, r);
    let th = theta(&sys, &Orders::default()).unwrap();
    prop_assert!(poly_eq(&pencil, &oracle), "det G differs from the expansion");
    prop_assert!(poly_eq(&th, &oracle), "theta differs from the expansion");
    // theta has degree n - r in lambda with leading coefficient det of
    // the top block.
    let lead: i64 = diag[..r].iter().product();
    prop_assert!(th.coeff(n - r).sub(&puiseux(&[(lead, 0)])).is_exact_zero());
    Ok(())
}

// ---------------------------------------------------------------------------
// (b) characteristic coefficients under unimodular gauges

pub fn elementary_ops() -> impl Strategy<Value = Vec<(usize, usize, i64, i64, i64)>> {
    prop::collection::vec((0usize..3, 0usize..3, prop::sample::select(vec![-2i64, -1, 1, 2]), 0i64..=2, 0i64..=2), 1..=4)
}

/// `T` as a product of elementary matrices `I + c x^a eps^b E_ij`, with
/// its exact inverse.
fn unimodular(n: usize, ops: &[(usize, usize, i64, i64, i64)]) -> (Matrix<BiSeries>, Matrix<BiSeries>) {
    let mut t = Matrix::<BiSeries>::identity(n);
    let mut tinv = Matrix::<BiSeries>::identity(n);
    for &(i, j, c, xe, ee) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = Matrix::<BiSeries>::identity(n);
        e.set(i, j, bi(&[(c, xe, ee)]));
        let mut einv = Matrix::<BiSeries>::identity(n);
        einv.set(i, j, bi(&[(-c, xe, ee)]));
        t = t.mul(&e);
        tinv = einv.mul(&tinv);
    }
    (t, tinv)
}

fn raw_system(n: usize, h: i64, entries: &[Terms]) -> PerturbedSystem {
    let a = bi_matrix(n, entries);
    PerturbedSystem::from_raw(a.map(|f| f.shift(Q64::zero(), q(-h, 1))), 1).unwrap()
}

pub fn gauge_case() -> impl Strategy<Value = GaugeCase> {
    (2usize..=3, 1i64..=3)
        .prop_flat_map(|(n, h)| (Just(n), Just(h), matrix_terms(n, 3, 2, 0..=2)))
        .prop_flat_map(|c| (Just(c), elementary_ops()))
}

pub fn characteristic_coefficients_move_by_bounded_amounts(((n, h, entries), ops): GaugeCase) -> Verdict {
    let sys = raw_system(n, h, &entries);
    let (t, tinv) = unimodular(n, &ops);
    prop_assert_eq!(t.mul(&tinv), Matrix::identity(n));
    let out = gauge_apply(&sys, &t, &tinv).unwrap();
    let alpha = charpoly(&sys.m);
    let beta = charpoly(&out.m);
    for i in 0..n {
        let diff = alpha[i].sub(&beta[i]);
        if let Some(v) = diff.val_eps() {
            let bound = q((1 - (n - i) as i64) * h, 1);
            prop_assert!(v >= bound, "i={} val={} bound={}", i, v, bound);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// (c) exponential order between h - 1 + r/n and h on irreducible output
// (f) every sweep lowers h + rank(A_0)/n

/// A random system made artificially reducible by a pole-introducing
/// diagonal gauge `diag(eps^a_i)`.
pub fn reducible_case() -> impl Strategy<Value = ReducibleCase> {
    (2usize..=3, 1i64..=2).prop_flat_map(|(n, h)| {
        (Just(n), Just(h), matrix_terms(n, 2, 2, 0..=3), prop::collection::vec(0i64..=2, n))
    })
}

fn sheared(n: usize, h: i64, entries: &[Terms], shifts: &[i64]) -> PerturbedSystem {
    let sys = raw_system(n, h, entries);
    let exps: Vec<(Q64, Q64)> = shifts.iter().map(|&a| (Q64::zero(), q(a, 1))).collect();
    let (t, tinv) = shear(&exps);
    gauge_apply(&sys, &t, &tinv).unwrap()
}

pub fn irreducible_output_brackets_the_exponential_order((n, h, entries, shifts): ReducibleCase) -> Verdict {
    let sys = sheared(n, h, &entries, &shifts);
    prop_assume!(sys.rep.h > 0);
    let ord = Orders::default();
    let red = eps_rank_reduce(&sys, &ord, ReduceMode::Differential).unwrap();
    prop_assume!(red.irreducible);
    let hq = red.exit_rep.h;
    let r = rank(&red.sys.coeff_matrix(&red.exit_rep, 0), &ord).unwrap() as i64;
    // The exponential order is a gauge invariant: read it off the input.
    let omega = exp_order_system(&sys, &ord).unwrap().omega * Q64::from_integer(red.sys.d);
    let lower = q(hq - 1, 1) + q(r, n as i64);
    prop_assert!(lower <= omega && omega <= q(hq, 1), "h={} r={} omega={}", hq, r, omega);
    Ok(())
}

pub fn each_sweep_lowers_the_moser_rank((n, h, entries, shifts): ReducibleCase) -> Verdict {
    let sys = sheared(n, h, &entries, &shifts);
    prop_assume!(sys.rep.h > 0);
    let red = eps_rank_reduce(&sys, &Orders::default(), ReduceMode::Differential).unwrap();
    let m: Vec<Q64> = red.history.iter().map(|&(h, r)| q(h, 1) + q(r as i64, n as i64)).collect();
    for w in red.history.windows(2) {
        let (a, b) = (w[0], w[1]);
        prop_assert!(b.0 < a.0 || (b.0 == a.0 && b.1 < a.1), "history {:?}", red.history);
    }
    prop_assert!(m.windows(2).all(|w| w[1] < w[0]));
    Ok(())
}

// ---------------------------------------------------------------------------
// (d) companion systems

pub fn scalar_case() -> impl Strategy<Value = (usize, Vec<Terms>)> {
    (2usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(terms(2, 2, -4..=2), n)))
}

pub fn companion_order_matches_scalar_formula((n, coeffs): (usize, Vec<Terms>)) -> Verdict {
    let mut cs: Vec<BiSeries> = coeffs.iter().map(|t| bi(t)).collect();
    cs.push(BiSeries::one());
    let eq = from_coeffs(Q64::zero(), cs.clone()).unwrap();
    // Oracle straight from the data.
    let mut oracle = Q64::zero();
    for (i, c) in cs.iter().enumerate().take(n) {
        if let Some(v) = c.val_eps() {
            oracle = oracle.max(-v / q((n - i) as i64, 1));
        }
    }
    prop_assert_eq!(eq.exp_order(), oracle);
    let comp = eq.companion().unwrap();
    prop_assert_eq!(exp_order_system(&comp, &Orders::default()).unwrap().omega, oracle);
    Ok(())
}

// ---------------------------------------------------------------------------
// (e) splitting

pub fn split_case() -> impl Strategy<Value = (usize, Vec<i64>, Vec<Terms>)> {
    (2usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(-2i64..=2, n).prop_filter("two distinct eigenvalues", |d| d.iter().any(|x| *x != d[0])),
            prop::collection::vec(prop::collection::vec((-2i64..=2, 0i64..=2, 0i64..=1), 0..=2), n * n),
        )
    })
}

pub fn split_is_block_diagonal((n, diag, pert): (usize, Vec<i64>, Vec<Terms>)) -> Verdict {
    // A = D + (terms vanishing at x = xi = 0).
    let a = Matrix::from_fn(n, n, |i, j| {
        let extra: Terms = pert[i * n + j].iter().copied().filter(|t| t.1 + t.2 > 0).collect();
        let d = if i == j { vec![(diag[i], 0, 0)] } else { vec![] };
        bi(&[d, extra].concat())
    });
    let sys = PerturbedSystem::from_normal_form(1, Q64::zero(), Q64::zero(), 1, &a).unwrap();
    prop_assert_eq!(sys.rep, Rep { h: 1, sigma: Q64::zero(), p: Q64::zero() });
    let res = split(&sys, &Orders::with_order(3)).unwrap();

    let mut owner = vec![usize::MAX; n];
    for (b, &(s, len)) in res.blocks.iter().enumerate() {
        for o in owner.iter_mut().skip(s).take(len) {
            *o = b;
        }
    }
    prop_assert!(owner.iter().all(|&o| o != usize::MAX));
    for i in 0..n {
        for j in 0..n {
            if owner[i] != owner[j] {
                prop_assert!(res.system.m.get(i, j).terms().values().all(|c| !c.has_terms()), "coupling at ({}, {})", i, j);
            }
        }
    }
    // Leading constant matrix: D itself up to reordering the basis.
    let lc = res.system.coeff_matrix(&sys.rep, 0);
    let mut seen = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = lc.get(i, j).coeff(Q64::zero());
            if i == j {
                prop_assert_eq!(&c, &res.eigenvalues[owner[i]]);
                seen.push(c.to_rational().unwrap());
            } else {
                prop_assert!(c.is_zero());
            }
        }
    }
    let mut want: Vec<_> = diag.iter().map(|&d| perturb::coeff::Q::from_integer(d.into())).collect();
    want.sort();
    seen.sort();
    prop_assert_eq!(seen, want);
    // F = T G to the guaranteed order.
    let bound = Q64::new(res.levels - sys.rep.h, sys.d);
    for e in split_residual(&sys, &res).entries() {
        for (ee, c) in e.terms() {
            if *ee < bound {
                prop_assert!(!c.has_terms(), "residual at eps^{}", ee);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// (g) series ring axioms and the product rule

pub fn series() -> impl Strategy<Value = BiSeries> {
    prop::collection::vec((-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=2, -2i64..=2), 0..=4).prop_map(|ts| {
        ts.into_iter().fold(BiSeries::zero(), |acc, (c, cd, xn, xd, e)| {
            acc.add(&BiSeries::monomial(An::from_frac(c, cd), q(xn, xd), q(e, 1)))
        })
    })
}

pub fn series_form_a_commutative_ring((a, b, c): (BiSeries, BiSeries, BiSeries)) -> Verdict {
    prop_assert_eq!(a.add(&b), b.add(&a));
    prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    prop_assert_eq!(a.mul(&b), b.mul(&a));
    prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    prop_assert_eq!(a.mul(&BiSeries::one()), a.clone());
    prop_assert_eq!(a.add(&BiSeries::zero()), a.clone());
    prop_assert!(a.sub(&a).is_exact_zero());
    Ok(())
}

pub fn derivative_obeys_the_product_rule((a, b): (BiSeries, BiSeries)) -> Verdict {
    prop_assert_eq!(a.mul(&b).derive(), a.derive().mul(&b).add(&a.mul(&b.derive())));
    prop_assert_eq!(a.add(&b).derive(), a.derive().add(&b.derive()));
    Ok(())
}
