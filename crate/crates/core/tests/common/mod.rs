//! Strategies and checks shared by the property suite and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeMap;

use atypical::bifurcation::{critical_values, milnor_jump_values};
use atypical::binfty::critical_values_at_infinity;
use atypical::elimination::{gcd_full, resultant};
use atypical::local::{intersection_multiplicity, milnor_number, milnor_pencil, solve_system, AlgebraicPoint};
use atypical::polyalg::{MultiPoly, Rational, UniPoly, Var};
use atypical::roots::{isolate_unipoly, AlgebraicNumber};
use atypical::Error;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CASES: u32 = 200;

pub fn x() -> MultiPoly {
    MultiPoly::var(Var::X)
}
pub fn y() -> MultiPoly {
    MultiPoly::var(Var::Y)
}
pub fn t() -> MultiPoly {
    MultiPoly::var(Var::T)
}
pub fn c(n: i64) -> MultiPoly {
    MultiPoly::int(n)
}
pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Fixture pairs `(f, g)` used for invariance checks.
pub fn corpus() -> Vec<(&'static str, MultiPoly, MultiPoly)> {
    vec![
        ("(x^3+1)/(xy+1)", x().pow(3) + c(1), x() * y() + c(1)),
        ("(xy+1)/(x^2+1)", x() * y() + c(1), x().pow(2) + c(1)),
        ("x+x^2y", x() + x().pow(2) * y(), c(1)),
        ("x^2+y^2", x().pow(2) + y().pow(2), c(1)),
        ("(y^2-x^3)/(x+1)", y().pow(2) - x().pow(3), x() + c(1)),
        ("x^2y^2+x", x().pow(2) * y().pow(2) + x(), c(1)),
    ]
}

/// Polynomial in `x, y` of total degree at most `d` with small integer
/// coefficients.
pub fn poly_xy(d: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0..=d, 0..=d, -3i64..=3), 1..=max_terms).prop_map(move |terms| {
        let mut p = MultiPoly::zero();
        for (i, j, k) in terms {
            if i + j <= d {
                p = p + c(k) * x().pow(i) * y().pow(j);
            }
        }
        p
    })
}

/// Polynomial with a prescribed `x`-degree and coefficients in `y`.
pub fn poly_in_x(dx: u32, dy: u32) -> impl Strategy<Value = MultiPoly> {
    let coeff = prop::collection::vec(-3i64..=3, (dy + 1) as usize);
    (prop::collection::vec(coeff.clone(), dx as usize), prop::collection::vec(-3i64..=3, (dy + 1) as usize), 1i64..=3)
        .prop_map(move |(lower, top, sign)| {
            let mut p = MultiPoly::zero();
            let mut all = lower;
            let mut top = top;
            if top.iter().all(|v| *v == 0) {
                top[0] = sign;
            }
            all.push(top);
            for (i, cs) in all.iter().enumerate() {
                for (j, k) in cs.iter().enumerate() {
                    p = p + c(*k) * x().pow(i as u32) * y().pow(j as u32);
                }
            }
            p
        })
}

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| r(n, d))
}

/// Invertible affine change of coordinates with small rational entries.
#[derive(Clone, Debug)]
pub struct Affine {
    pub m: [Rational; 4],
    pub shift: [Rational; 2],
}

impl Affine {
    pub fn apply(&self, p: &MultiPoly) -> MultiPoly {
        let nx = MultiPoly::constant(self.m[0].clone()) * x() + MultiPoly::constant(self.m[1].clone()) * y() + MultiPoly::constant(self.shift[0].clone());
        let ny = MultiPoly::constant(self.m[2].clone()) * x() + MultiPoly::constant(self.m[3].clone()) * y() + MultiPoly::constant(self.shift[1].clone());
        let mut b = BTreeMap::new();
        b.insert(Var::X, nx);
        b.insert(Var::Y, ny);
        p.substitute(&b)
    }
}

pub fn affine() -> impl Strategy<Value = Affine> {
    (rational_strategy(), rational_strategy(), rational_strategy(), rational_strategy(), rational_strategy(), rational_strategy())
        .prop_filter("invertible", |(a, b, cc, d, _, _)| a * d != b * cc)
        .prop_map(|(a, b, cc, d, e, h)| Affine { m: [a, b, cc, d], shift: [e, h] })
}

// ---------------------------------------------------------------- resultants

/// Sylvester matrix of `p` and `q` in `x`, entries in `Q[y]`.
pub fn sylvester(p: &MultiPoly, q: &MultiPoly) -> Vec<Vec<MultiPoly>> {
    let pc = p.coefficients_in(Var::X);
    let qc = q.coefficients_in(Var::X);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let size = m + n;
    let mut rows = Vec::new();
    for (coeffs, count) in [(&pc, n), (&qc, m)] {
        for i in 0..count {
            let mut row = vec![MultiPoly::zero(); size];
            for (k, cf) in coeffs.iter().enumerate() {
                row[i + (coeffs.len() - 1 - k)] = cf.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Determinant by fraction-free Bareiss elimination with exact division.
pub fn det(mut a: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = a.len();
    if n == 0 {
        return MultiPoly::one();
    }
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return MultiPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

pub fn check_resultant((p, q, s): (MultiPoly, MultiPoly, MultiPoly)) -> Result<(), TestCaseError> {
    let rpq = resultant(&p, &q, Var::X).unwrap();
    prop_assert_eq!(&rpq, &det(sylvester(&p, &q)));
    let m = p.degree_in(Var::X);
    let n = q.degree_in(Var::X);
    let rqp = resultant(&q, &p, Var::X).unwrap();
    let expected = if (m * n) % 2 == 1 { -rqp } else { rqp };
    prop_assert_eq!(&rpq, &expected);
    let prod = resultant(&(&p * &s), &q, Var::X).unwrap();
    prop_assert_eq!(prod, &rpq * &resultant(&s, &q, Var::X).unwrap());
    Ok(())
}

pub fn resultant_inputs() -> impl Strategy<Value = (MultiPoly, MultiPoly, MultiPoly)> {
    (1u32..=3, 1u32..=3, 1u32..=2).prop_flat_map(|(a, b, cc)| (poly_in_x(a, 2), poly_in_x(b, 2), poly_in_x(cc, 1)))
}

// -------------------------------------------------------------------- Bezout

fn top_form(p: &MultiPoly) -> MultiPoly {
    p.homogeneous_part_xy(p.degree_xy())
}

pub fn bezout_inputs() -> impl Strategy<Value = (MultiPoly, MultiPoly)> {
    (1u32..=2, 1u32..=3)
        .prop_flat_map(|(a, b)| (poly_xy(a, 6), poly_xy(b, 7)))
        .prop_filter("no common point at infinity", |(p, q)| {
            p.degree_xy() >= 1 && q.degree_xy() >= 1 && gcd_full(&top_form(p), &top_form(q)).is_constant()
        })
}

pub fn check_bezout((p, q): (MultiPoly, MultiPoly)) -> Result<(), TestCaseError> {
    let points = solve_system(&p, &q).unwrap();
    let mut total = 0;
    for pt in &points {
        prop_assert!(pt.lies_on(&p) && pt.lies_on(&q));
        total += intersection_multiplicity(&p, &q, pt).unwrap().total();
    }
    prop_assert_eq!(total as u32, p.degree_xy() * q.degree_xy());
    Ok(())
}

// ----------------------------------------------------------- semicontinuity

/// Pencil `f - t g` through the origin.
pub fn pencil_inputs() -> impl Strategy<Value = (MultiPoly, MultiPoly, Rational)> {
    (poly_xy(3, 5), poly_xy(3, 4), rational_strategy()).prop_map(|(f, g, t0)| {
        let f0 = f.eval_var(Var::X, &Rational::zero()).eval_var(Var::Y, &Rational::zero());
        let g0 = g.eval_var(Var::X, &Rational::zero()).eval_var(Var::Y, &Rational::zero());
        (&f - &f0, &g - &g0, t0)
    })
}

fn specialize(h: &MultiPoly, t0: &Rational) -> MultiPoly {
    h.eval_var(Var::T, t0)
}

pub fn check_semicontinuity((f, g, t0): (MultiPoly, MultiPoly, Rational)) -> Result<(), TestCaseError> {
    let h = &f - &(&t() * &g);
    let origin = AlgebraicPoint::origin();
    let records = match milnor_pencil(&h, &origin) {
        Ok(r) => r,
        Err(Error::NonIsolatedSingularity) => return Ok(()),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    };
    prop_assert_eq!(records.len(), 1);
    let rec = &records[0];
    for (v, mu) in &rec.mu_at {
        prop_assert!(*mu >= rec.mu_generic);
        if let Some(q) = v.as_rational() {
            match milnor_number(&specialize(&h, &q), &origin) {
                Ok(b) => prop_assert_eq!(b.total(), *mu),
                Err(e) => return Err(TestCaseError::fail(format!("at t = {q}: {e}"))),
            }
        }
    }
    let candidate = AlgebraicNumber::rational(t0.clone());
    if !candidate.member(&rec.candidates) {
        let b = milnor_number(&specialize(&h, &t0), &origin).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(b.total(), rec.mu_generic);
    }
    Ok(())
}

// ------------------------------------------------------- local oracles

/// `x^a + y^b` plus a term above the Newton boundary.
pub fn staircase_inputs() -> impl Strategy<Value = (u32, u32, u32, u32, i64)> {
    (2u32..=6, 2u32..=6, 0u32..=6, 0u32..=6, -3i64..=3).prop_filter("above the boundary", |(a, b, i, j, _)| i * b + j * a > a * b)
}

pub fn check_staircase((a, b, i, j, k): (u32, u32, u32, u32, i64)) -> Result<(), TestCaseError> {
    let h = x().pow(a) + y().pow(b) + c(k) * x().pow(i) * y().pow(j);
    let origin = AlgebraicPoint::origin();
    let mu = milnor_number(&h, &origin).unwrap().total();
    prop_assert_eq!(mu as u32, (a - 1) * (b - 1));
    let inter = intersection_multiplicity(&(x().pow(a) + y().pow(b)), &y(), &origin).unwrap().total();
    prop_assert_eq!(inter as u32, a);
    Ok(())
}

pub fn translation_inputs() -> impl Strategy<Value = (MultiPoly, MultiPoly, Rational, Rational)> {
    (poly_xy(3, 5), poly_xy(3, 5), rational_strategy(), rational_strategy()).prop_map(|(p, q, a, b)| {
        let p0 = p.eval_var(Var::X, &Rational::zero()).eval_var(Var::Y, &Rational::zero());
        let q0 = q.eval_var(Var::X, &Rational::zero()).eval_var(Var::Y, &Rational::zero());
        (&p - &p0, &q - &q0, a, b)
    })
}

pub fn check_translation((p, q, a, b): (MultiPoly, MultiPoly, Rational, Rational)) -> Result<(), TestCaseError> {
    let origin = AlgebraicPoint::origin();
    let here = match intersection_multiplicity(&p, &q, &origin) {
        Ok(m) => m.total(),
        Err(Error::NonIsolated) => return Ok(()),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    };
    let mut sub = BTreeMap::new();
    sub.insert(Var::X, x() + MultiPoly::constant(a.clone()));
    sub.insert(Var::Y, y() + MultiPoly::constant(b.clone()));
    let moved = AlgebraicPoint::rational(-a, -b);
    let there = intersection_multiplicity(&p.substitute(&sub), &q.substitute(&sub), &moved).unwrap().total();
    prop_assert_eq!(here, there);
    Ok(())
}

// ------------------------------------------------------------ root isolation

/// Product of random factors, some repeated, with known rational roots.
pub fn root_inputs() -> impl Strategy<Value = (Vec<(Rational, usize)>, Vec<i64>)> {
    (prop::collection::vec((rational_strategy(), 1usize..=3), 0..=3), prop::collection::vec(-4i64..=4, 0..=5))
}

pub fn check_roots((known, extra): (Vec<(Rational, usize)>, Vec<i64>)) -> Result<(), TestCaseError> {
    let mut p = UniPoly::from_i64(&extra);
    if p.is_zero() {
        p = UniPoly::one();
    }
    let mut expected: BTreeMap<Rational, usize> = BTreeMap::new();
    for (root, e) in &known {
        *expected.entry(root.clone()).or_default() += e;
        p = &p * &UniPoly::from_roots(&vec![root.clone(); *e]);
    }
    if p.is_constant() {
        prop_assert!(isolate_unipoly(&p).unwrap().is_empty());
        return Ok(());
    }
    let roots = isolate_unipoly(&p).unwrap();
    prop_assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), p.deg());
    for i in 0..roots.len() {
        prop_assert!(roots[i].is_root_of(&p));
        prop_assert_eq!(roots[i].multiplicity_in(&p), roots[i].multiplicity);
        for j in i + 1..roots.len() {
            prop_assert!(roots[i].bbox.disjoint(&roots[j].bbox));
            prop_assert!(!roots[i].equal(&roots[j]));
        }
    }
    for (root, e) in &expected {
        let a = AlgebraicNumber::rational(root.clone());
        let hits: Vec<&AlgebraicNumber> = roots.iter().filter(|b| b.equal(&a)).collect();
        prop_assert_eq!(hits.len(), 1);
        prop_assert!(hits[0].multiplicity >= *e);
        prop_assert_eq!(hits[0].as_rational(), Some(root.clone()));
    }
    Ok(())
}

pub fn equality_inputs() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    let p = prop::collection::vec(-4i64..=4, 2..=5).prop_filter("nonconstant", |v| v[1..].iter().any(|k| *k != 0));
    let q = prop::collection::vec(-4i64..=4, 1..=4).prop_filter("nonzero", |v| v.iter().any(|k| *k != 0));
    (p, q.clone(), q)
}

/// `equal` restricted to roots of `p` seen inside `p`, `p q` and `p r` is an
/// equivalence relation matching each root of `p` to exactly one root of the
/// products.
pub fn check_equality((p, q, s): (Vec<i64>, Vec<i64>, Vec<i64>)) -> Result<(), TestCaseError> {
    let p = UniPoly::from_i64(&p);
    let a = isolate_unipoly(&p).unwrap();
    let b = isolate_unipoly(&(&p * &UniPoly::from_i64(&q))).unwrap();
    let cc = isolate_unipoly(&(&p * &UniPoly::from_i64(&s))).unwrap();
    for ra in &a {
        prop_assert!(ra.equal(ra));
        let mb: Vec<&AlgebraicNumber> = b.iter().filter(|rb| ra.equal(rb)).collect();
        let mc: Vec<&AlgebraicNumber> = cc.iter().filter(|rc| ra.equal(rc)).collect();
        prop_assert_eq!(mb.len(), 1);
        prop_assert_eq!(mc.len(), 1);
        prop_assert!(mb[0].equal(ra));
        prop_assert!(mb[0].equal(mc[0]) && mc[0].equal(mb[0]));
    }
    Ok(())
}

// ------------------------------------------------------- coordinate changes

fn same_set(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> bool {
    a.len() == b.len() && a.iter().all(|v| v.member(b)) && b.iter().all(|v| v.member(a))
}

/// `K0` and the values at infinity outside `K0 ∪ K1`.
pub fn invariants(f: &MultiPoly, g: &MultiPoly) -> (Vec<AlgebraicNumber>, Vec<AlgebraicNumber>) {
    let k0 = critical_values(f, g).unwrap().values;
    let k1 = milnor_jump_values(f, g, &k0).unwrap().values;
    let mut special = k0.clone();
    special.extend(k1);
    let at_infinity = critical_values_at_infinity(f, g).unwrap().roots.into_iter().filter(|v| !v.member(&special)).collect();
    (k0, at_infinity)
}

pub fn shear_inputs() -> impl Strategy<Value = (usize, Affine)> {
    (0..corpus().len(), affine())
}

pub fn check_shear((k, phi): (usize, Affine)) -> Result<(), TestCaseError> {
    let (name, f, g) = &corpus()[k];
    let (k0, binf) = invariants(f, g);
    let (k0s, binfs) = invariants(&phi.apply(f), &phi.apply(g));
    prop_assert!(same_set(&k0, &k0s), "K0 of {} changed under {:?}: {:?} vs {:?}", name, phi, k0, k0s);
    prop_assert!(same_set(&binf, &binfs), "B_infty of {} changed under {:?}: {:?} vs {:?}", name, phi, binf, binfs);
    Ok(())
}
