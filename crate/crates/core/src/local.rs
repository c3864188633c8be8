//! Zero-dimensional solving and local intersection numbers.
//!
//! Points are grouped into conjugate classes over a number field
//! `Q[u]/(m)`; every computation at a point runs with dynamic evaluation, so a
//! class splits whenever a test distinguishes its members.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::elimination::{gcd_full, resultant};
use crate::error::{Error, Result};
use crate::polyalg::{dynamic_eval, Dyn, DynResult, MultiPoly, NfPoly, NumberField, Rational, UniPoly, Var};
use crate::roots::{isolate_unipoly, AlgebraicNumber, Cq};

const FULTON_STEP_LIMIT: usize = 50_000;
const SHEAR_ATTEMPTS: i64 = 64;

/// The conjugate points `(X(u), Y(u))` for `u` ranging over the roots of the
/// squarefree monic `modulus`.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicPoint {
    pub modulus: UniPoly,
    pub x: UniPoly,
    pub y: UniPoly,
}

impl AlgebraicPoint {
    pub fn new(modulus: &UniPoly, x: &UniPoly, y: &UniPoly) -> Self {
        let modulus = modulus.monic();
        AlgebraicPoint { x: x.rem(&modulus), y: y.rem(&modulus), modulus }
    }

    pub fn rational(a: Rational, b: Rational) -> Self {
        Self::new(&UniPoly::var(), &UniPoly::constant(a), &UniPoly::constant(b))
    }

    pub fn origin() -> Self {
        Self::rational(Rational::zero(), Rational::zero())
    }

    /// Number of geometric points represented.
    pub fn count(&self) -> usize {
        self.modulus.deg()
    }

    pub fn field(&self) -> NumberField {
        NumberField::new(&self.modulus)
    }

    /// Same class restricted to the roots of a factor of the modulus.
    pub fn restrict(&self, factor: &UniPoly) -> AlgebraicPoint {
        Self::new(factor, &self.x, &self.y)
    }

    /// `h(x + X(u), y + Y(u))` reduced modulo `m(u)`; `h` must not involve `u`.
    pub fn translate(&self, h: &MultiPoly) -> MultiPoly {
        let mut b = BTreeMap::new();
        b.insert(Var::X, MultiPoly::var(Var::X) + MultiPoly::from_unipoly(&self.x, Var::U));
        b.insert(Var::Y, MultiPoly::var(Var::Y) + MultiPoly::from_unipoly(&self.y, Var::U));
        h.substitute(&b).reduce_mod(Var::U, &self.modulus)
    }

    /// True when `h` vanishes at every point of the class.
    pub fn lies_on(&self, h: &MultiPoly) -> bool {
        let v = self.translate(h).eval_var(Var::X, &Rational::zero()).eval_var(Var::Y, &Rational::zero());
        v.is_zero()
    }

    /// Numeric coordinates of each conjugate.
    pub fn approx_coordinates(&self) -> Vec<(Complex64, Complex64)> {
        let w = Rational::new(1.into(), num_bigint::BigInt::from(10).pow(30));
        isolate_unipoly(&self.modulus)
            .expect("modulus is nonzero")
            .into_iter()
            .map(|r| {
                let c = r.refine(&w).center();
                (eval_at(&self.x, &c).to_c64(), eval_at(&self.y, &c).to_c64())
            })
            .collect()
    }
}

fn eval_at(p: &UniPoly, z: &Cq) -> Cq {
    let mut acc = Cq::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
    }
    acc
}

impl fmt::Debug for AlgebraicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgebraicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus.deg() == 1 {
            let x = self.x.coeff(0);
            let y = self.y.coeff(0);
            write!(f, "({x}, {y})")
        } else {
            write!(f, "(x, y) = ({}, {}) where {} = 0", self.x.fmt_var("u"), self.y.fmt_var("u"), self.modulus.fmt_var("u"))
        }
    }
}

/// Values attached to the conjugate classes a computation split into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branches<T> {
    pub items: Vec<(AlgebraicPoint, T)>,
}

impl<T: Clone + PartialEq> Branches<T> {
    /// The common value when every branch agrees.
    pub fn uniform(&self) -> Option<T> {
        let first = self.items.first()?.1.clone();
        self.items.iter().all(|(_, v)| *v == first).then_some(first)
    }
}

impl Branches<usize> {
    /// Sum over geometric points.
    pub fn total(&self) -> usize {
        self.items.iter().map(|(p, v)| p.count() * v).sum()
    }
}

fn shear_param(k: i64) -> i64 {
    if k == 0 {
        0
    } else if k % 2 == 1 {
        (k + 1) / 2
    } else {
        -(k / 2)
    }
}

fn only_xy(p: &MultiPoly) -> bool {
    !(p.contains_var(Var::Z) || p.contains_var(Var::T) || p.contains_var(Var::U))
}

/// All common zeros of `p` and `q` in `C^2`, grouped in conjugate classes.
pub fn solve_system(p: &MultiPoly, q: &MultiPoly) -> Result<Vec<AlgebraicPoint>> {
    if !only_xy(p) || !only_xy(q) {
        return Err(Error::Input("solve_system expects polynomials in x and y".into()));
    }
    if (p.is_constant() && !p.is_zero()) || (q.is_constant() && !q.is_zero()) {
        return Ok(Vec::new());
    }
    if p.is_zero() || q.is_zero() || !gcd_full(p, q).is_constant() {
        return Err(Error::PositiveDimensional);
    }
    let (x, y) = (MultiPoly::var(Var::X), MultiPoly::var(Var::Y));
    for k in 0..SHEAR_ATTEMPTS {
        let lambda = shear_param(k);
        let sheared = &y + &x.scale(&Rational::from_integer(lambda.into()));
        let ps = p.substitute_one(Var::Y, &sheared);
        let qs = q.substitute_one(Var::Y, &sheared);
        let r = resultant(&ps, &qs, Var::X)?;
        if r.is_constant() {
            return Ok(Vec::new());
        }
        let s = r.to_unipoly(Var::Y).expect("resultant is univariate").squarefree_part();
        let pu = ps.swap_vars(Var::Y, Var::U);
        let qu = qs.swap_vars(Var::Y, Var::U);
        let branches = dynamic_eval(&s, |field| {
            let a = NfPoly::from_multi(&pu, Var::X, field);
            let b = NfPoly::from_multi(&qu, Var::X, field);
            let g = a.gcd(&b, field)?;
            if g.0.is_empty() {
                return Err(Dyn::Fail(Error::PositiveDimensional));
            }
            let g = g.squarefree_part(field)?;
            Ok(match g.degree() {
                0 => Some(None),
                1 => Some(Some(-&g.0[0])),
                _ => None,
            })
        })?;
        if branches.iter().any(|(_, v)| v.is_none()) {
            continue;
        }
        let lam = Rational::from_integer(lambda.into());
        let pts = branches
            .into_iter()
            .filter_map(|(field, v)| {
                let xs = v.unwrap()?;
                let ys = &UniPoly::var() + &xs.scale(&lam);
                Some(AlgebraicPoint::new(field.modulus(), &xs, &ys))
            })
            .collect();
        return Ok(pts);
    }
    Err(Error::Limit("no separating shear found".into()))
}

/// Characteristic polynomial in `t` of `v(u)` over `Q[u]/(m)`, i.e.
/// `prod (t - v(a))` over the roots `a` of `m`.
pub fn char_poly(modulus: &UniPoly, v: &UniPoly) -> UniPoly {
    let m = MultiPoly::from_unipoly(modulus, Var::U);
    let tv = MultiPoly::var(Var::T) - MultiPoly::from_unipoly(v, Var::U);
    let r = resultant(&m, &tv, Var::U).expect("operands are nonzero");
    r.to_unipoly(Var::T).expect("resultant is univariate in t")
}

/// Decides whether a coefficient in `Q[u]/(m)[t]` is nonzero; every
/// `t`-dependent nonzero coefficient is recorded.
fn nonzero(c: &MultiPoly, field: &NumberField, record: &mut Vec<MultiPoly>) -> DynResult<bool> {
    let mut any = false;
    for ct in c.coefficients_in(Var::T) {
        let uc = ct.to_unipoly(Var::U).expect("coefficient lives in Q[u]");
        if !field.is_zero(&uc)? {
            any = true;
        }
    }
    if any && c.contains_var(Var::T) {
        record.push(c.clone());
    }
    Ok(any)
}

fn at_origin(f: &MultiPoly) -> MultiPoly {
    f.eval_var(Var::X, &Rational::zero()).eval_var(Var::Y, &Rational::zero())
}

fn div_y(f: &MultiPoly) -> MultiPoly {
    f.div_exact(&MultiPoly::var(Var::Y)).expect("F(x, 0) vanishes, so y divides F")
}

/// Fulton's algorithm for the intersection number at the origin of two
/// polynomials in `x, y` with coefficients in `Q[u]/(m)[t]`, treating `t` as
/// transcendental.
fn fulton(f: &MultiPoly, g: &MultiPoly, field: &NumberField, record: &mut Vec<MultiPoly>) -> DynResult<usize> {
    let mut f = field.reduce_multi(f);
    let mut g = field.reduce_multi(g);
    let common = field.reduce_multi(&gcd_full(&f, &g));
    if common.degree_xy() > 0 && field.reduce_multi(&at_origin(&common)).is_zero() {
        return Err(Dyn::Fail(Error::NonIsolated));
    }
    let mut seen = HashSet::new();
    let mut acc = 0;
    for _ in 0..FULTON_STEP_LIMIT {
        // The iteration is deterministic up to scaling, so a repeated state
        // means it never terminates.
        if !seen.insert((f.primitive_integer().to_string(), g.primitive_integer().to_string())) {
            return Err(Dyn::Fail(Error::NonIsolated));
        }
        let f00 = at_origin(&f);
        let g00 = at_origin(&g);
        let mut scratch = Vec::new();
        let fz = !nonzero(&f00, field, &mut scratch)?;
        let gz = !nonzero(&g00, field, &mut scratch)?;
        match (fz, gz) {
            (false, false) => {
                // Both curves miss the origin; it matters only where both
                // constant terms vanish together.
                let a = NfPoly::from_multi(&f00, Var::T, field);
                let b = NfPoly::from_multi(&g00, Var::T, field);
                let common = a.gcd(&b, field)?;
                if common.degree() >= 1 {
                    record.push(common.to_multi(Var::T));
                }
                return Ok(acc);
            }
            (false, true) => {
                record.push(f00);
                return Ok(acc);
            }
            (true, false) => {
                record.push(g00);
                return Ok(acc);
            }
            (true, true) => {}
        }
        if f.is_zero() || g.is_zero() {
            return Err(Dyn::Fail(Error::NonIsolated));
        }
        let f0 = f.eval_var(Var::Y, &Rational::zero()).coefficients_in(Var::X);
        let g0 = g.eval_var(Var::Y, &Rational::zero()).coefficients_in(Var::X);
        let df = top_degree(&f0, field, record)?;
        let dg = top_degree(&g0, field, record)?;
        match (df, dg) {
            (None, None) => return Err(Dyn::Fail(Error::NonIsolated)),
            (None, Some(_)) => {
                acc += low_order(&g0, field, record)?;
                f = div_y(&f);
            }
            (Some(_), None) => {
                acc += low_order(&f0, field, record)?;
                g = div_y(&g);
            }
            (Some(r), Some(s)) => {
                let (r, s, lf, lg) = if r <= s {
                    (r, s, f0[r].clone(), g0[s].clone())
                } else {
                    std::mem::swap(&mut f, &mut g);
                    (s, r, g0[s].clone(), f0[r].clone())
                };
                let mut shift = [0u32; crate::polyalg::NVARS];
                shift[Var::X.index()] = (s - r) as u32;
                let next = &(&lf * &g) - &(&lg * &f.mul_monomial(&shift));
                g = field.reduce_multi(&next).primitive_integer();
            }
        }
    }
    Err(Dyn::Fail(Error::Limit("intersection multiplicity step limit".into())))
}

fn top_degree(c: &[MultiPoly], field: &NumberField, record: &mut Vec<MultiPoly>) -> DynResult<Option<usize>> {
    for k in (0..c.len()).rev() {
        if nonzero(&c[k], field, record)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

fn low_order(c: &[MultiPoly], field: &NumberField, record: &mut Vec<MultiPoly>) -> DynResult<usize> {
    for (k, ck) in c.iter().enumerate() {
        if nonzero(ck, field, record)? {
            return Ok(k);
        }
    }
    unreachable!("low_order called on a vanishing polynomial")
}

/// Runs Fulton's algorithm at `pt` for polynomials in `x, y` and optionally
/// `t`, returning the value and recorded `t`-conditions per branch.
fn fulton_at(p: &MultiPoly, q: &MultiPoly, pt: &AlgebraicPoint) -> Result<Vec<(AlgebraicPoint, usize, Vec<MultiPoly>)>> {
    let tp = pt.translate(p);
    let tq = pt.translate(q);
    let out = dynamic_eval(&pt.modulus, |field| {
        let mut record = Vec::new();
        let v = fulton(&tp, &tq, field, &mut record)?;
        Ok((v, record))
    })?;
    Ok(out.into_iter().map(|(field, (v, rec))| (pt.restrict(field.modulus()), v, rec)).collect())
}

/// Local intersection number of `p = 0` and `q = 0` at each point of `pt`.
pub fn intersection_multiplicity(p: &MultiPoly, q: &MultiPoly, pt: &AlgebraicPoint) -> Result<Branches<usize>> {
    if p.contains_var(Var::T) || q.contains_var(Var::T) {
        return Err(Error::Input("intersection_multiplicity expects t-free polynomials".into()));
    }
    let items = fulton_at(p, q, pt)?.into_iter().map(|(b, v, _)| (b, v)).collect();
    Ok(Branches { items })
}

/// Milnor number of `h` at each point of `pt`; zero at regular points.
pub fn milnor_number(h: &MultiPoly, pt: &AlgebraicPoint) -> Result<Branches<usize>> {
    intersection_multiplicity(&h.derivative(Var::X), &h.derivative(Var::Y), pt).map_err(|e| match e {
        Error::NonIsolated => Error::NonIsolatedSingularity,
        e => e,
    })
}

/// Milnor data of a pencil member `h(x, y, t)` at a class of points.
#[derive(Clone, Debug)]
pub struct MilnorRecord {
    pub point: AlgebraicPoint,
    pub mu_generic: usize,
    /// Values `t0` at which some point of the class has Milnor number `mu`.
    /// Only candidate values are listed; elsewhere `mu = mu_generic`.
    pub mu_at: Vec<(AlgebraicNumber, usize)>,
    pub candidates: Vec<AlgebraicNumber>,
    /// Branch conditions in `Q[u][t]` recorded by the transcendental run.
    pub conditions: Vec<MultiPoly>,
}

impl MilnorRecord {
    /// Values where some point of the class jumps.
    pub fn jumps(&self) -> Vec<AlgebraicNumber> {
        let mut out: Vec<AlgebraicNumber> = Vec::new();
        for (t0, mu) in &self.mu_at {
            if *mu != self.mu_generic && !t0.member(&out) {
                out.push(t0.clone());
            }
        }
        out
    }
}

fn map_isolated(e: Error) -> Error {
    match e {
        Error::NonIsolated => Error::NonIsolatedSingularity,
        e => e,
    }
}

/// Joint classes of `(u, t)` with `m(u) = 0` and `c(u, t) = 0`: returns the
/// combined points with `x` the `u`-value and `y` the `t`-value.
fn combined_field(modulus: &UniPoly, c: &MultiPoly) -> Result<Vec<AlgebraicPoint>> {
    let mut b = BTreeMap::new();
    b.insert(Var::U, MultiPoly::var(Var::X));
    b.insert(Var::T, MultiPoly::var(Var::Y));
    solve_system(&MultiPoly::from_unipoly(modulus, Var::X), &c.substitute(&b))
}

/// Specializes `u -> X(w)`, `t -> Y(w)` and runs Fulton over `Q[w]/(M)`.
fn specialized(tp: &MultiPoly, tq: &MultiPoly, joint: &AlgebraicPoint) -> Result<Vec<(NumberField, usize)>> {
    let mut b = BTreeMap::new();
    b.insert(Var::U, MultiPoly::from_unipoly(&joint.x, Var::U));
    b.insert(Var::T, MultiPoly::from_unipoly(&joint.y, Var::U));
    let sp = tp.substitute(&b).reduce_mod(Var::U, &joint.modulus);
    let sq = tq.substitute(&b).reduce_mod(Var::U, &joint.modulus);
    dynamic_eval(&joint.modulus, |field| fulton(&sp, &sq, field, &mut Vec::new())).map_err(map_isolated)
}

/// Milnor numbers of `h(x, y, t)` at `pt` for generic `t` and at every value
/// of `t` where they could change.
pub fn milnor_pencil(h: &MultiPoly, pt: &AlgebraicPoint) -> Result<Vec<MilnorRecord>> {
    let hx = h.derivative(Var::X);
    let hy = h.derivative(Var::Y);
    let runs = fulton_at(&hx, &hy, pt).map_err(map_isolated)?;
    let mut out = Vec::new();
    for (branch, mu_generic, conditions) in runs {
        let tp = branch.translate(&hx);
        let tq = branch.translate(&hy);
        let mut candidates: Vec<AlgebraicNumber> = Vec::new();
        let mut mu_at: Vec<(AlgebraicNumber, usize)> = Vec::new();
        for c in &conditions {
            for joint in combined_field(&branch.modulus, c)? {
                for (field, mu) in specialized(&tp, &tq, &joint)? {
                    assert!(mu >= mu_generic, "Milnor number dropped under specialization");
                    let r = char_poly(field.modulus(), &joint.y.rem(field.modulus()));
                    for t0 in isolate_unipoly(&r)? {
                        let t0 = AlgebraicNumber { multiplicity: 1, ..t0 }.simplified();
                        if !t0.member(&candidates) {
                            candidates.push(t0.clone());
                        }
                        if !mu_at.iter().any(|(s, m)| *m == mu && s.equal(&t0)) {
                            mu_at.push((t0, mu));
                        }
                    }
                }
            }
        }
        out.push(MilnorRecord { point: branch, mu_generic, mu_at, candidates, conditions });
    }
    Ok(out)
}

/// `milnor_pencil` for `f - t g`.
pub fn milnor_parametric(f: &MultiPoly, g: &MultiPoly, pt: &AlgebraicPoint) -> Result<Vec<MilnorRecord>> {
    milnor_pencil(&(f - &(g * &MultiPoly::var(Var::T))), pt)
}

/// Sum over the points of `pt` of the Milnor number of `h(x, y, t0)`.
pub fn milnor_sum_at(h: &MultiPoly, pt: &AlgebraicPoint, t0: &AlgebraicNumber) -> Result<usize> {
    if let Some(r) = t0.as_rational() {
        let spec = h.eval_var(Var::T, &r);
        return Ok(milnor_number(&spec, pt)?.total());
    }
    let hx = pt.translate(&h.derivative(Var::X));
    let hy = pt.translate(&h.derivative(Var::Y));
    let d = MultiPoly::from_unipoly(&t0.defining, Var::T);
    let mut total = 0;
    for joint in combined_field(&pt.modulus, &d)? {
        for (field, mu) in specialized(&hx, &hy, &joint)? {
            if mu == 0 {
                continue;
            }
            let r = char_poly(field.modulus(), &joint.y.rem(field.modulus()));
            total += mu * t0.multiplicity_in(&r);
        }
    }
    Ok(total)
}

/// Generic Milnor sum over the records of one class.
pub fn generic_sum(records: &[MilnorRecord]) -> usize {
    records.iter().map(|r| r.point.count() * r.mu_generic).sum()
}

/// Sum of Milnor numbers at `t0`, using the records to skip values that are
/// not candidates.
pub fn sum_at_from_records(h: &MultiPoly, records: &[MilnorRecord], t0: &AlgebraicNumber) -> Result<usize> {
    let mut total = 0;
    for r in records {
        if t0.member(&r.candidates) {
            total += milnor_sum_at(h, &r.point, t0)?;
        } else {
            total += r.point.count() * r.mu_generic;
        }
    }
    Ok(total)
}

/// Convenience for the rational origin.
pub fn intersection_at_origin(p: &MultiPoly, q: &MultiPoly) -> Result<usize> {
    Ok(intersection_multiplicity(p, q, &AlgebraicPoint::origin())?.total())
}
