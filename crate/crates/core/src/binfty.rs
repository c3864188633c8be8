//! Critical values at infinity from the leading coefficient in `y` of the
//! discriminant `disc_x(f - t g)`.

use num_traits::Zero;

use crate::elimination::{content, discriminant, gcd_full, Discriminant, DISCRIMINANT_CONVENTION};
use crate::error::{Error, Result};
use crate::polyalg::{MultiPoly, Rational, UniPoly, Var};
use crate::roots::{isolate_unipoly, AlgebraicNumber};

/// Which of the three degree situations the pair falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeCase {
    /// `deg f > deg g`: the pencil has degree `d` for every `t`.
    NumeratorDominant,
    /// `deg g > deg f`: the degree drops at `t = 0`.
    DenominatorDominant,
    /// `deg f = deg g`: the degree drops where the leading forms cancel.
    EqualDegrees,
}

impl DegreeCase {
    pub fn label(self) -> &'static str {
        match self {
            DegreeCase::NumeratorDominant => "deg f > deg g",
            DegreeCase::DenominatorDominant => "deg g > deg f",
            DegreeCase::EqualDegrees => "deg f = deg g",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DegreeConditionReport {
    pub d: u32,
    pub holds_for_all_t: bool,
    /// Values `t0` with `deg(f - t0 g) < d`; always rational.
    pub excluded_values: Vec<Rational>,
    pub case: DegreeCase,
    /// Verdict at the requested value, `None` for generic `t`.
    pub holds_at: Option<bool>,
}

fn leading_forms(f: &MultiPoly, g: &MultiPoly) -> (u32, MultiPoly, MultiPoly) {
    let d = f.degree_xy().max(g.degree_xy());
    (d, f.homogeneous_part_xy(d), g.homogeneous_part_xy(d))
}

/// Degree bookkeeping for the pencil `f - t g`, optionally at a value `t0`.
pub fn check_degree_condition(f: &MultiPoly, g: &MultiPoly, t0: Option<&AlgebraicNumber>) -> DegreeConditionReport {
    let (d, fd, gd) = leading_forms(f, g);
    let (df, dg) = (f.degree_xy(), g.degree_xy());
    let (case, excluded_values) = if df > dg {
        (DegreeCase::NumeratorDominant, Vec::new())
    } else if dg > df {
        (DegreeCase::DenominatorDominant, vec![Rational::zero()])
    } else {
        let (m, lf) = fd.terms().last().map(|(m, c)| (*m, c.clone())).unwrap();
        let lg = gd.coeff_of(&m);
        let excluded = if !lg.is_zero() && fd == gd.scale(&(&lf / &lg)) { vec![lf / lg] } else { Vec::new() };
        (DegreeCase::EqualDegrees, excluded)
    };
    let holds_at = t0.map(|t| !excluded_values.iter().any(|r| t.equal(&AlgebraicNumber::rational(r.clone()))));
    DegreeConditionReport { d, holds_for_all_t: excluded_values.is_empty(), excluded_values, case, holds_at }
}

/// `p(x, y + lambda x)`.
pub fn shear(p: &MultiPoly, lambda: &Rational) -> MultiPoly {
    let y = MultiPoly::var(Var::Y) + MultiPoly::var(Var::X).scale(lambda);
    p.substitute_one(Var::Y, &y)
}

/// Shear parameters in the order 0, 1, -1, 2, -2, ...
pub fn shear_sequence() -> impl Iterator<Item = i64> {
    (0i64..).map(|k| if k == 0 { 0 } else if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) })
}

/// Coefficient of `x^d` in `f - t g` after the shear `y -> y + lambda x`,
/// as a polynomial in `t`.
pub fn x_leading_coefficient(f: &MultiPoly, g: &MultiPoly, lambda: &Rational) -> UniPoly {
    let (_, fd, gd) = leading_forms(f, g);
    let at = |p: &MultiPoly| {
        p.eval_var(Var::X, &Rational::from_integer(1.into())).eval_var(Var::Y, lambda).constant_value().unwrap_or_else(Rational::zero)
    };
    UniPoly::from_coeffs(vec![at(&fd), -at(&gd)])
}

/// Result of `normalize_x_degree`.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub f: MultiPoly,
    pub g: MultiPoly,
    pub lambda: i64,
    /// Coefficient of `x^d` in the sheared pencil.
    pub x_coefficient: UniPoly,
    /// Rational values of `t`, outside the excluded ones, where that
    /// coefficient vanishes.
    pub bad_values: Vec<Rational>,
}

fn rational_roots_linear(a: &UniPoly) -> Vec<Rational> {
    if a.deg() == 1 {
        vec![-a.coeff(0) / a.coeff(1)]
    } else {
        Vec::new()
    }
}

/// Chooses the first shear making `deg_x(f - t g) = d`, preferring one that
/// keeps this true for every non-excluded `t`.
pub fn normalize_x_degree(f: &MultiPoly, g: &MultiPoly, excluded: &[Rational]) -> Normalization {
    let mut fallback = None;
    for lambda in shear_sequence().take(32) {
        let lam = Rational::from_integer(lambda.into());
        let a = x_leading_coefficient(f, g, &lam);
        if a.is_zero() {
            continue;
        }
        let bad: Vec<Rational> = rational_roots_linear(&a).into_iter().filter(|r| !excluded.contains(r)).collect();
        if bad.is_empty() {
            return Normalization { f: shear(f, &lam), g: shear(g, &lam), lambda, x_coefficient: a, bad_values: bad };
        }
        fallback.get_or_insert((lambda, lam, a, bad));
    }
    let (lambda, lam, a, bad) = fallback.expect("some shear gives the leading form a nonzero x^d coefficient");
    Normalization { f: shear(f, &lam), g: shear(g, &lam), lambda, x_coefficient: a, bad_values: bad }
}

/// A value where the chosen shear loses degree, decided with another shear.
#[derive(Clone, Debug)]
pub struct Reexamination {
    pub value: Rational,
    pub lambda: i64,
    pub q_k: UniPoly,
    pub member: bool,
}

#[derive(Clone, Debug)]
pub struct InfinityCriterion {
    pub degree: DegreeConditionReport,
    /// Shear `y -> y + lambda x` applied before taking the discriminant.
    pub lambda: i64,
    pub x_coefficient: UniPoly,
    /// Discriminant with the spurious content divided out.
    pub delta: Discriminant,
    /// Factor in `t` removed from the raw discriminant.
    pub stripped: MultiPoly,
    pub q_k: UniPoly,
    pub k: u32,
    /// All roots of `q_k`, with multiplicity.
    pub q_roots: Vec<AlgebraicNumber>,
    pub reexamined: Vec<Reexamination>,
    /// Values the criterion places in `B_infty`.
    pub roots: Vec<AlgebraicNumber>,
}

impl InfinityCriterion {
    pub fn excluded(&self) -> Vec<AlgebraicNumber> {
        self.degree.excluded_values.iter().cloned().map(AlgebraicNumber::rational).collect()
    }
}

/// `delta` with the content it shares with `a(t)` removed.
fn stripped_discriminant(pencil: &MultiPoly, a: &UniPoly) -> Result<(MultiPoly, MultiPoly)> {
    let mut delta = discriminant(pencil, Var::X)?;
    if delta.is_zero() {
        return Err(Error::PencilNonReduced);
    }
    let a = MultiPoly::from_unipoly(a, Var::T);
    let mut stripped = MultiPoly::one();
    loop {
        let h = gcd_full(&content(&delta, Var::Y), &a);
        if h.is_constant() {
            break;
        }
        delta = delta.div_exact(&h).expect("content divides delta");
        stripped = &stripped * &h;
    }
    Ok((delta, stripped))
}

fn pencil(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    f - &(g * &MultiPoly::var(Var::T))
}

fn leading_in_y(delta: &MultiPoly) -> (UniPoly, u32) {
    let k = delta.degree_in(Var::Y);
    (delta.lc_in(Var::Y).to_unipoly(Var::T).expect("lc_y(delta) lies in Q[t]"), k)
}

/// `B_infty` candidates from the `q_k` criterion.
pub fn critical_values_at_infinity(f: &MultiPoly, g: &MultiPoly) -> Result<InfinityCriterion> {
    let degree = check_degree_condition(f, g, None);
    if degree.d == 0 {
        return Err(Error::DegenerateCriticalLocus);
    }
    let norm = normalize_x_degree(f, g, &degree.excluded_values);
    let (delta, stripped) = stripped_discriminant(&pencil(&norm.f, &norm.g), &norm.x_coefficient)?;
    let (q_k, k) = leading_in_y(&delta);
    let q_roots = isolate_unipoly(&q_k)?;

    let mut reexamined = Vec::new();
    for r in &norm.bad_values {
        let (lambda, lam) = shear_sequence()
            .map(|l| (l, Rational::from_integer(l.into())))
            .find(|(_, lam)| !x_leading_coefficient(f, g, lam).eval(r).is_zero())
            .expect("leading form is not identically zero at a non-excluded value");
        let a = x_leading_coefficient(f, g, &lam);
        let (d2, _) = stripped_discriminant(&pencil(&shear(f, &lam), &shear(g, &lam)), &a)?;
        let (q2, _) = leading_in_y(&d2);
        let member = q2.eval(r).is_zero();
        reexamined.push(Reexamination { value: r.clone(), lambda, q_k: q2, member });
    }

    let skip: Vec<AlgebraicNumber> =
        degree.excluded_values.iter().chain(norm.bad_values.iter()).cloned().map(AlgebraicNumber::rational).collect();
    let mut roots: Vec<AlgebraicNumber> = q_roots.iter().filter(|r| !r.member(&skip)).cloned().collect();
    for re in &reexamined {
        if re.member {
            roots.push(AlgebraicNumber::rational(re.value.clone()));
        }
    }
    crate::roots::sort_for_display(&mut roots);

    Ok(InfinityCriterion {
        degree,
        lambda: norm.lambda,
        x_coefficient: norm.x_coefficient,
        delta: Discriminant { poly: delta, eliminated: Var::X, normalization: DISCRIMINANT_CONVENTION },
        stripped,
        q_k,
        k,
        q_roots,
        reexamined,
        roots,
    })
}
