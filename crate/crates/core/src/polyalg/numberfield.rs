//! Arithmetic in `Q[u]/(m(u))` for squarefree `m`, following the dynamic
//! evaluation discipline: the modulus is never factored, and a zero divisor
//! met during a computation splits the modulus into two coprime factors.
//! The computation is then re-run on each factor.

use std::collections::VecDeque;


use super::{MultiPoly, Rational, UniPoly, Var};
use crate::error::{Error, Result};

/// Two coprime factors of a modulus, discovered from a zero divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub left: UniPoly,
    pub right: UniPoly,
}

/// Failure modes of a computation run under dynamic evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dyn {
    Split(Split),
    Fail(Error),
}

impl From<Split> for Dyn {
    fn from(s: Split) -> Self {
        Dyn::Split(s)
    }
}

impl From<Error> for Dyn {
    fn from(e: Error) -> Self {
        Dyn::Fail(e)
    }
}

pub type DynResult<T> = std::result::Result<T, Dyn>;

/// `Q[u]/(m)` with `m` monic and squarefree (a product of number fields).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberField {
    modulus: UniPoly,
}

impl NumberField {
    pub fn new(modulus: &UniPoly) -> Self {
        assert!(modulus.deg() >= 1, "number field modulus must be nonconstant");
        NumberField { modulus: modulus.monic() }
    }

    /// The rationals, presented as `Q[u]/(u)`.
    pub fn rationals() -> Self {
        Self::new(&UniPoly::var())
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn reduce(&self, a: &UniPoly) -> UniPoly {
        a.rem(&self.modulus)
    }

    /// Reduces the `u`-powers of a multivariate polynomial.
    pub fn reduce_multi(&self, p: &MultiPoly) -> MultiPoly {
        p.reduce_mod(Var::U, &self.modulus)
    }

    pub fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        self.reduce(&(a * b))
    }

    /// Decides whether `a` vanishes on every factor; splits when it vanishes on
    /// some factors only.
    pub fn is_zero(&self, a: &UniPoly) -> std::result::Result<bool, Split> {
        let a = self.reduce(a);
        if a.is_zero() {
            return Ok(true);
        }
        let g = a.gcd(&self.modulus);
        if g.is_constant() {
            Ok(false)
        } else {
            Err(Split { right: self.modulus.div_exact(&g), left: g })
        }
    }

    pub fn invert(&self, a: &UniPoly) -> DynResult<UniPoly> {
        let a = self.reduce(a);
        if a.is_zero() {
            return Err(Dyn::Fail(Error::DivisionByZero));
        }
        let (g, s, _) = a.ext_gcd(&self.modulus);
        if g.is_constant() {
            Ok(self.reduce(&s))
        } else {
            Err(Dyn::Split(Split { right: self.modulus.div_exact(&g), left: g }))
        }
    }
}

/// Runs `f` over the factors of `modulus`, re-running on both halves whenever
/// a split is reported. Branch moduli multiply back to `modulus`.
pub fn dynamic_eval<T>(
    modulus: &UniPoly,
    mut f: impl FnMut(&NumberField) -> DynResult<T>,
) -> Result<Vec<(NumberField, T)>> {
    let mut queue = VecDeque::from([modulus.monic()]);
    let mut out = Vec::new();
    while let Some(m) = queue.pop_front() {
        let field = NumberField::new(&m);
        match f(&field) {
            Ok(v) => out.push((field, v)),
            Err(Dyn::Split(s)) => {
                queue.push_front(s.right.monic());
                queue.push_front(s.left.monic());
            }
            Err(Dyn::Fail(e)) => return Err(e),
        }
    }
    Ok(out)
}

/// An element of `Q[u]/(m(u))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberFieldElement {
    modulus: UniPoly,
    value: UniPoly,
}

/// Outcome of an inversion attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inverse {
    Value(NumberFieldElement),
    Split(Split),
}

impl NumberFieldElement {
    pub fn new(modulus: &UniPoly, value: &UniPoly) -> Self {
        let modulus = modulus.monic();
        NumberFieldElement { value: value.rem(&modulus), modulus }
    }

    pub fn rational(modulus: &UniPoly, c: Rational) -> Self {
        Self::new(modulus, &UniPoly::constant(c))
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn value(&self) -> &UniPoly {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value == UniPoly::one()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "elements of different number fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        Self::new(&self.modulus, &(&self.value + &other.value))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        Self::new(&self.modulus, &(&self.value - &other.value))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        Self::new(&self.modulus, &(&self.value * &other.value))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.modulus, &-&self.value)
    }
}

/// Inverse via extended gcd with the modulus, or the split exposed by a zero
/// divisor.
pub fn nf_invert(e: &NumberFieldElement) -> Result<Inverse> {
    match NumberField::new(&e.modulus).invert(&e.value) {
        Ok(v) => Ok(Inverse::Value(NumberFieldElement::new(&e.modulus, &v))),
        Err(Dyn::Split(s)) => Ok(Inverse::Split(s)),
        Err(Dyn::Fail(err)) => Err(err),
    }
}

/// Dense univariate polynomial (in an outer variable) with coefficients in a
/// number field, low to high.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NfPoly(pub Vec<UniPoly>);

impl NfPoly {
    /// View of a multivariate polynomial in `outer` with coefficients in `u`.
    pub fn from_multi(p: &MultiPoly, outer: Var, field: &NumberField) -> Self {
        NfPoly(
            p.coefficients_in(outer)
                .iter()
                .map(|c| field.reduce(&c.to_unipoly(Var::U).expect("coefficient must be univariate in u")))
                .collect(),
        )
    }

    pub fn to_multi(&self, outer: Var) -> MultiPoly {
        let coeffs: Vec<MultiPoly> = self.0.iter().map(|c| MultiPoly::from_unipoly(c, Var::U)).collect();
        MultiPoly::from_coefficients_in(outer, &coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Drops leading coefficients that vanish on the current branch, so the
    /// leading coefficient is invertible afterwards.
    pub fn normalize(&self, field: &NumberField) -> DynResult<NfPoly> {
        let mut c: Vec<UniPoly> = self.0.iter().map(|a| field.reduce(a)).collect();
        while let Some(top) = c.last() {
            if field.is_zero(top)? {
                c.pop();
            } else {
                break;
            }
        }
        Ok(NfPoly(c))
    }

    pub fn derivative(&self, field: &NumberField) -> NfPoly {
        NfPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| field.reduce(&c.scale(&Rational::from_integer((k as i64).into()))))
                .collect(),
        )
    }

    fn monic(&self, field: &NumberField) -> DynResult<NfPoly> {
        let inv = field.invert(self.0.last().expect("monic of zero polynomial"))?;
        Ok(NfPoly(self.0.iter().map(|c| field.mul(c, &inv)).collect()))
    }

    /// Division with remainder by a normalized divisor.
    pub fn div_rem(&self, d: &NfPoly, field: &NumberField) -> DynResult<(NfPoly, NfPoly)> {
        let d = d.normalize(field)?;
        assert!(!d.0.is_empty(), "division by zero polynomial");
        let inv = field.invert(d.0.last().unwrap())?;
        let dd = d.0.len() - 1;
        let mut rem: Vec<UniPoly> = self.normalize(field)?.0;
        if rem.len() < d.0.len() {
            return Ok((NfPoly(Vec::new()), NfPoly(rem)));
        }
        let mut quo = vec![UniPoly::zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = field.mul(&rem[k + dd], &inv);
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    rem[k + j] = field.reduce(&(&rem[k + j] - &(&c * dc)));
                }
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        Ok((NfPoly(quo), NfPoly(rem).normalize(field)?))
    }

    /// Monic gcd over the current branch.
    pub fn gcd(&self, other: &NfPoly, field: &NumberField) -> DynResult<NfPoly> {
        let mut a = self.normalize(field)?;
        let mut b = other.normalize(field)?;
        while !b.0.is_empty() {
            let (_, r) = a.div_rem(&b, field)?;
            a = b;
            b = r;
        }
        if a.0.is_empty() {
            return Ok(a);
        }
        a.monic(field)
    }

    /// Squarefree part (monic).
    pub fn squarefree_part(&self, field: &NumberField) -> DynResult<NfPoly> {
        let a = self.normalize(field)?;
        if a.0.len() <= 1 {
            return Ok(a);
        }
        let g = a.gcd(&a.derivative(field), field)?;
        let (q, _) = a.div_rem(&g, field)?;
        q.monic(field)
    }
}
