use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Rational, UniPoly};
use crate::error::{Error, Result};

/// The fixed variable universe. `z` homogenizes, `t` is the pencil parameter
/// and `u` is reserved for algebraic extensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
    T = 3,
    U = 4,
}

pub const NVARS: usize = 5;

impl Var {
    pub const ALL: [Var; NVARS] = [Var::X, Var::Y, Var::Z, Var::T, Var::U];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        ['x', 'y', 'z', 't', 'u'][self.index()]
    }
}

pub type Monomial = [u32; NVARS];

/// Sparse polynomial over the rationals in the variables `x, y, z, t, u`.
///
/// Terms are keyed by exponent vectors; zero coefficients are never stored,
/// so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

fn mono_var(v: Var, e: u32) -> Monomial {
    let mut m = [0; NVARS];
    m[v.index()] = e;
    m
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, [0; NVARS])
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), mono_var(v, 1))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.terms.get(&[0; NVARS]).cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    pub fn coeff_of(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m[v.index()] > 0)
    }

    pub fn vars(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|&v| self.contains_var(v)).collect()
    }

    /// Total degree in all variables; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.degree_in_vars(&Var::ALL)
    }

    /// Total degree counting only the listed variables.
    pub fn degree_in_vars(&self, vars: &[Var]) -> u32 {
        self.terms.keys().map(|m| vars.iter().map(|v| m[v.index()]).sum()).max().unwrap_or(0)
    }

    /// Degree in the affine coordinates `x, y`.
    pub fn degree_xy(&self) -> u32 {
        self.degree_in_vars(&[Var::X, Var::Y])
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m[v.index()]).max().unwrap_or(0)
    }

    /// Coefficients as a univariate polynomial in `v`; index `k` holds the
    /// coefficient of `v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<MultiPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut out = vec![MultiPoly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let mut rest = *m;
            let k = std::mem::replace(&mut rest[v.index()], 0);
            out[k as usize].terms.insert(rest, c.clone());
        }
        out
    }

    pub fn from_coefficients_in(v: Var, coeffs: &[MultiPoly]) -> Self {
        let mut out = MultiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut mm = *m;
                mm[v.index()] += k as u32;
                out.add_term(mm, a.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `v`.
    pub fn lc_in(&self, v: Var) -> MultiPoly {
        self.coefficients_in(v).pop().unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Self {
        let i = v.index();
        Self::from_terms(self.terms.iter().filter(|(m, _)| m[i] > 0).map(|(m, c)| {
            let mut mm = *m;
            mm[i] -= 1;
            (mm, c * Rational::from_integer(BigInt::from(m[i])))
        }))
    }

    /// Simultaneous substitution of variables by polynomials.
    pub fn substitute(&self, bindings: &BTreeMap<Var, MultiPoly>) -> Self {
        if bindings.is_empty() {
            return self.clone();
        }
        // Cache powers of each bound polynomial.
        let mut powers: BTreeMap<(Var, u32), MultiPoly> = BTreeMap::new();
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = *m;
            let mut prod = MultiPoly::constant(c.clone());
            for (&v, p) in bindings {
                let e = std::mem::replace(&mut rest[v.index()], 0);
                if e == 0 {
                    continue;
                }
                let pw = powers.entry((v, e)).or_insert_with(|| p.pow(e));
                prod = &prod * pw;
            }
            let shifted = prod.mul_monomial(&rest);
            out = &out + &shifted;
        }
        out
    }

    pub fn substitute_one(&self, v: Var, p: &MultiPoly) -> Self {
        self.substitute(&BTreeMap::from([(v, p.clone())]))
    }

    pub fn eval_var(&self, v: Var, at: &Rational) -> Self {
        self.substitute_one(v, &MultiPoly::constant(at.clone()))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        if m.iter().all(|&e| e == 0) {
            return self.clone();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let mut kk = *k;
                    for i in 0..NVARS {
                        kk[i] += m[i];
                    }
                    (kk, c.clone())
                })
                .collect(),
        }
    }

    /// Homogeneous component of `x, y`-degree exactly `k` (other variables are
    /// treated as coefficients).
    pub fn homogeneous_part_xy(&self, k: u32) -> Self {
        MultiPoly {
            terms: self.terms.iter().filter(|(m, _)| m[0] + m[1] == k).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// `z^d p(x/z, y/z)`.
    pub fn homogenize(&self, d: u32) -> Result<Self> {
        let actual = self.degree_xy();
        if d < actual {
            return Err(Error::DegreeTooSmall { requested: d, actual });
        }
        Ok(MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut mm = *m;
                    mm[Var::Z.index()] += d - (m[0] + m[1]);
                    (mm, c.clone())
                })
                .collect(),
        })
    }

    /// Exact division by `d`; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.terms.last_key_value().map(|(m, c)| (*m, c.clone())).unwrap();
        let inv = dc.recip();
        let mut rem = self.clone();
        let mut quo = MultiPoly::zero();
        while let Some((rm, rc)) = rem.terms.last_key_value().map(|(m, c)| (*m, c.clone())) {
            let mut qm = [0; NVARS];
            for i in 0..NVARS {
                if rm[i] < dm[i] {
                    return None;
                }
                qm[i] = rm[i] - dm[i];
            }
            let qc = rc * &inv;
            let qt = MultiPoly::term(qc, qm);
            rem = &rem - &(&qt * d);
            quo = &quo + &qt;
        }
        Some(quo)
    }

    /// Univariate view, if only `v` occurs.
    pub fn to_unipoly(&self, v: Var) -> Option<UniPoly> {
        let i = v.index();
        if self.terms.keys().any(|m| m.iter().enumerate().any(|(j, &e)| j != i && e > 0)) {
            return None;
        }
        let mut coeffs = vec![Rational::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            coeffs[m[i] as usize] = c.clone();
        }
        Some(UniPoly::from_coeffs(coeffs))
    }

    pub fn from_unipoly(p: &UniPoly, v: Var) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| (mono_var(v, k as u32), c.clone())))
    }

    /// Reduces the powers of `v` modulo the monic polynomial `m(v)`.
    pub fn reduce_mod(&self, v: Var, m: &UniPoly) -> Self {
        let n = m.deg() as u32;
        if n == 0 || self.degree_in(v) < n {
            return self.clone();
        }
        let i = v.index();
        let mut cache: BTreeMap<u32, UniPoly> = BTreeMap::new();
        let mut out = MultiPoly::zero();
        for (mono, c) in &self.terms {
            let e = mono[i];
            if e < n {
                out.add_term(*mono, c.clone());
                continue;
            }
            let red = cache.entry(e).or_insert_with(|| UniPoly::monomial(Rational::one(), e as usize).rem(m));
            for (k, a) in red.coeffs().iter().enumerate() {
                let mut mm = *mono;
                mm[i] = k as u32;
                out.add_term(mm, a * c);
            }
        }
        out
    }

    /// Swaps the roles of two variables.
    pub fn swap_vars(&self, a: Var, b: Var) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut mm = *m;
                    mm.swap(a.index(), b.index());
                    (mm, c.clone())
                })
                .collect(),
        }
    }

    /// Multiplies through so that all coefficients are integers with unit gcd
    /// and the lex-leading coefficient positive.
    pub fn primitive_integer(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        use num_integer::Integer;
        let lcm = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut g = self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(&(c * Rational::from_integer(lcm.clone())).to_integer()));
        if self.terms.last_key_value().unwrap().1.is_negative() {
            g = -g;
        }
        self.scale(&Rational::new(lcm, g))
    }

    /// Lex-leading coefficient made one.
    pub fn monic_lex(&self) -> Self {
        match self.terms.last_key_value() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Terms in graded lex order, highest first.
    fn grlex_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        v
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.grlex_terms() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let factors: Vec<String> = Var::ALL
                .iter()
                .filter(|v| m[v.index()] > 0)
                .map(|v| match m[v.index()] {
                    1 => v.name().to_string(),
                    e => format!("{}^{}", v.name(), e),
                })
                .collect();
            let abs = c.abs();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = *ma;
                for i in 0..NVARS {
                    m[i] += mb[i];
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// Shorthand constructors used throughout the crate and its tests.
pub fn x() -> MultiPoly {
    MultiPoly::var(Var::X)
}
pub fn y() -> MultiPoly {
    MultiPoly::var(Var::Y)
}
pub fn z() -> MultiPoly {
    MultiPoly::var(Var::Z)
}
pub fn t() -> MultiPoly {
    MultiPoly::var(Var::T)
}
pub fn u() -> MultiPoly {
    MultiPoly::var(Var::U)
}
pub fn c(n: i64) -> MultiPoly {
    MultiPoly::int(n)
}
pub fn q(n: i64, d: i64) -> MultiPoly {
    MultiPoly::constant(Rational::new(n.into(), d.into()))
}
