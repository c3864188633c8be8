//! Certified complex root isolation over the rationals.
//!
//! Approximations come from an Aberth iteration in `f64`. They are
//! certified exactly with Smith's inclusion disks: when the disks are pairwise
//! disjoint, each holds exactly one root. If certification fails the iteration
//! is repeated in exact dyadic arithmetic at increasing precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polyalg::{rat, MultiPoly, Rational, UniPoly};

/// Exact complex rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cq {
    pub re: Rational,
    pub im: Rational,
}

impl Cq {
    pub fn new(re: Rational, im: Rational) -> Self {
        Cq { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Cq { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Cq) -> Cq {
        Cq::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Cq) -> Cq {
        Cq::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Cq) -> Cq {
        Cq::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Panics on division by zero.
    pub fn div(&self, o: &Cq) -> Cq {
        let n = o.norm_sqr();
        let re = (&self.re * &o.re + &self.im * &o.im) / &n;
        let im = (&self.im * &o.re - &self.re * &o.im) / &n;
        Cq::new(re, im)
    }

    pub fn from_c64(z: Complex64) -> Option<Cq> {
        Some(Cq::new(Rational::from_float(z.re)?, Rational::from_float(z.im)?))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    fn round(&self, bits: u32) -> Cq {
        Cq::new(dyadic(&self.re, bits), dyadic(&self.im, bits))
    }
}

fn pow2(e: i64) -> Rational {
    let p = Rational::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

fn dyadic(x: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits as i64);
    (x * &scale).round() / scale
}

/// Rational `s >= sqrt(x)` within a relative factor of about `1e-9`.
pub fn sqrt_upper(x: &Rational) -> Rational {
    if !x.is_positive() {
        return Rational::zero();
    }
    let e = (x.numer().bits() as i64 - x.denom().bits() as i64) / 2;
    let y = x / pow2(2 * e);
    let f = y.to_f64().unwrap().sqrt() * (1.0 + 1e-9);
    let mut s = Rational::from_float(f).unwrap() * pow2(e);
    while &s * &s < *x {
        s *= rat(1025, 1024);
    }
    s
}

/// Number of bits needed to resolve `w`, i.e. roughly `-log2(w)`.
fn bits_for(w: &Rational) -> u32 {
    let b = w.denom().bits() as i64 - w.numer().bits() as i64 + 2;
    b.max(0) as u32
}

fn eval_cq(p: &UniPoly, z: &Cq) -> Cq {
    let mut acc = Cq::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
    }
    acc
}

/// Closed axis-aligned rectangle with rational corners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBox {
    pub re_lo: Rational,
    pub re_hi: Rational,
    pub im_lo: Rational,
    pub im_hi: Rational,
}

impl ComplexBox {
    pub fn square(center: &Cq, half: &Rational) -> Self {
        ComplexBox {
            re_lo: &center.re - half,
            re_hi: &center.re + half,
            im_lo: &center.im - half,
            im_hi: &center.im + half,
        }
    }

    pub fn center(&self) -> Cq {
        let two = Rational::from_integer(2.into());
        Cq::new((&self.re_lo + &self.re_hi) / &two, (&self.im_lo + &self.im_hi) / two)
    }

    pub fn width(&self) -> Rational {
        let a = &self.re_hi - &self.re_lo;
        let b = &self.im_hi - &self.im_lo;
        a.max(b)
    }

    pub fn contains_box(&self, o: &ComplexBox) -> bool {
        self.re_lo <= o.re_lo && o.re_hi <= self.re_hi && self.im_lo <= o.im_lo && o.im_hi <= self.im_hi
    }

    pub fn contains_point(&self, z: &Cq) -> bool {
        self.re_lo <= z.re && z.re <= self.re_hi && self.im_lo <= z.im && z.im <= self.im_hi
    }

    fn strictly_contains(&self, z: &Cq) -> bool {
        self.re_lo < z.re && z.re < self.re_hi && self.im_lo < z.im && z.im < self.im_hi
    }

    pub fn disjoint(&self, o: &ComplexBox) -> bool {
        self.re_hi < o.re_lo || o.re_hi < self.re_lo || self.im_hi < o.im_lo || o.im_hi < self.im_lo
    }

    pub fn conj(&self) -> ComplexBox {
        ComplexBox { re_lo: self.re_lo.clone(), re_hi: self.re_hi.clone(), im_lo: -&self.im_hi, im_hi: -&self.im_lo }
    }

    fn is_symmetric(&self) -> bool {
        self.im_lo == -&self.im_hi
    }
}

/// A complex algebraic number: one root of `defining`, isolated by `bbox`.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    /// Squarefree, primitive with integer coefficients and positive leading
    /// coefficient.
    pub defining: UniPoly,
    pub bbox: ComplexBox,
    /// Multiplicity in the polynomial the root was isolated from.
    pub multiplicity: usize,
}

impl AlgebraicNumber {
    pub fn rational(r: Rational) -> Self {
        let defining = UniPoly::from_coeffs(vec![-r.clone(), Rational::one()]).primitive();
        AlgebraicNumber { defining, bbox: ComplexBox::square(&Cq::real(r), &pow2(-64)), multiplicity: 1 }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn degree(&self) -> usize {
        self.defining.deg()
    }

    pub fn center(&self) -> Cq {
        self.bbox.center()
    }

    pub fn to_c64(&self) -> Complex64 {
        self.bbox.center().to_c64()
    }

    /// Same root, with a box no wider than `width`.
    pub fn refine(&self, width: &Rational) -> AlgebraicNumber {
        assert!(width.is_positive(), "refinement width must be positive");
        let bbox = refine_box(&self.defining, &self.bbox, width);
        AlgebraicNumber { bbox, ..self.clone() }
    }

    /// Exact equality of the represented complex numbers.
    pub fn equal(&self, other: &AlgebraicNumber) -> bool {
        if self.bbox.disjoint(&other.bbox) {
            return false;
        }
        let g = self.defining.gcd(&other.defining);
        if g.is_constant() {
            return false;
        }
        let roots = isolate_squarefree(&g).expect("gcd of defining polynomials is nonzero");
        roots.into_iter().any(|b| locate(&g, b.clone(), &self.defining, &self.bbox) && locate(&g, b, &other.defining, &other.bbox))
    }

    pub fn member(&self, set: &[AlgebraicNumber]) -> bool {
        set.iter().any(|s| self.equal(s))
    }

    /// Decides `q(self) = 0` exactly.
    pub fn is_root_of(&self, q: &UniPoly) -> bool {
        if q.is_zero() {
            return true;
        }
        let g = self.defining.gcd(q);
        if g.is_constant() {
            return false;
        }
        if g.deg() == self.defining.deg() {
            return true;
        }
        let roots = isolate_squarefree(&g).expect("gcd is nonzero");
        roots.into_iter().any(|b| locate(&g, b, &self.defining, &self.bbox))
    }

    /// Order of vanishing of `q` at this number; `q` must be nonzero.
    pub fn multiplicity_in(&self, q: &UniPoly) -> usize {
        assert!(!q.is_zero(), "multiplicity in the zero polynomial");
        let mut k = 0;
        let mut d = q.clone();
        while self.is_root_of(&d) {
            k += 1;
            d = d.derivative();
        }
        k
    }

    /// The number as an exact rational, when it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.defining.deg() == 1 {
            let c = self.defining.coeffs();
            return Some(-&c[0] / &c[1]);
        }
        let ints = self.defining.integer_primitive();
        let lead = Rational::from_integer(ints.last().unwrap().abs());
        let fine = self.refine(&(Rational::one() / (&lead * Rational::from_integer(4.into()))));
        if !(fine.bbox.im_lo <= Rational::zero() && Rational::zero() <= fine.bbox.im_hi) {
            return None;
        }
        let r = (fine.center().re * &lead).round() / &lead;
        if fine.bbox.contains_point(&Cq::real(r.clone())) && self.defining.eval(&r).is_zero() {
            Some(r)
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        if self.bbox.is_symmetric() {
            return true;
        }
        let conj = AlgebraicNumber { bbox: self.bbox.conj(), ..self.clone() };
        self.equal(&conj)
    }

    /// Same number with the smallest available defining polynomial: `t - r`
    /// for rationals, otherwise unchanged.
    pub fn simplified(&self) -> AlgebraicNumber {
        match self.as_rational() {
            Some(r) if self.defining.deg() > 1 => AlgebraicNumber { multiplicity: self.multiplicity, ..Self::rational(r) },
            _ => self.clone(),
        }
    }

    /// Decimal approximation with `digits` digits after the point, written
    /// `a`, `bi` or `a+bi`.
    pub fn approx(&self, digits: usize) -> String {
        self.approx_with(digits, false)
    }

    /// Like `approx` with trailing zeros removed and unit imaginary parts
    /// written as `i`.
    pub fn approx_trimmed(&self, digits: usize) -> String {
        self.approx_with(digits, true)
    }

    fn approx_with(&self, digits: usize, trim: bool) -> String {
        let w = Rational::new(BigInt::one(), BigInt::from(10).pow(digits as u32 + 2));
        let fine = self.refine(&w);
        let c = fine.center();
        let fix = |s: String| {
            let s = if trim && s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
            if s.trim_start_matches('-').chars().all(|ch| ch == '0' || ch == '.') { None } else { Some(s) }
        };
        let re = fix(decimal(&c.re, digits));
        let im = fix(decimal(&c.im, digits)).map(|s| match s.as_str() {
            "1" if trim => String::new(),
            "-1" if trim => "-".to_string(),
            _ => s,
        });
        match (re, im) {
            (None, None) if trim => "0".to_string(),
            (None, None) => decimal(&Rational::zero(), digits),
            (Some(re), None) => re,
            (None, Some(im)) => format!("{im}i"),
            (Some(re), Some(im)) => {
                if im.starts_with('-') {
                    format!("{re}{im}i")
                } else {
                    format!("{re}+{im}i")
                }
            }
        }
    }

    /// Sort key: real part, imaginary part, then degree.
    pub fn display_key(&self) -> (f64, f64, usize) {
        let fine = self.refine(&pow2(-40));
        let c = fine.to_c64();
        let round = |v: f64| (v * 1e10).round() / 1e10 + 0.0;
        (round(c.re), round(c.im), self.degree())
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} near {}", self.defining.fmt_var("t"), self.approx(6))
    }
}

/// Decimal string with exactly `digits` digits after the point.
pub fn decimal(x: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let n = (x * Rational::from_integer(scale.clone())).round().to_integer();
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let body = if digits == 0 {
        s
    } else {
        let padded = format!("{s:0>width$}", width = digits + 1);
        let (a, b) = padded.split_at(padded.len() - digits);
        format!("{a}.{b}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

pub fn cmp_display(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Ordering {
    let ka = a.display_key();
    let kb = b.display_key();
    ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(ka.2.cmp(&kb.2))
}

pub fn sort_for_display(v: &mut [AlgebraicNumber]) {
    v.sort_by(cmp_display);
}

/// Decides whether the root of `g` isolated by `b` lies in `target`, which
/// isolates exactly one root of `target_poly` (a multiple of `g`).
fn locate(g: &UniPoly, mut b: ComplexBox, target_poly: &UniPoly, target: &ComplexBox) -> bool {
    let mut target = target.clone();
    for round in 0.. {
        if target.contains_box(&b) {
            return true;
        }
        if target.disjoint(&b) {
            return false;
        }
        b = refine_box(g, &b, &(b.width() / Rational::from_integer(4.into())));
        if round % 4 == 3 {
            target = refine_box(target_poly, &target, &(target.width() / Rational::from_integer(2.into())));
        }
    }
    unreachable!()
}

/// Isolates all complex roots of `p` with multiplicities.
pub fn isolate_roots(p: &MultiPoly) -> Result<Vec<AlgebraicNumber>> {
    let vars = p.vars();
    if vars.len() > 1 {
        return Err(Error::Input(format!("expected a univariate polynomial, got {p}")));
    }
    let u = match vars.first() {
        Some(&v) => p.to_unipoly(v).unwrap(),
        None => UniPoly::constant(p.constant_value().unwrap_or_else(Rational::zero)),
    };
    isolate_unipoly(&u)
}

pub fn isolate_unipoly(p: &UniPoly) -> Result<Vec<AlgebraicNumber>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let defining = p.squarefree_part().primitive();
    let mut found: Vec<(UniPoly, ComplexBox, usize)> = Vec::new();
    for (factor, k) in p.squarefree_decomposition() {
        for b in isolate_squarefree(&factor)? {
            found.push((factor.clone(), b, k));
        }
    }
    // Boxes from different factors are separated by refinement.
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..found.len() {
            for j in i + 1..found.len() {
                if !found[i].1.disjoint(&found[j].1) {
                    let wi = found[i].1.width() / Rational::from_integer(4.into());
                    let wj = found[j].1.width() / Rational::from_integer(4.into());
                    found[i].1 = refine_box(&found[i].0, &found[i].1, &wi);
                    found[j].1 = refine_box(&found[j].0, &found[j].1, &wj);
                    changed = true;
                }
            }
        }
    }
    let mut out: Vec<AlgebraicNumber> =
        found.into_iter().map(|(_, bbox, multiplicity)| AlgebraicNumber { defining: defining.clone(), bbox, multiplicity }).collect();
    sort_for_display(&mut out);
    Ok(out)
}

/// Certified disjoint boxes for the roots of a squarefree `p`.
pub fn isolate_squarefree(p: &UniPoly) -> Result<Vec<ComplexBox>> {
    let n = p.deg();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        let c = p.coeffs();
        let r = -&c[0] / &c[1];
        return Ok(vec![ComplexBox::square(&Cq::real(r), &pow2(-64))]);
    }
    let approx = aberth_f64(p);
    let mut start: Vec<Cq> = approx.iter().filter_map(|z| Cq::from_c64(*z)).collect();
    if start.len() == n {
        if let Some(b) = certify(p, &start) {
            return Ok(b);
        }
    } else {
        start = initial_points(p, 60);
    }
    let mut bits = 96;
    while bits <= 6144 {
        start = aberth_exact(p, start, bits);
        if let Some(b) = certify(p, &start) {
            return Ok(b);
        }
        bits *= 2;
    }
    Err(Error::Limit(format!("root isolation did not certify for degree {n}")))
}

fn coeffs_f64(p: &UniPoly) -> Vec<Complex64> {
    let lc = p.lc();
    p.coeffs().iter().map(|c| Complex64::new((c / &lc).to_f64().unwrap_or(f64::NAN), 0.0)).collect()
}

fn horner_f64(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn root_bound(p: &UniPoly) -> f64 {
    let c = coeffs_f64(p);
    let n = c.len() - 1;
    let b = (1..=n).map(|k| c[n - k].norm().powf(1.0 / k as f64)).fold(0.0, f64::max);
    (2.0 * b).max(1e-3)
}

fn aberth_f64(p: &UniPoly) -> Vec<Complex64> {
    let c = coeffs_f64(p);
    let n = c.len() - 1;
    let r = root_bound(p);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(r * 0.5, std::f64::consts::TAU * k as f64 / n as f64 + 0.4)).collect();
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (pv, dv) = horner_f64(&c, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::one() - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-17 {
            break;
        }
    }
    z
}

fn initial_points(p: &UniPoly, bits: u32) -> Vec<Cq> {
    let n = p.deg();
    let r = root_bound(p).min(1e100);
    (0..n)
        .map(|k| {
            let z = Complex64::from_polar(r * 0.5, std::f64::consts::TAU * k as f64 / n as f64 + 0.4);
            Cq::from_c64(z).unwrap().round(bits)
        })
        .collect()
}

fn aberth_exact(p: &UniPoly, mut z: Vec<Cq>, bits: u32) -> Vec<Cq> {
    let n = z.len();
    let dp = p.derivative();
    let tol = pow2(-(2 * bits as i64));
    for zi in z.iter_mut() {
        *zi = zi.round(bits);
    }
    // Coincident starting values would make the correction undefined.
    for i in 0..n {
        for j in 0..i {
            if z[i] == z[j] {
                let eps = pow2(-(bits as i64) + 8) * Rational::from_integer((i + 1).into());
                z[i] = Cq::new(&z[i].re + &eps, &z[i].im + &eps);
            }
        }
    }
    for _ in 0..200 {
        let mut converged = true;
        for i in 0..n {
            let pv = eval_cq(p, &z[i]);
            if pv.is_zero() {
                continue;
            }
            let dv = eval_cq(&dp, &z[i]);
            if dv.is_zero() {
                continue;
            }
            let ratio = pv.div(&dv);
            let mut s = Cq::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if d.is_zero() {
                        continue;
                    }
                    s = s.add(&Cq::real(Rational::one()).div(&d));
                }
            }
            let den = Cq::real(Rational::one()).sub(&ratio.mul(&s));
            if den.is_zero() {
                continue;
            }
            let w = ratio.div(&den);
            if w.norm_sqr() > &tol * (Rational::one() + z[i].norm_sqr()) {
                converged = false;
            }
            z[i] = z[i].sub(&w).round(bits);
        }
        if converged {
            break;
        }
    }
    z
}

/// Smith's bound: the disks of radius `n |p(z_i)| / (|lc| prod |z_i - z_j|)`
/// cover the roots, and an isolated disk holds exactly one.
fn certify(p: &UniPoly, z: &[Cq]) -> Option<Vec<ComplexBox>> {
    let n = z.len();
    let lc2 = p.lc() * p.lc();
    let n2 = Rational::from_integer((n * n).into());
    let slack = rat(65, 64);
    let tiny = pow2(-120);
    let mut boxes = Vec::with_capacity(n);
    for i in 0..n {
        let mut prod = lc2.clone();
        for j in 0..n {
            if j != i {
                let d = z[i].sub(&z[j]).norm_sqr();
                if d.is_zero() {
                    return None;
                }
                prod *= d;
            }
        }
        let r2 = &n2 * eval_cq(p, &z[i]).norm_sqr() / prod;
        let mut half = sqrt_upper(&r2) * &slack + &tiny;
        let mut center = z[i].clone();
        // Snap nearly real centres onto the axis so real roots get boxes
        // symmetric under conjugation.
        if center.im.abs() < half {
            half += center.im.abs();
            center.im = Rational::zero();
        }
        boxes.push(ComplexBox::square(&center, &half));
    }
    for i in 0..n {
        for j in 0..i {
            if !boxes[i].disjoint(&boxes[j]) {
                return None;
            }
        }
    }
    Some(boxes)
}

/// Shrinks an isolating box of a root of squarefree `p` below `width`.
pub fn refine_box(p: &UniPoly, b: &ComplexBox, width: &Rational) -> ComplexBox {
    let mut cur = b.clone();
    if cur.width() <= *width {
        return cur;
    }
    let n = Rational::from_integer(p.deg().into());
    let n2 = &n * &n;
    let dp = p.derivative();
    let bits = bits_for(width) + 16;
    let slack = rat(65, 64);
    let margin = width / Rational::from_integer(1024.into());
    let mut z = cur.center();
    for _ in 0..100 {
        if cur.width() <= *width {
            return cur;
        }
        let pv = eval_cq(p, &z);
        if pv.is_zero() && cur.strictly_contains(&z) {
            let mut half = width / Rational::from_integer(4.into());
            loop {
                let cand = ComplexBox::square(&z, &half);
                if cur.contains_box(&cand) {
                    return cand;
                }
                half /= Rational::from_integer(2.into());
            }
        }
        let dv = eval_cq(&dp, &z);
        if dv.is_zero() {
            break;
        }
        let zn = z.sub(&pv.div(&dv)).round(bits);
        let pn = eval_cq(p, &zn);
        let dn = eval_cq(&dp, &zn);
        if !dn.is_zero() {
            let r2 = &n2 * pn.norm_sqr() / dn.norm_sqr();
            let mut center = zn.clone();
            let mut half = sqrt_upper(&r2) * &slack + &margin;
            if cur.is_symmetric() && center.im.abs() < half {
                half += center.im.abs();
                center.im = Rational::zero();
            }
            let cand = ComplexBox::square(&center, &half);
            if cur.contains_box(&cand) && cand.width() < cur.width() {
                cur = cand;
            }
        }
        if zn == z {
            break;
        }
        z = zn;
    }
    if cur.width() <= *width {
        return cur;
    }
    refine_by_reisolation(p, &cur, width)
}

fn refine_by_reisolation(p: &UniPoly, cur: &ComplexBox, width: &Rational) -> ComplexBox {
    let mut bits = bits_for(width).max(64) + 32;
    let mut start = aberth_f64(p).into_iter().filter_map(Cq::from_c64).collect::<Vec<_>>();
    if start.len() != p.deg() {
        start = initial_points(p, 60);
    }
    loop {
        start = aberth_exact(p, start, bits);
        if let Some(boxes) = certify(p, &start) {
            if let Some(b) = boxes.into_iter().find(|b| cur.contains_box(b) && b.width() <= *width) {
                return b;
            }
        }
        bits *= 2;
        assert!(bits < 1 << 20, "root refinement failed to converge");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{int, t};

    fn roots_of(c: &[i64]) -> Vec<AlgebraicNumber> {
        isolate_unipoly(&UniPoly::from_i64(c)).unwrap()
    }

    #[test]
    fn triple_zero() {
        let r = isolate_roots(&(crate::polyalg::c(4) * t().pow(3))).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert!(r[0].bbox.contains_point(&Cq::zero()));
        assert_eq!(r[0].as_rational(), Some(int(0)));
    }

    #[test]
    fn plus_minus_i() {
        let r = roots_of(&[1, 0, 1]);
        assert_eq!(r.len(), 2);
        assert!(r[0].bbox.disjoint(&r[1].bbox));
        assert!(!r[0].equal(&r[1]));
        assert!(!r[0].is_real());
        assert_eq!(r[1].approx(3), "1.000i");
        assert_eq!(r[0].approx(3), "-1.000i");
        assert_eq!(r[1].approx_trimmed(3), "i");
        assert_eq!(r[0].approx_trimmed(3), "-i");
        assert_eq!(AlgebraicNumber::zero().approx_trimmed(12), "0");
        assert_eq!(AlgebraicNumber::rational(crate::polyalg::rat(-3, 2)).approx_trimmed(12), "-1.5");
        let s = isolate_unipoly(&UniPoly::from_i64(&[2, -2, 1])).unwrap();
        assert_eq!(s[1].approx_trimmed(4), "1+i");
        assert_eq!(s[0].approx_trimmed(4), "1-i");
    }

    #[test]
    fn double_one() {
        let r = roots_of(&[1, -2, 1]);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 2);
        assert_eq!(r[0].as_rational(), Some(int(1)));
    }

    #[test]
    fn errors_and_constants() {
        assert_eq!(isolate_unipoly(&UniPoly::zero()), Err(Error::ZeroPolynomial));
        assert!(isolate_unipoly(&UniPoly::from_i64(&[5])).unwrap().is_empty());
    }

    #[test]
    fn sqrt_two_against_newton() {
        let r = roots_of(&[-2, 0, 1]);
        let pos = r.iter().find(|a| a.to_c64().re > 0.0).unwrap();
        let fine = pos.refine(&rat(1, 1_000_000_000_000));
        assert!(fine.bbox.width() <= rat(1, 1_000_000_000_000));
        let mut x = 1.5f64;
        for _ in 0..10 {
            x -= (x * x - 2.0) / (2.0 * x);
        }
        let c = fine.to_c64();
        assert!((c.re - x).abs() < 1e-12);
        assert!(fine.is_real());
        assert!(pos.bbox.contains_box(&fine.bbox));
    }

    #[test]
    fn equality_through_gcd() {
        let a = roots_of(&[1, 0, 1]);
        let b = roots_of(&[-1, 0, 0, 0, 1]);
        let i_a = a.iter().find(|r| r.to_c64().im > 0.5).unwrap();
        let i_b = b.iter().find(|r| r.to_c64().im > 0.5).unwrap();
        assert!(i_a.equal(i_b));
        assert!(i_a.member(&b));
        assert_eq!(b.iter().filter(|r| i_a.equal(r)).count(), 1);
        let zero = AlgebraicNumber::zero();
        assert!(zero.member(&isolate_roots(&(crate::polyalg::c(4) * t().pow(3))).unwrap()));
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&rat(-1, 3), 3), "-0.333");
        assert_eq!(decimal(&rat(5, 2), 0), "3");
        assert_eq!(decimal(&rat(1, 200), 2), "0.01");
    }

    #[test]
    fn close_roots_certify() {
        // Roots 1 and 1 + 1e-20 are not separable in f64.
        let e = Rational::new(1.into(), BigInt::from(10).pow(20));
        let p = UniPoly::from_roots(&[int(1), int(1) + e]);
        let r = isolate_unipoly(&p).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].bbox.disjoint(&r[1].bbox));
    }

    #[test]
    fn wilkinson_like() {
        let roots: Vec<Rational> = (1..=12).map(int).collect();
        let r = isolate_unipoly(&UniPoly::from_roots(&roots)).unwrap();
        let got: Vec<Rational> = r.iter().map(|a| a.as_rational().unwrap()).collect();
        assert_eq!(got, roots);
    }
}
