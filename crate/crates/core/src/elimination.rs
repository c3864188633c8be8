//! Resultants, discriminants and gcds over `Q[x, y, z, t, u]` via
//! subresultant polynomial remainder sequences.

use crate::error::{Error, Result};
use crate::polyalg::{MultiPoly, Var};

/// Sign convention recorded with every discriminant.
pub const DISCRIMINANT_CONVENTION: &str = "(-1)^(n(n-1)/2) * res(p, dp) / lc(p)";

/// A discriminant together with the variable it eliminated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discriminant {
    pub poly: MultiPoly,
    pub eliminated: Var,
    pub normalization: &'static str,
}

type Dense = Vec<MultiPoly>;

fn deg(p: &Dense) -> usize {
    p.len() - 1
}

fn lc(p: &Dense) -> &MultiPoly {
    p.last().expect("lc of zero polynomial")
}

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
fn prem(a: &Dense, b: &Dense) -> Dense {
    let n = deg(b);
    if a.len() < b.len() {
        return a.clone();
    }
    let delta = deg(a) - n;
    let lb = lc(b);
    let mut r = a.clone();
    let mut steps = 0;
    while !r.is_empty() && r.len() > n {
        let lr = lc(&r).clone();
        let shift = deg(&r) - n;
        let mut next: Dense = r.iter().map(|c| c * lb).collect();
        for (j, bc) in b.iter().enumerate() {
            next[j + shift] = &next[j + shift] - &(&lr * bc);
        }
        r = trim(next);
        steps += 1;
    }
    let extra = (delta + 1).saturating_sub(steps) as u32;
    if extra > 0 {
        let f = lb.pow(extra);
        r = r.iter().map(|c| c * &f).collect();
    }
    r
}

fn div_all(p: &Dense, d: &MultiPoly) -> Dense {
    p.iter().map(|c| c.div_exact(d).expect("subresultant division must be exact")).collect()
}

fn dense(p: &MultiPoly, v: Var) -> Dense {
    p.coefficients_in(v)
}

/// Resultant of `p` and `q` with respect to `var`, equal to the Sylvester
/// determinant.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: Var) -> Result<MultiPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroOperand);
    }
    Ok(resultant_dense(dense(p, var), dense(q, var)))
}

fn resultant_dense(a: Dense, b: Dense) -> MultiPoly {
    let (mut a, mut b, mut sign) = if a.len() < b.len() {
        let s = if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 { -1 } else { 1 };
        (b, a, s)
    } else {
        (a, b, 1)
    };
    if deg(&b) == 0 {
        return lc(&b).pow(deg(&a) as u32).scale(&sign_rat(sign));
    }
    let mut g = MultiPoly::one();
    let mut h = MultiPoly::one();
    loop {
        let delta = (deg(&a) - deg(&b)) as u32;
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = -sign;
        }
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            return MultiPoly::zero();
        }
        b = div_all(&r, &(&g * &h.pow(delta)));
        g = lc(&a).clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant h update must be exact")
        };
        if deg(&b) == 0 {
            let da = deg(&a) as u32;
            let res = lc(&b).pow(da).div_exact(&h.pow(da - 1)).expect("final subresultant step must be exact");
            return res.scale(&sign_rat(sign));
        }
    }
}

fn sign_rat(s: i32) -> crate::polyalg::Rational {
    crate::polyalg::int(s as i64)
}

/// Discriminant with the classical sign: `(-1)^(n(n-1)/2) res(p, p') / lc(p)`.
pub fn discriminant(p: &MultiPoly, var: Var) -> Result<MultiPoly> {
    let n = p.degree_in(var);
    if n == 0 {
        return Err(Error::ConstantInVariable(var.name()));
    }
    let res = resultant(p, &p.derivative(var), var)?;
    let lc = p.lc_in(var);
    let d = res.div_exact(&lc).expect("resultant is divisible by the leading coefficient");
    let sign = if (n as u64 * (n as u64 - 1) / 2) % 2 == 1 { -1 } else { 1 };
    Ok(d.scale(&sign_rat(sign)))
}

/// Discriminant wrapped with its bookkeeping.
pub fn discriminant_record(p: &MultiPoly, var: Var) -> Result<Discriminant> {
    Ok(Discriminant { poly: discriminant(p, var)?, eliminated: var, normalization: DISCRIMINANT_CONVENTION })
}

fn main_var(p: &MultiPoly, q: &MultiPoly) -> Option<Var> {
    Var::ALL.into_iter().find(|&v| p.contains_var(v) || q.contains_var(v))
}

/// Greatest common divisor over `Q[x, y, z, t, u]`, normalized so that the
/// lex-leading coefficient is one. `gcd(0, 0) = 0`.
pub fn gcd_full(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        return q.monic_lex();
    }
    if q.is_zero() {
        return p.monic_lex();
    }
    let Some(v) = main_var(p, q) else {
        return MultiPoly::one();
    };
    if !p.contains_var(v) {
        return gcd_full(p, &content(q, v));
    }
    if !q.contains_var(v) {
        return gcd_full(&content(p, v), q);
    }
    let cp = content(p, v);
    let cq = content(q, v);
    let pp = p.div_exact(&cp).unwrap();
    let pq = q.div_exact(&cq).unwrap();
    let g = primitive_prs_gcd(dense(&pp, v), dense(&pq, v), v);
    (&gcd_full(&cp, &cq) * &g).monic_lex()
}

/// Subresultant gcd of two primitive polynomials in `v`.
fn primitive_prs_gcd(a: Dense, b: Dense, v: Var) -> MultiPoly {
    let (mut a, mut b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let mut g = MultiPoly::one();
    let mut h = MultiPoly::one();
    loop {
        let delta = (deg(&a) - deg(&b)) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            let bp = MultiPoly::from_coefficients_in(v, &b);
            return primitive_part(&bp, v);
        }
        if deg(&r) == 0 {
            return MultiPoly::one();
        }
        a = b;
        b = div_all(&r, &(&g * &h.pow(delta)));
        g = lc(&a).clone();
        h = if delta == 0 { h } else { g.pow(delta).div_exact(&h.pow(delta - 1)).unwrap() };
    }
}

/// Gcd of `p` and `q`. The variable selects the subresultant main variable
/// for the primitive parts; the result is the full gcd in all variables.
pub fn gcd(p: &MultiPoly, q: &MultiPoly, var: Var) -> MultiPoly {
    if p.is_zero() || q.is_zero() || !(p.contains_var(var) && q.contains_var(var)) {
        return gcd_full(p, q);
    }
    let cp = content(p, var);
    let cq = content(q, var);
    let pp = p.div_exact(&cp).unwrap();
    let pq = q.div_exact(&cq).unwrap();
    let g = primitive_prs_gcd(dense(&pp, var), dense(&pq, var), var);
    (&gcd_full(&cp, &cq) * &g).monic_lex()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content(p: &MultiPoly, var: Var) -> MultiPoly {
    let coeffs = p.coefficients_in(var);
    let mut g = MultiPoly::zero();
    for c in coeffs.iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd_full(&g, c);
        if g.is_constant() {
            return MultiPoly::one();
        }
    }
    g
}

pub fn primitive_part(p: &MultiPoly, var: Var) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    p.div_exact(&content(p, var)).unwrap()
}

/// `p / gcd(p, dp/dvar)`, lex-monic.
pub fn squarefree_part(p: &MultiPoly, var: Var) -> MultiPoly {
    if !p.contains_var(var) {
        return p.monic_lex();
    }
    let g = gcd_full(p, &p.derivative(var));
    p.div_exact(&g).expect("gcd divides p").monic_lex()
}

/// True when `f` and `g` share no nonconstant factor.
pub fn coprime(f: &MultiPoly, g: &MultiPoly) -> bool {
    gcd_full(f, g).is_constant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{c, t, x, y};

    /// Independent oracle: cofactor expansion of the Sylvester matrix.
    fn sylvester(p: &MultiPoly, q: &MultiPoly, v: Var) -> MultiPoly {
        let a = p.coefficients_in(v);
        let b = q.coefficients_in(v);
        let (m, n) = (a.len() - 1, b.len() - 1);
        let size = m + n;
        let mut mat = vec![vec![MultiPoly::zero(); size]; size];
        for i in 0..n {
            for (k, ak) in a.iter().rev().enumerate() {
                mat[i][i + k] = ak.clone();
            }
        }
        for i in 0..m {
            for (k, bk) in b.iter().rev().enumerate() {
                mat[n + i][i + k] = bk.clone();
            }
        }
        det(&mat)
    }

    fn det(m: &[Vec<MultiPoly>]) -> MultiPoly {
        if m.is_empty() {
            return MultiPoly::one();
        }
        let mut acc = MultiPoly::zero();
        for j in 0..m.len() {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<MultiPoly>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| e.clone()).collect()).collect();
            let term = &m[0][j] * &det(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn resultant_small() {
        let r = resultant(&(x().pow(2) - t()), &(x() - c(1)), Var::X).unwrap();
        assert_eq!(r, c(1) - t());
        assert_eq!(r, sylvester(&(x().pow(2) - t()), &(x() - c(1)), Var::X));
    }

    #[test]
    fn resultant_common_factor_vanishes() {
        let p = (x() - y()) * (x() + c(1));
        let q = (x() - y()) * (x() + c(2));
        assert!(resultant(&p, &q, Var::X).unwrap().is_zero());
    }

    #[test]
    fn resultant_of_cubic_pencil() {
        let p = x().pow(3) - t() * x() * y() + (c(1) - t());
        let q = p.derivative(Var::X);
        let r = resultant(&p, &q, Var::X).unwrap();
        let expected = -(c(4) * t().pow(3) * y().pow(3) - c(27) * (c(1) - t()).pow(2));
        assert_eq!(r, expected);
        assert_eq!(r, sylvester(&p, &q, Var::X));
    }

    #[test]
    fn zero_operand() {
        assert_eq!(resultant(&MultiPoly::zero(), &x(), Var::X), Err(Error::ZeroOperand));
    }

    #[test]
    fn discriminants() {
        let p1 = -(t() * x().pow(2)) + x() * y() + (c(1) - t());
        assert_eq!(discriminant(&p1, Var::X).unwrap(), y().pow(2) + c(4) * t() * (c(1) - t()));
        let p2 = x().pow(2) + x() * y() + (c(1) - t());
        assert_eq!(discriminant(&p2, Var::X).unwrap(), y().pow(2) - c(4) * (c(1) - t()));
        assert_eq!(discriminant(&(x().pow(2) - t()), Var::X).unwrap(), c(4) * t());
        assert_eq!(discriminant(&(x() + x().pow(2) * y() - t()), Var::X).unwrap(), c(1) + c(4) * t() * y());
        assert_eq!(discriminant(&(y() + c(1)), Var::X), Err(Error::ConstantInVariable('x')));
    }

    #[test]
    fn gcds() {
        let g = gcd(&((x() - y()) * (x() + c(1))), &((x() - y()) * (x() + c(2))), Var::X);
        assert_eq!(g, x() - y());
        let sq = squarefree_part(&((x() - c(1)).pow(2) * (x() + c(2))), Var::X);
        assert_eq!(sq, (x() - c(1)) * (x() + c(2)));
        assert!(gcd(&(x() * y() + c(1)), &(x().pow(2) + c(1)), Var::X).is_constant());
        assert_eq!(resultant(&(x() * y() + c(1)), &(x().pow(2) + c(1)), Var::X).unwrap(), y().pow(2) + c(1));
    }

    #[test]
    fn gcd_with_content() {
        let a = (t() + c(1)) * (x() - y()) * y();
        let b = (t() + c(1)) * (x() - y()).pow(2);
        assert_eq!(gcd_full(&a, &b), (t() + c(1)) * (x() - y()));
        assert_eq!(content(&(t() * x() + t() * y()), Var::X), t());
    }
}
