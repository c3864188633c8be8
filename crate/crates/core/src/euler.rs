//! Euler characteristics of the fibres of `F = f / g` for `deg f > deg g`:
//! `chi(closure) = 3d - d^2 + sum mu` and
//! `chi(fibre) = chi(closure) - #V_infty - #A(F)`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::bifurcation::{critical_values, milnor_jump_values};
use crate::error::{Error, Result};
use crate::local::{generic_sum, milnor_pencil, sum_at_from_records, AlgebraicPoint, MilnorRecord};
use crate::polyalg::{MultiPoly, Rational, UniPoly, Var};
use crate::roots::AlgebraicNumber;

/// Affine chart of the projective plane around a point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `x = 1`, local coordinates `(y, z)` written as `(x, y)`.
    XIsOne,
    /// `y = 1`, local coordinates `(x, z)` written as `(x, y)`.
    YIsOne,
}

#[derive(Clone, Debug)]
pub struct InfinityPoint {
    pub chart: Chart,
    /// Position in the chart coordinates.
    pub point: AlgebraicPoint,
}

impl InfinityPoint {
    pub fn label(&self) -> String {
        match self.chart {
            Chart::YIsOne => "[0:1:0]".to_string(),
            Chart::XIsOne if self.point.count() == 1 => format!("[1:{}:0]", self.point.x.coeff(0)),
            Chart::XIsOne => format!("[1:u:0] where {} = 0", self.point.modulus.fmt_var("u")),
        }
    }
}

fn require_strict(f: &MultiPoly, g: &MultiPoly) -> Result<u32> {
    let d = f.degree_xy();
    if d <= g.degree_xy() {
        return Err(Error::RequiresStrictDegree);
    }
    Ok(d)
}

/// Points where the closures of the fibres meet the line at infinity; these
/// are the zeros of the top-degree form of `f`.
pub fn points_at_infinity(f: &MultiPoly, g: &MultiPoly) -> Result<Vec<InfinityPoint>> {
    let d = require_strict(f, g)?;
    let fd = f.homogeneous_part_xy(d);
    let one = Rational::from_integer(1.into());
    let mut out = Vec::new();
    let affine = fd.eval_var(Var::X, &one).to_unipoly(Var::Y).unwrap_or_else(|| UniPoly::constant(fd.eval_var(Var::X, &one).constant_value().unwrap()));
    if !affine.is_constant() {
        let s = affine.squarefree_part();
        out.push(InfinityPoint { chart: Chart::XIsOne, point: AlgebraicPoint::new(&s, &UniPoly::var(), &UniPoly::zero()) });
    }
    let mut top = [0u32; crate::polyalg::NVARS];
    top[Var::Y.index()] = d;
    if fd.coeff_of(&top).is_zero() {
        out.push(InfinityPoint { chart: Chart::YIsOne, point: AlgebraicPoint::origin() });
    }
    Ok(out)
}

/// The homogenized pencil `f^h - t g^h` written in a chart.
pub fn chart_pencil(f: &MultiPoly, g: &MultiPoly, d: u32, chart: Chart) -> Result<MultiPoly> {
    let big = &f.homogenize(d)? - &(&g.homogenize(d)? * &MultiPoly::var(Var::T));
    let one = Rational::from_integer(1.into());
    let mut b = BTreeMap::new();
    match chart {
        Chart::XIsOne => {
            b.insert(Var::X, MultiPoly::constant(one));
            b.insert(Var::Y, MultiPoly::var(Var::X));
            b.insert(Var::Z, MultiPoly::var(Var::Y));
        }
        Chart::YIsOne => {
            b.insert(Var::Y, MultiPoly::constant(one));
            b.insert(Var::Z, MultiPoly::var(Var::Y));
        }
    }
    Ok(big.substitute(&b))
}

/// Euler characteristic of a smooth projective plane curve of degree `d`.
pub fn chi_smooth(d: u32) -> i64 {
    let d = d as i64;
    3 * d - d * d
}

#[derive(Clone, Debug)]
pub enum TValue {
    Generic,
    At(AlgebraicNumber),
}

#[derive(Clone, Debug)]
pub struct ChiRow {
    pub t: TValue,
    pub sum_mu_affine: usize,
    pub sum_mu_infinity: usize,
    pub chi_projective: i64,
    pub chi_fiber: i64,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ChiTable {
    pub d: u32,
    pub chi_smooth_projective: i64,
    pub v_infinity_count: usize,
    pub a_count: usize,
    pub infinity_points: Vec<String>,
    pub rows: Vec<ChiRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiVerdict {
    InBInfty,
    NotInBInfty,
}

impl ChiVerdict {
    pub fn label(self) -> &'static str {
        match self {
            ChiVerdict::InBInfty => "in_Binfty",
            ChiVerdict::NotInBInfty => "not_in_Binfty",
        }
    }
}

/// Everything needed to evaluate fibre Euler characteristics repeatedly.
pub struct EulerContext {
    pub d: u32,
    affine_pencil: MultiPoly,
    affine: Vec<MilnorRecord>,
    infinity: Vec<(InfinityPoint, MultiPoly, Vec<MilnorRecord>)>,
    pub a_count: usize,
    k0: Vec<AlgebraicNumber>,
    k1: Vec<AlgebraicNumber>,
}

impl EulerContext {
    /// `affine` are the Milnor records of `f - t g` over `A(F)`.
    pub fn new(f: &MultiPoly, g: &MultiPoly, k0: &[AlgebraicNumber], k1: &[AlgebraicNumber], affine: Vec<MilnorRecord>) -> Result<Self> {
        let d = require_strict(f, g)?;
        let mut infinity = Vec::new();
        for p in points_at_infinity(f, g)? {
            let h = chart_pencil(f, g, d, p.chart)?;
            let recs = milnor_pencil(&h, &p.point)?;
            infinity.push((p, h, recs));
        }
        let a_count = affine.iter().map(|r| r.point.count()).sum();
        Ok(EulerContext {
            d,
            affine_pencil: f - &(g * &MultiPoly::var(Var::T)),
            affine,
            infinity,
            a_count,
            k0: k0.to_vec(),
            k1: k1.to_vec(),
        })
    }

    pub fn from_pair(f: &MultiPoly, g: &MultiPoly) -> Result<Self> {
        require_strict(f, g)?;
        let k0 = critical_values(f, g)?.values;
        let k1 = milnor_jump_values(f, g, &k0)?;
        Self::new(f, g, &k0, &k1.values, k1.records)
    }

    pub fn v_infinity_count(&self) -> usize {
        self.infinity.iter().map(|(p, _, _)| p.point.count()).sum()
    }

    pub fn row(&self, t: &TValue) -> Result<ChiRow> {
        let mut notes = Vec::new();
        let (affine, at_inf) = match t {
            TValue::Generic => {
                let a = generic_sum(&self.affine);
                let i = self.infinity.iter().map(|(_, _, r)| generic_sum(r)).sum();
                (a, i)
            }
            TValue::At(t0) => {
                if t0.member(&self.k0) {
                    return Err(Error::CriterionInapplicable(format!("t = {} is a critical value", t0.approx(6))));
                }
                if t0.member(&self.k1) {
                    notes.push("fibre formula not asserted for values in K1".to_string());
                }
                let a = sum_at_from_records(&self.affine_pencil, &self.affine, t0)?;
                let mut i = 0;
                for (_, h, recs) in &self.infinity {
                    i += sum_at_from_records(h, recs, t0)?;
                }
                (a, i)
            }
        };
        let chi_projective = chi_smooth(self.d) + affine as i64 + at_inf as i64;
        let chi_fiber = chi_projective - self.v_infinity_count() as i64 - self.a_count as i64;
        Ok(ChiRow { t: t.clone(), sum_mu_affine: affine, sum_mu_infinity: at_inf, chi_projective, chi_fiber, notes })
    }

    /// `t0` is in `B_infty` iff the fibre Euler characteristic jumps up.
    pub fn jump_test(&self, t0: &AlgebraicNumber) -> Result<ChiVerdict> {
        if t0.member(&self.k0) || t0.member(&self.k1) {
            return Err(Error::CriterionInapplicable(format!("t = {} lies in K0 ∪ K1", t0.approx(6))));
        }
        let generic = self.row(&TValue::Generic)?;
        let special = self.row(&TValue::At(t0.clone()))?;
        let fiber_jump = special.chi_fiber > generic.chi_fiber;
        // Same comparison on the curves including A(F).
        let curve_jump = special.chi_fiber + self.a_count as i64 > generic.chi_fiber + self.a_count as i64;
        assert_eq!(fiber_jump, curve_jump, "fibre and curve jump criteria disagree");
        assert!(special.chi_fiber >= generic.chi_fiber, "Euler characteristic dropped at a special value");
        Ok(if fiber_jump { ChiVerdict::InBInfty } else { ChiVerdict::NotInBInfty })
    }

    pub fn table(&self, rows: Vec<ChiRow>) -> ChiTable {
        ChiTable {
            d: self.d,
            chi_smooth_projective: chi_smooth(self.d),
            v_infinity_count: self.v_infinity_count(),
            a_count: self.a_count,
            infinity_points: self.infinity.iter().map(|(p, _, _)| p.label()).collect(),
            rows,
        }
    }
}

/// One row of the Euler characteristic table.
pub fn chi_fiber(f: &MultiPoly, g: &MultiPoly, t: &TValue) -> Result<ChiRow> {
    EulerContext::from_pair(f, g)?.row(t)
}

pub fn chi_jump_test(f: &MultiPoly, g: &MultiPoly, t0: &AlgebraicNumber) -> Result<ChiVerdict> {
    EulerContext::from_pair(f, g)?.jump_test(t0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::intersection_at_origin;
    use crate::polyalg::{c, int, x, y};

    #[test]
    fn smooth_curves() {
        assert_eq!((chi_smooth(1), chi_smooth(2), chi_smooth(3)), (2, 2, 0));
    }

    #[test]
    fn infinity_points() {
        let p = points_at_infinity(&(x().pow(3) + c(1)), &(x() * y() + c(1))).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].chart, Chart::YIsOne);
        let p = points_at_infinity(&(x() + x().pow(2) * y()), &c(1)).unwrap();
        assert_eq!(p.iter().map(|q| q.point.count()).sum::<usize>(), 2);
        let p = points_at_infinity(&(x().pow(4) + y().pow(4)), &c(1)).unwrap();
        assert_eq!(p.iter().map(|q| q.point.count()).sum::<usize>(), 4);
        assert_eq!(points_at_infinity(&x(), &(x() + c(1))).unwrap_err(), Error::RequiresStrictDegree);
    }

    #[test]
    fn cubic_over_hyperbola_rows() {
        let f = x().pow(3) + c(1);
        let g = x() * y() + c(1);
        let generic = chi_fiber(&f, &g, &TValue::Generic).unwrap();
        assert_eq!((generic.sum_mu_affine, generic.sum_mu_infinity, generic.chi_fiber), (0, 1, -3));
        let zero = chi_fiber(&f, &g, &TValue::At(AlgebraicNumber::zero())).unwrap();
        assert_eq!((zero.sum_mu_infinity, zero.chi_fiber), (4, 0));
        assert_eq!(chi_jump_test(&f, &g, &AlgebraicNumber::zero()).unwrap(), ChiVerdict::InBInfty);
        assert_eq!(chi_jump_test(&f, &g, &AlgebraicNumber::rational(int(2))).unwrap(), ChiVerdict::NotInBInfty);
        assert!(matches!(chi_fiber(&f, &g, &TValue::At(AlgebraicNumber::rational(int(1)))), Err(Error::CriterionInapplicable(_))));
    }

    #[test]
    fn cubic_over_hyperbola_infinity_oracle() {
        // Generic mu at [0:1:0] from the chart partials at t = 5.
        let t = crate::polyalg::c(5);
        let hx = c(3) * x().pow(2) - t.clone() * y();
        let hy = -(t.clone() * x()) + c(3) * (c(1) - t) * y().pow(2);
        assert_eq!(intersection_at_origin(&hx, &hy).unwrap(), 1);
    }

    #[test]
    fn x_plus_x2y_rows() {
        let f = x() + x().pow(2) * y();
        let g = c(1);
        assert_eq!(chi_fiber(&f, &g, &TValue::Generic).unwrap().chi_fiber, 0);
        let zero = chi_fiber(&f, &g, &TValue::At(AlgebraicNumber::zero())).unwrap();
        assert_eq!((zero.sum_mu_infinity, zero.chi_fiber), (3, 1));
    }

    #[test]
    fn conic_fibre_is_cylinder() {
        // x^2 + y^2 = t is C* for t != 0.
        let row = chi_fiber(&(x().pow(2) + y().pow(2)), &c(1), &TValue::Generic).unwrap();
        assert_eq!(row.chi_fiber, 0);
    }
}
