//! Assembly of the bifurcation set `B(F) = K0 ∪ K1 ∪ B_infty` for
//! `F = f / g`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::binfty::{critical_values_at_infinity, DegreeCase, InfinityCriterion};
use crate::elimination::gcd_full;
use crate::error::{Error, Result};
use crate::euler::{ChiTable, ChiVerdict, EulerContext, TValue};
use crate::local::{char_poly, milnor_parametric, solve_system, AlgebraicPoint, MilnorRecord};
use crate::polyalg::{dynamic_eval, MultiPoly, NumberField, Rational, UniPoly, Var};
use crate::roots::{isolate_unipoly, sort_for_display, AlgebraicNumber};

/// Critical values with the eliminant they are roots of.
#[derive(Clone, Debug)]
pub struct CriticalValues {
    pub eliminant: UniPoly,
    pub values: Vec<AlgebraicNumber>,
}

/// Numerators of `dF/dx` and `dF/dy`.
pub fn gradient_numerators(f: &MultiPoly, g: &MultiPoly) -> (MultiPoly, MultiPoly) {
    let p = &(&f.derivative(Var::X) * g) - &(f * &g.derivative(Var::X));
    let q = &(&f.derivative(Var::Y) * g) - &(f * &g.derivative(Var::Y));
    (p, q)
}

fn eval_at_point(h: &MultiPoly, pt: &AlgebraicPoint, field: &NumberField) -> UniPoly {
    let v = pt.translate(h).eval_var(Var::X, &Rational::zero()).eval_var(Var::Y, &Rational::zero());
    field.reduce(&v.to_unipoly(Var::U).unwrap_or_else(|| UniPoly::constant(v.constant_value().unwrap())))
}

/// `K0(F)`: values of `F` at its critical points off `g = 0`.
pub fn critical_values(f: &MultiPoly, g: &MultiPoly) -> Result<CriticalValues> {
    let (p, q) = gradient_numerators(f, g);
    if p.is_zero() && q.is_zero() {
        return Err(Error::DegenerateCriticalLocus);
    }
    let common = gcd_full(&p, &q);
    let mut rest = common.clone();
    loop {
        let h = gcd_full(&rest, g);
        if h.is_constant() {
            break;
        }
        rest = rest.div_exact(&h).unwrap();
    }
    if !rest.is_constant() {
        return Err(Error::DegenerateCriticalLocus);
    }
    let (p, q) = if common.is_constant() {
        (p, q)
    } else {
        (p.div_exact(&common).unwrap(), q.div_exact(&common).unwrap())
    };
    let mut eliminant = UniPoly::one();
    for pt in solve_system(&p, &q)? {
        let branches = dynamic_eval(&pt.modulus, |field| {
            let gv = eval_at_point(g, &pt, field);
            if field.is_zero(&gv)? {
                return Ok(None);
            }
            let inv = field.invert(&gv)?;
            let fv = eval_at_point(f, &pt, field);
            Ok(Some(field.mul(&fv, &inv)))
        })?;
        for (field, v) in branches {
            if let Some(v) = v {
                let cp = char_poly(field.modulus(), &v).squarefree_part();
                eliminant = (&eliminant * &cp).squarefree_part();
            }
        }
    }
    let eliminant = eliminant.primitive();
    let values = isolate_unipoly(&eliminant)?.into_iter().map(|a| a.simplified()).collect();
    Ok(CriticalValues { eliminant, values })
}

/// `K1(F)` with the per-point Milnor records over `A(F)`.
#[derive(Clone, Debug)]
pub struct MilnorJumps {
    pub indeterminacy: Vec<AlgebraicPoint>,
    pub records: Vec<MilnorRecord>,
    pub values: Vec<AlgebraicNumber>,
}

pub fn milnor_jump_values(f: &MultiPoly, g: &MultiPoly, k0: &[AlgebraicNumber]) -> Result<MilnorJumps> {
    let indeterminacy = solve_system(f, g)?;
    let mut records = Vec::new();
    for pt in &indeterminacy {
        records.extend(milnor_parametric(f, g, pt)?);
    }
    let mut values: Vec<AlgebraicNumber> = Vec::new();
    for r in &records {
        for t0 in r.jumps() {
            if !t0.member(k0) && !t0.member(&values) {
                values.push(t0);
            }
        }
    }
    sort_for_display(&mut values);
    Ok(MilnorJumps { indeterminacy, records, values })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tag {
    K0,
    K1,
    BInfty,
    /// Root of `q_k` that also lies in `K0 ∪ K1`.
    BInftyUndetermined,
    /// Value where the pencil drops degree.
    DegreeDrop,
}

impl Tag {
    pub fn label(self) -> &'static str {
        match self {
            Tag::K0 => "K0",
            Tag::K1 => "K1",
            Tag::BInfty => "B_infty",
            Tag::BInftyUndetermined => "B_infty_undetermined",
            Tag::DegreeDrop => "degree_drop",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equality,
    Containment,
}

impl Relation {
    pub fn label(self) -> &'static str {
        match self {
            Relation::Equality => "equality",
            Relation::Containment => "containment",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TaggedValue {
    pub value: AlgebraicNumber,
    pub tags: Vec<Tag>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct BifurcationReport {
    pub f: MultiPoly,
    pub g: MultiPoly,
    pub deg_f: u32,
    pub deg_g: u32,
    pub k0: CriticalValues,
    pub k1: MilnorJumps,
    pub infinity: InfinityCriterion,
    /// Criterion roots outside `K0 ∪ K1`.
    pub b_infty: Vec<AlgebraicNumber>,
    pub b: Vec<TaggedValue>,
    pub relation: Relation,
    pub chi_table: Option<ChiTable>,
    pub flags: Vec<String>,
}

impl BifurcationReport {
    pub fn b_values(&self) -> Vec<AlgebraicNumber> {
        self.b.iter().map(|v| v.value.clone()).collect()
    }
}

/// Rejects zero inputs and pairs with a common factor.
pub fn validate_pair(f: &MultiPoly, g: &MultiPoly) -> Result<()> {
    for (name, p) in [("f", f), ("g", g)] {
        if p.is_zero() {
            return Err(Error::Input(format!("{name} must be nonzero")));
        }
        if p.contains_var(Var::Z) || p.contains_var(Var::T) || p.contains_var(Var::U) {
            return Err(Error::Input(format!("{name} must be a polynomial in x and y")));
        }
    }
    let h = gcd_full(f, g);
    if !h.is_constant() {
        return Err(Error::CommonFactor(h.to_string()));
    }
    Ok(())
}

fn add_tag(b: &mut Vec<TaggedValue>, v: &AlgebraicNumber, tag: Tag, note: Option<String>) {
    if let Some(e) = b.iter_mut().find(|e| e.value.equal(v)) {
        if !e.tags.contains(&tag) {
            e.tags.push(tag);
        }
        e.notes.extend(note);
    } else {
        b.push(TaggedValue { value: v.clone(), tags: vec![tag], notes: note.into_iter().collect() });
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Build the Euler characteristic table and run the jump test on every
    /// value of `B` outside `K0 ∪ K1`.
    pub verify_chi: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { verify_chi: true }
    }
}

/// Runs the full pipeline with default options.
pub fn bifurcation_set(f: &MultiPoly, g: &MultiPoly) -> Result<BifurcationReport> {
    bifurcation_set_with(f, g, Options::default())
}

pub fn bifurcation_set_with(f: &MultiPoly, g: &MultiPoly, options: Options) -> Result<BifurcationReport> {
    validate_pair(f, g)?;
    let k0 = critical_values(f, g)?;
    let k1 = milnor_jump_values(f, g, &k0.values)?;
    let infinity = critical_values_at_infinity(f, g)?;
    let deg_f = f.degree_xy();
    let deg_g = g.degree_xy();
    let strict = deg_f > deg_g;
    let mut flags = Vec::new();

    let mut special: Vec<AlgebraicNumber> = k0.values.clone();
    special.extend(k1.values.iter().cloned());

    let mut b: Vec<TaggedValue> = Vec::new();
    for v in &k0.values {
        add_tag(&mut b, v, Tag::K0, None);
    }
    for v in &k1.values {
        add_tag(&mut b, v, Tag::K1, None);
    }
    let mut b_infty = Vec::new();
    for r in &infinity.roots {
        if r.member(&special) {
            add_tag(&mut b, r, Tag::BInftyUndetermined, Some("B_infty undetermined by q_k criterion (value in K0 ∪ K1)".into()));
        } else {
            add_tag(&mut b, r, Tag::BInfty, Some("B_infty member (criterion applies)".into()));
            b_infty.push(r.clone());
        }
    }
    for e in infinity.excluded() {
        add_tag(&mut b, &e, Tag::DegreeDrop, Some("deg(f - t g) drops here; B_infty undetermined by q_k criterion".into()));
    }
    if infinity.degree.case == DegreeCase::DenominatorDominant {
        for v in b.iter_mut() {
            if v.value.as_rational().is_none_or(|r| !r.is_zero()) {
                v.notes.push("numeric Malgrange criterion valid (deg f < deg g, t0 != 0)".into());
            }
        }
    }
    let relation = if strict { Relation::Equality } else { Relation::Containment };
    if !strict {
        flags.push(format!("{}: B reported as containment", infinity.degree.case.label()));
    }

    let chi_table = if !options.verify_chi {
        flags.push("Euler characteristic check skipped".into());
        None
    } else if strict {
        let ctx = EulerContext::new(f, g, &k0.values, &k1.values, k1.records.clone())?;
        let mut rows = vec![ctx.row(&TValue::Generic)?];
        for v in &b {
            if v.value.member(&k0.values) {
                continue;
            }
            rows.push(ctx.row(&TValue::At(v.value.clone()))?);
        }
        for v in b.iter_mut() {
            if v.value.member(&special) {
                continue;
            }
            let verdict = ctx.jump_test(&v.value)?;
            let by_qk = v.tags.contains(&Tag::BInfty);
            if (verdict == ChiVerdict::InBInfty) != by_qk {
                flags.push(format!("chi jump test disagrees with q_k criterion at {}", v.value.approx(6)));
            }
            v.notes.push(format!("chi jump test: {}", verdict.label()));
        }
        Some(ctx.table(rows))
    } else {
        flags.push("Euler characteristic table requires deg f > deg g".into());
        None
    };

    let mut order: Vec<(usize, (f64, f64, usize))> = b.iter().enumerate().map(|(i, v)| (i, v.value.display_key())).collect();
    order.sort_by(|a, c| a.1 .0.total_cmp(&c.1 .0).then(a.1 .1.total_cmp(&c.1 .1)).then(a.1 .2.cmp(&c.1 .2)));
    let mut slots: BTreeMap<usize, TaggedValue> = b.into_iter().enumerate().collect();
    let b = order.into_iter().map(|(i, _)| slots.remove(&i).unwrap()).collect();

    Ok(BifurcationReport { f: f.clone(), g: g.clone(), deg_f, deg_g, k0, k1, infinity, b_infty, b, relation, chi_table, flags })
}
