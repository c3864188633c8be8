//! Run configuration and report serialization.
//!
//! The JSON tree is the single source of truth; the text format is a
//! rendering of the same tree.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::bifurcation::{bifurcation_set_with, BifurcationReport, Options, Tag, TaggedValue};
use crate::error::{Error, Result};
use crate::euler::{ChiTable, TValue};
use crate::numeric::{
    diagnose_curve, geometric_radii, search_malgrange_witness, DiagnosticRow, NumericMap, Trend, WitnessCurve,
    BOUNDED_FLOOR, SEARCH_ANGLES, SLOPE_BOUNDED, SLOPE_TO_ZERO,
};
use crate::parser::{parse, parse_with};
use crate::polyalg::{MultiPoly, UniPoly, Var};
use crate::roots::AlgebraicNumber;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_PRECISION: usize = 12;
pub const DEFAULT_RADII: (f64, f64, usize) = (10.0, 10000.0, 4);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

/// One line of a curve file: `x(s); y(s); s_min; s_max; samples[; t0]`.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub line: usize,
    pub source: String,
    pub x: MultiPoly,
    pub y: MultiPoly,
    pub s_min: f64,
    pub s_max: f64,
    pub samples: usize,
    pub t0: Option<Complex64>,
}

#[derive(Clone, Debug)]
pub enum DiagnosticsMode {
    Off,
    Auto,
    Curves { path: String, curves: Vec<CurveSpec> },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub f_text: String,
    pub g_text: String,
    pub output: OutputFormat,
    pub precision: usize,
    pub diagnostics: DiagnosticsMode,
    /// `(first, last, count)`, geometrically spaced.
    pub radii: (f64, f64, usize),
    pub verify_chi: bool,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(f_text: &str, g_text: &str) -> Self {
        RunConfig {
            f_text: f_text.to_string(),
            g_text: g_text.to_string(),
            output: OutputFormat::Text,
            precision: DEFAULT_PRECISION,
            diagnostics: DiagnosticsMode::Off,
            radii: DEFAULT_RADII,
            verify_chi: true,
            seed: 0,
        }
    }
}

/// Parses `a:b:n` with `0 < a < b` and `n >= 2`, or `a:a:1`.
pub fn parse_radii(text: &str) -> Result<(f64, f64, usize)> {
    let bad = || Error::Input(format!("radii must be a:b:n with 0 < a <= b, got '{text}'"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite() && a > 0.0 && b >= a && n >= 1) || (n == 1 && a != b) || (n > 1 && a == b) {
        return Err(bad());
    }
    Ok((a, b, n))
}

fn complex_constant(text: &str, column_offset: usize) -> Result<Complex64> {
    let p = parse_with(text, &[('i', Var::U)]).map_err(|e| shift(e, column_offset))?;
    let mut at = [Complex64::default(); crate::polyalg::NVARS];
    at[Var::U.index()] = Complex64::i();
    Ok(crate::numeric::Compiled::new(&p).eval(&at).0)
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { column, message } => Error::Parse { column: column + by, message },
        e => e,
    }
}

/// Reads a curve file. Blank lines and lines starting with `#` are skipped.
/// Expressions use the polynomial grammar with the parameter `s` and the
/// imaginary unit `i`.
pub fn parse_curve_file(text: &str) -> Result<Vec<CurveSpec>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split(';').collect();
        if fields.len() != 5 && fields.len() != 6 {
            return Err(Error::Input(format!("curve line {line}: expected 5 or 6 ';'-separated fields")));
        }
        let mut offset = 0;
        let mut offsets = Vec::new();
        for f in &fields {
            offsets.push(offset);
            offset += f.chars().count() + 1;
        }
        let vars = [('s', Var::T), ('i', Var::U)];
        let expr = |j: usize| {
            parse_with(fields[j], &vars).map_err(|e| match shift(e, offsets[j]) {
                Error::Parse { column, message } => Error::Input(format!("curve line {line}, column {column}: {message}")),
                e => e,
            })
        };
        let x = expr(0)?;
        let y = expr(1)?;
        let number = |j: usize, what: &str| -> Result<f64> {
            fields[j]
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Input(format!("curve line {line}: {what} must be a finite number")))
        };
        let s_min = number(2, "s_min")?;
        let s_max = number(3, "s_max")?;
        let samples: usize = fields[4]
            .trim()
            .parse()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| Error::Input(format!("curve line {line}: samples must be a positive integer")))?;
        if s_max < s_min {
            return Err(Error::Input(format!("curve line {line}: s_max < s_min")));
        }
        let t0 = match fields.get(5) {
            Some(f) => Some(complex_constant(f, offsets[5]).map_err(|e| match e {
                Error::Parse { column, message } => Error::Input(format!("curve line {line}, column {column}: {message}")),
                e => e,
            })?),
            None => None,
        };
        out.push(CurveSpec { line, source: trimmed.to_string(), x, y, s_min, s_max, samples, t0 });
    }
    Ok(out)
}

/// A finished run: the report tree.
#[derive(Clone, Debug)]
pub struct Report {
    pub tree: Value,
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => serde_json::to_string_pretty(&self.tree).expect("serializable") + "\n",
            OutputFormat::Text => render_text(&self.tree),
        }
    }
}

/// Parses the inputs, runs the pipeline and the requested diagnostics.
pub fn run(config: &RunConfig) -> Result<Report> {
    let f = parse(&config.f_text).map_err(|e| label_parse(e, "f"))?;
    let g = parse(&config.g_text).map_err(|e| label_parse(e, "g"))?;
    let report = bifurcation_set_with(&f, &g, Options { verify_chi: config.verify_chi })?;
    let diagnostics = diagnostics(&report, config)?;
    Ok(Report { tree: build_tree(&report, config, diagnostics) })
}

fn label_parse(e: Error, which: &str) -> Error {
    match e {
        Error::Parse { column, message } => Error::Parse { column, message: format!("{which}: {message}") },
        e => e,
    }
}

fn upoly(p: &UniPoly) -> String {
    p.fmt_var("t")
}

fn find<'a>(b: &'a [TaggedValue], v: &AlgebraicNumber) -> Option<&'a TaggedValue> {
    b.iter().find(|e| e.value.equal(v))
}

fn tag_list(tags: &[Tag]) -> Value {
    Value::Array(tags.iter().map(|t| Value::from(t.label())).collect())
}

fn value_entry(report: &BifurcationReport, v: &AlgebraicNumber, digits: usize) -> Value {
    let tags = find(&report.b, v).map(|e| tag_list(&e.tags)).unwrap_or(Value::Array(vec![]));
    json!({ "defining": upoly(&v.defining), "approx": v.approx_trimmed(digits), "tags": tags })
}

fn binfty_entry(report: &BifurcationReport, v: &AlgebraicNumber, digits: usize) -> Value {
    let ic = &report.infinity;
    let reexamined = v.as_rational().and_then(|r| ic.reexamined.iter().find(|re| re.value == r));
    let (q_k, multiplicity) = match reexamined {
        Some(re) => (&re.q_k, v.multiplicity_in(&re.q_k)),
        None => (&ic.q_k, v.multiplicity_in(&ic.q_k)),
    };
    json!({
        "defining": upoly(&v.defining),
        "approx": v.approx_trimmed(digits),
        "q_k": upoly(q_k),
        "multiplicity": multiplicity,
    })
}

fn chi_json(table: &ChiTable, digits: usize) -> Value {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            let t = match &r.t {
                TValue::Generic => "generic".to_string(),
                TValue::At(v) => v.approx_trimmed(digits),
            };
            json!({
                "t": t,
                "sum_mu_affine": r.sum_mu_affine,
                "sum_mu_infinity": r.sum_mu_infinity,
                "chi_projective": r.chi_projective,
                "chi_fiber": r.chi_fiber,
                "notes": r.notes,
            })
        })
        .collect();
    json!({
        "d": table.d,
        "chi_smooth_projective": table.chi_smooth_projective,
        "v_infinity_count": table.v_infinity_count,
        "a_count": table.a_count,
        "infinity_points": table.infinity_points,
        "rows": rows,
    })
}

fn build_tree(report: &BifurcationReport, config: &RunConfig, diagnostics: Value) -> Value {
    let digits = config.precision;
    let ic = &report.infinity;
    let k0: Vec<Value> = report.k0.values.iter().map(|v| value_entry(report, v, digits)).collect();
    let k1: Vec<Value> = report.k1.values.iter().map(|v| value_entry(report, v, digits)).collect();
    let b_infty: Vec<Value> = report.b_infty.iter().map(|v| binfty_entry(report, v, digits)).collect();
    let b: Vec<Value> = report
        .b
        .iter()
        .map(|e| {
            json!({
                "defining": upoly(&e.value.defining),
                "approx": e.value.approx_trimmed(digits),
                "tags": tag_list(&e.tags),
                "notes": e.notes,
            })
        })
        .collect();
    let reexamined: Vec<Value> = ic
        .reexamined
        .iter()
        .map(|r| json!({ "value": r.value.to_string(), "lambda": r.lambda, "q_k": upoly(&r.q_k), "member": r.member }))
        .collect();
    let infinity = json!({
        "case": ic.degree.case.label(),
        "degree": ic.degree.d,
        "excluded_values": ic.degree.excluded_values.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "shear_lambda": ic.lambda,
        "x_coefficient": upoly(&ic.x_coefficient),
        "delta": ic.delta.poly.to_string(),
        "q_k": upoly(&ic.q_k),
        "k": ic.k,
        "reexamined": reexamined,
    });
    json!({
        "schema_version": SCHEMA_VERSION,
        "input": {
            "f": report.f.to_string(),
            "g": report.g.to_string(),
            "deg_f": report.deg_f,
            "deg_g": report.deg_g,
        },
        "K0": k0,
        "K1": k1,
        "B_infty": b_infty,
        "B": { "values": b, "relation": report.relation.label() },
        "infinity": infinity,
        "indeterminacy_points": report.k1.indeterminacy.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "chi_table": report.chi_table.as_ref().map_or(Value::Null, |t| chi_json(t, digits)),
        "flags": report.flags,
        "diagnostics": diagnostics,
        "config": config_json(config),
    })
}

fn config_json(config: &RunConfig) -> Value {
    let diagnose = match &config.diagnostics {
        DiagnosticsMode::Off => "off".to_string(),
        DiagnosticsMode::Auto => "auto".to_string(),
        DiagnosticsMode::Curves { path, .. } => path.clone(),
    };
    json!({
        "f": config.f_text,
        "g": config.g_text,
        "output": match config.output { OutputFormat::Text => "text", OutputFormat::Json => "json" },
        "precision": config.precision,
        "diagnose": diagnose,
        "radii": [config.radii.0, config.radii.1, config.radii.2],
        "verify_chi": config.verify_chi,
        "seed": config.seed,
    })
}

fn c_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn row_json(r: &DiagnosticRow) -> Value {
    json!({
        "s": r.s,
        "x": c_json(r.x),
        "y": c_json(r.y),
        "norm_p": r.norm_p,
        "F": c_json(r.value),
        "dist_to_t0": r.distance,
        "grad_norm": r.grad_norm,
        "norm_p_times_grad": r.malgrange,
        "alignment": r.alignment,
        "grad_rel_error": r.grad_rel_error,
    })
}

fn trend_json(t: &Trend) -> Value {
    json!({ "quantity": t.quantity, "slope": t.slope, "last": t.last, "verdict": t.verdict.label() })
}

fn thresholds_json() -> Value {
    json!({
        "to_zero_slope_below": SLOPE_TO_ZERO,
        "bounded_slope_above": SLOPE_BOUNDED,
        "bounded_value_above": BOUNDED_FLOOR,
        "window": "samples with |p| >= max |p| / 10, else the last two",
        "angles_per_radius": SEARCH_ANGLES,
        "arithmetic": "f64",
    })
}

const EVIDENCE: &str = "numerical evidence, not certification";

fn diagnostics(report: &BifurcationReport, config: &RunConfig) -> Result<Value> {
    let digits = config.precision;
    match &config.diagnostics {
        DiagnosticsMode::Off => Ok(json!({ "mode": "off" })),
        DiagnosticsMode::Auto => {
            let radii = geometric_radii(config.radii.0, config.radii.1, config.radii.2);
            let searches: Vec<Value> = report
                .b
                .iter()
                .map(|e| {
                    let t0 = e.value.to_c64();
                    let s = search_malgrange_witness(&report.f, &report.g, t0, &radii);
                    let rows: Vec<Value> = s
                        .rows
                        .iter()
                        .map(|r| match &r.best {
                            Some((row, src)) => {
                                json!({ "radius": r.radius, "empty": false, "source": src.label(), "row": row_json(row) })
                            }
                            None => json!({ "radius": r.radius, "empty": true }),
                        })
                        .collect();
                    json!({ "t0": e.value.approx_trimmed(digits), "rows": rows, "trend": trend_json(&s.trend) })
                })
                .collect();
            Ok(json!({ "mode": "auto", "note": EVIDENCE, "thresholds": thresholds_json(), "searches": searches }))
        }
        DiagnosticsMode::Curves { curves, .. } => {
            let map = NumericMap::new(&report.f, &report.g);
            let mut out = Vec::new();
            for spec in curves {
                let curve = WitnessCurve::sampled(spec.x.clone(), spec.y.clone(), spec.s_min, spec.s_max, spec.samples);
                let (t0, origin) = match spec.t0 {
                    Some(t0) => (t0, "given"),
                    None => (default_t0(report, &map, &curve), "nearest value of B to F at the last sample"),
                };
                let entry = match diagnose_curve(&report.f, &report.g, t0, &curve) {
                    Ok(d) => json!({
                        "line": spec.line,
                        "curve": spec.source,
                        "t0": c_json(t0),
                        "t0_origin": origin,
                        "escapes": d.escapes,
                        "skipped_samples": d.skipped,
                        "rows": d.rows.iter().map(row_json).collect::<Vec<_>>(),
                        "trends": d.trends.iter().map(trend_json).collect::<Vec<_>>(),
                    }),
                    Err(e) => json!({ "line": spec.line, "curve": spec.source, "error": e.to_string() }),
                };
                out.push(entry);
            }
            Ok(json!({ "mode": "curves", "note": EVIDENCE, "thresholds": thresholds_json(), "curves": out }))
        }
    }
}

/// `F` at the last usable sample, snapped to the nearest value of `B`.
fn default_t0(report: &BifurcationReport, map: &NumericMap, curve: &WitnessCurve) -> Complex64 {
    let last = curve.samples.iter().rev().find_map(|&s| {
        let (x, y) = curve.at(s);
        map.evaluate(x, y).map(|e| e.value)
    });
    let Some(v) = last else { return Complex64::default() };
    report
        .b
        .iter()
        .map(|e| e.value.to_c64())
        .min_by(|a, b| (a - v).norm().total_cmp(&(b - v).norm()))
        .unwrap_or(v)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    match v {
        Value::Array(a) if a.iter().all(|e| scalar(e).is_some()) => {
            Some(format!("[{}]", a.iter().map(|e| scalar(e).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write_map(out: &mut String, m: &Map<String, Value>, indent: usize) {
    let pad = "  ".repeat(indent);
    for (k, v) in m {
        match inline(v) {
            Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
            None => {
                out.push_str(&format!("{pad}{k}:\n"));
                write_value(out, v, indent + 1);
            }
        }
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => write_map(out, m, indent),
        Value::Array(a) if a.is_empty() => out.push_str(&format!("{pad}(none)\n")),
        Value::Array(a) => {
            for (i, e) in a.iter().enumerate() {
                match inline(e) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}- [{}]\n", i + 1));
                        write_value(out, e, indent + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Indented plain-text rendering of a report tree.
pub fn render_text(tree: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, tree, 0);
    out
}
