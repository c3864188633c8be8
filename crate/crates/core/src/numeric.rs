//! Floating-point evidence for the behaviour of `grad F` along sequences
//! escaping to infinity. Nothing here is certified.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polyalg::{MultiPoly, Var, NVARS};

/// Slope below which a quantity is reported as tending to zero.
pub const SLOPE_TO_ZERO: f64 = -0.2;
/// Slope above which a quantity may be reported as bounded away from zero.
pub const SLOPE_BOUNDED: f64 = -0.05;
/// Smallest final value accepted as bounded away from zero.
pub const BOUNDED_FLOOR: f64 = 1e-3;
/// Angular samples per radius in the witness search.
pub const SEARCH_ANGLES: usize = 64;

/// Polynomial compiled to `f64` terms.
#[derive(Clone, Debug)]
pub struct Compiled {
    terms: Vec<(f64, [u32; NVARS])>,
}

impl Compiled {
    pub fn new(p: &MultiPoly) -> Self {
        Compiled { terms: p.terms().map(|(m, c)| (c.to_f64().unwrap_or(f64::NAN), *m)).collect() }
    }

    /// Value and the sum of absolute term values (for error estimates).
    pub fn eval(&self, at: &[Complex64; NVARS]) -> (Complex64, f64) {
        let mut v = Complex64::zero();
        let mut mag = 0.0;
        for (c, m) in &self.terms {
            let mut term = Complex64::new(*c, 0.0);
            for (k, e) in m.iter().enumerate() {
                if *e > 0 {
                    term *= at[k].powu(*e);
                }
            }
            mag += term.norm();
            v += term;
        }
        (v, mag)
    }
}

fn point(x: Complex64, y: Complex64) -> [Complex64; NVARS] {
    let mut a = [Complex64::zero(); NVARS];
    a[Var::X.index()] = x;
    a[Var::Y.index()] = y;
    a
}

/// `F = f / g` with its partial derivatives, ready for numeric evaluation.
#[derive(Clone, Debug)]
pub struct NumericMap {
    f: Compiled,
    g: Compiled,
    fx: Compiled,
    fy: Compiled,
    gx: Compiled,
    gy: Compiled,
    /// Coefficients in `x` of `f` and `g`, as polynomials in `y`.
    f_in_x: Vec<Compiled>,
    g_in_x: Vec<Compiled>,
    /// Coefficients in `x` of `f_x g - f g_x`.
    polar_in_x: Vec<Compiled>,
}

/// Value and derivatives of `F` at one point.
#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub value: Complex64,
    pub grad: [Complex64; 2],
    /// Estimated relative rounding error of the gradient.
    pub grad_rel_error: f64,
}

impl NumericMap {
    pub fn new(f: &MultiPoly, g: &MultiPoly) -> Self {
        let coeffs = |p: &MultiPoly| p.coefficients_in(Var::X).iter().map(Compiled::new).collect();
        let polar = &(&f.derivative(Var::X) * g) - &(f * &g.derivative(Var::X));
        NumericMap {
            f: Compiled::new(f),
            g: Compiled::new(g),
            fx: Compiled::new(&f.derivative(Var::X)),
            fy: Compiled::new(&f.derivative(Var::Y)),
            gx: Compiled::new(&g.derivative(Var::X)),
            gy: Compiled::new(&g.derivative(Var::Y)),
            f_in_x: coeffs(f),
            g_in_x: coeffs(g),
            polar_in_x: coeffs(&polar),
        }
    }

    /// `None` on `g = 0`.
    pub fn evaluate(&self, x: Complex64, y: Complex64) -> Option<Evaluation> {
        let at = point(x, y);
        let (f, fm) = self.f.eval(&at);
        let (g, gm) = self.g.eval(&at);
        if g.norm() == 0.0 || !g.is_finite() {
            return None;
        }
        let (fx, fxm) = self.fx.eval(&at);
        let (fy, fym) = self.fy.eval(&at);
        let (gx, gxm) = self.gx.eval(&at);
        let (gy, gym) = self.gy.eval(&at);
        let g2 = g * g;
        let nx = g * fx - f * gx;
        let ny = g * fy - f * gy;
        let bound_x = gm * fxm + fm * gxm;
        let bound_y = gm * fym + fm * gym;
        let num = (nx.norm_sqr() + ny.norm_sqr()).sqrt();
        let grad_rel_error = if num > 0.0 { 4.0 * f64::EPSILON * (bound_x + bound_y) / num } else { f64::INFINITY };
        Some(Evaluation { value: f / g, grad: [nx / g2, ny / g2], grad_rel_error })
    }

    fn coefficients(c: &[Compiled], y: Complex64) -> Vec<Complex64> {
        let at = point(Complex64::zero(), y);
        c.iter().map(|p| p.eval(&at).0).collect()
    }

    /// Roots in `x` of `f(x, y) - t0 g(x, y)`.
    pub fn fiber_roots(&self, y: Complex64, t0: Complex64) -> Vec<Complex64> {
        let fc = Self::coefficients(&self.f_in_x, y);
        let gc = Self::coefficients(&self.g_in_x, y);
        let n = fc.len().max(gc.len());
        let c: Vec<Complex64> =
            (0..n).map(|k| fc.get(k).copied().unwrap_or_default() - t0 * gc.get(k).copied().unwrap_or_default()).collect();
        complex_roots(&c)
    }

    /// Roots in `x` of `f_x g - f g_x`, where `F` restricted to the
    /// horizontal line through `y` is critical.
    pub fn polar_roots(&self, y: Complex64) -> Vec<Complex64> {
        complex_roots(&Self::coefficients(&self.polar_in_x, y))
    }
}

/// Roots of `sum c_k x^k` by Aberth iteration from a fixed start.
pub fn complex_roots(c: &[Complex64]) -> Vec<Complex64> {
    let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut n = c.len() - 1;
    while n > 0 && c[n].norm() <= 1e-14 * scale {
        n -= 1;
    }
    if n == 0 {
        return Vec::new();
    }
    let a: Vec<Complex64> = c[..=n].iter().map(|z| z / c[n]).collect();
    let bound = (1..=n).map(|k| a[n - k].norm().powf(1.0 / k as f64)).fold(0.0, f64::max) * 2.0;
    let r = bound.max(1e-6) * 0.5;
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64 + 0.4)).collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for ak in a.iter().rev() {
            dp = dp * x + p;
            p = p * x + ak;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn norm2(a: Complex64, b: Complex64) -> f64 {
    (a.norm_sqr() + b.norm_sqr()).sqrt()
}

/// Distance from `grad F` to the complex line through `p`, relative to
/// `|grad F|`, using the Hermitian product. Zero means `grad F = lambda p`.
pub fn alignment(grad: [Complex64; 2], p: [Complex64; 2]) -> f64 {
    let gv = [grad[0].conj(), grad[1].conj()];
    let gn = norm2(gv[0], gv[1]);
    let pp = p[0].norm_sqr() + p[1].norm_sqr();
    if gn == 0.0 || pp == 0.0 {
        return 0.0;
    }
    let proj = (gv[0] * p[0].conj() + gv[1] * p[1].conj()) / pp;
    norm2(gv[0] - proj * p[0], gv[1] - proj * p[1]) / gn
}

#[derive(Clone, Debug)]
pub struct DiagnosticRow {
    pub s: f64,
    pub x: Complex64,
    pub y: Complex64,
    pub norm_p: f64,
    pub value: Complex64,
    pub distance: f64,
    pub grad_norm: f64,
    pub malgrange: f64,
    pub alignment: f64,
    pub grad_rel_error: f64,
}

pub fn diagnostic_row(map: &NumericMap, t0: Complex64, s: f64, x: Complex64, y: Complex64) -> Option<DiagnosticRow> {
    let e = map.evaluate(x, y)?;
    let norm_p = norm2(x, y);
    let grad_norm = norm2(e.grad[0], e.grad[1]);
    Some(DiagnosticRow {
        s,
        x,
        y,
        norm_p,
        value: e.value,
        distance: (e.value - t0).norm(),
        grad_norm,
        malgrange: norm_p * grad_norm,
        alignment: alignment(e.grad, [x, y]),
        grad_rel_error: e.grad_rel_error,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ToZero,
    BoundedAway,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::ToZero => "→0",
            Verdict::BoundedAway => "bounded away",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trend {
    pub quantity: &'static str,
    pub slope: f64,
    pub last: f64,
    pub verdict: Verdict,
}

/// Least-squares slope of `log q` against `log |p|` over the last decade of
/// `|p|`, classified with the module thresholds.
pub fn trend(quantity: &'static str, samples: &[(f64, f64)]) -> Trend {
    let mut pts: Vec<(f64, f64)> = samples.iter().copied().filter(|(r, q)| r.is_finite() && q.is_finite() && *r > 0.0).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let Some(&(rmax, last)) = pts.last() else {
        return Trend { quantity, slope: f64::NAN, last: f64::NAN, verdict: Verdict::Inconclusive };
    };
    let mut window: Vec<(f64, f64)> = pts.iter().copied().filter(|(r, _)| *r >= rmax / 10.0 * (1.0 - 1e-9)).collect();
    if window.len() < 2 && pts.len() >= 2 {
        window = pts[pts.len() - 2..].to_vec();
    }
    if window.iter().all(|(_, q)| *q == 0.0) {
        return Trend { quantity, slope: f64::NEG_INFINITY, last, verdict: Verdict::ToZero };
    }
    let logs: Vec<(f64, f64)> = window.iter().filter(|(_, q)| *q > 0.0).map(|(r, q)| (r.ln(), q.ln())).collect();
    if logs.len() < 2 {
        return Trend { quantity, slope: f64::NAN, last, verdict: Verdict::Inconclusive };
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { f64::NAN };
    let verdict = if slope < SLOPE_TO_ZERO {
        Verdict::ToZero
    } else if slope > SLOPE_BOUNDED && last > BOUNDED_FLOOR {
        Verdict::BoundedAway
    } else {
        Verdict::Inconclusive
    };
    Trend { quantity, slope, last, verdict }
}

/// A curve `s -> (x(s), y(s))` given by polynomials in `s` (`Var::T`) with
/// the imaginary unit as `Var::U`.
#[derive(Clone, Debug)]
pub struct WitnessCurve {
    pub x: MultiPoly,
    pub y: MultiPoly,
    pub samples: Vec<f64>,
}

impl WitnessCurve {
    /// Samples spaced geometrically when `s_min > 0`, linearly otherwise.
    pub fn sampled(x: MultiPoly, y: MultiPoly, s_min: f64, s_max: f64, n: usize) -> Self {
        let samples = if n <= 1 {
            vec![s_min]
        } else if s_min > 0.0 && s_max > 0.0 {
            let (a, b) = (s_min.ln(), s_max.ln());
            let mut v: Vec<f64> = (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect();
            v[0] = s_min;
            v[n - 1] = s_max;
            v
        } else {
            (0..n).map(|k| s_min + (s_max - s_min) * k as f64 / (n - 1) as f64).collect()
        };
        WitnessCurve { x, y, samples }
    }

    pub fn at(&self, s: f64) -> (Complex64, Complex64) {
        let mut a = [Complex64::zero(); NVARS];
        a[Var::T.index()] = Complex64::new(s, 0.0);
        a[Var::U.index()] = Complex64::i();
        (Compiled::new(&self.x).eval(&a).0, Compiled::new(&self.y).eval(&a).0)
    }
}

#[derive(Clone, Debug)]
pub struct CurveDiagnostics {
    pub rows: Vec<DiagnosticRow>,
    /// Samples dropped because `g` vanished there.
    pub skipped: Vec<f64>,
    /// False when `|p|` fails to grow along the samples.
    pub escapes: bool,
    pub trends: Vec<Trend>,
}

fn trends_of(rows: &[DiagnosticRow]) -> Vec<Trend> {
    let col = |f: fn(&DiagnosticRow) -> f64| rows.iter().map(|r| (r.norm_p, f(r))).collect::<Vec<_>>();
    vec![
        trend("|F - t0|", &col(|r| r.distance)),
        trend("|grad F|", &col(|r| r.grad_norm)),
        trend("|p| |grad F|", &col(|r| r.malgrange)),
        trend("alignment", &col(|r| r.alignment)),
    ]
}

/// Tabulates the limit quantities along a curve.
pub fn diagnose_curve(f: &MultiPoly, g: &MultiPoly, t0: Complex64, curve: &WitnessCurve) -> Result<CurveDiagnostics> {
    let map = NumericMap::new(f, g);
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &s in &curve.samples {
        let (x, y) = curve.at(s);
        match diagnostic_row(&map, t0, s, x, y) {
            Some(r) => rows.push(r),
            None => skipped.push(s),
        }
    }
    if rows.is_empty() {
        return Err(Error::CurveInPolarLocus);
    }
    let escapes = rows.windows(2).all(|w| w[1].norm_p > w[0].norm_p);
    let trends = trends_of(&rows);
    Ok(CurveDiagnostics { rows, skipped, escapes, trends })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSource {
    Fiber,
    Polar,
}

impl WitnessSource {
    pub fn label(self) -> &'static str {
        match self {
            WitnessSource::Fiber => "fiber",
            WitnessSource::Polar => "polar",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RadiusRow {
    pub radius: f64,
    pub best: Option<(DiagnosticRow, WitnessSource)>,
}

impl RadiusRow {
    pub fn is_empty(&self) -> bool {
        self.best.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct MalgrangeSearch {
    pub t0: Complex64,
    pub rows: Vec<RadiusRow>,
    pub trend: Trend,
}

/// Smallest `|p| |grad F(p)|` near the fibre `F = t0` on each circle
/// `|y| = R`. Candidates are exact fibre points and points of the polar curve
/// `f_x g - f g_x = 0` with `|F - t0| <= R^(-1/2)`.
pub fn search_malgrange_witness(f: &MultiPoly, g: &MultiPoly, t0: Complex64, radii: &[f64]) -> MalgrangeSearch {
    let map = NumericMap::new(f, g);
    let mut rows = Vec::new();
    for &radius in radii {
        let mut best: Option<(DiagnosticRow, WitnessSource)> = None;
        let tol = radius.powf(-0.5);
        for k in 0..SEARCH_ANGLES {
            let y = Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / SEARCH_ANGLES as f64);
            let fiber = map.fiber_roots(y, t0).into_iter().map(|x| (x, WitnessSource::Fiber));
            let polar = map.polar_roots(y).into_iter().map(|x| (x, WitnessSource::Polar));
            for (x, src) in fiber.chain(polar) {
                let Some(row) = diagnostic_row(&map, t0, radius, x, y) else { continue };
                if !row.malgrange.is_finite() || row.norm_p < radius {
                    continue;
                }
                if src == WitnessSource::Polar && row.distance > tol {
                    continue;
                }
                if best.as_ref().is_none_or(|(b, _)| row.malgrange < b.malgrange) {
                    best = Some((row, src));
                }
            }
        }
        rows.push(RadiusRow { radius, best });
    }
    let samples: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.best.as_ref().map(|(b, _)| (b.norm_p, b.malgrange))).collect();
    let trend = trend("min |p| |grad F|", &samples);
    MalgrangeSearch { t0, rows, trend }
}

/// `n` radii from `a` to `b`, geometrically spaced.
pub fn geometric_radii(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    let mut v: Vec<f64> = (0..n).map(|k| (a.ln() + (b.ln() - a.ln()) * k as f64 / (n - 1) as f64).exp()).collect();
    v[0] = a;
    v[n - 1] = b;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{c, t, u, x, y};

    fn cubic_over_hyperbola() -> (MultiPoly, MultiPoly) {
        (x().pow(3) + c(1), x() * y() + c(1))
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let (f, g) = cubic_over_hyperbola();
        let map = NumericMap::new(&f, &g);
        let h = 1e-6;
        for &(px, py) in &[(0.3, 0.7), (2.0, -1.5), (10.0, 3.0), (-200.0, 40.0)] {
            let (x0, y0) = (Complex64::new(px, 0.1), Complex64::new(py, -0.2));
            let e = map.evaluate(x0, y0).unwrap();
            let fd = |dx: Complex64, dy: Complex64| {
                (map.evaluate(x0 + dx, y0 + dy).unwrap().value - map.evaluate(x0 - dx, y0 - dy).unwrap().value) / (2.0 * h)
            };
            let gx = fd(Complex64::new(h, 0.0), Complex64::zero());
            let gy = fd(Complex64::zero(), Complex64::new(h, 0.0));
            assert!((gx - e.grad[0]).norm() <= 1e-6 * e.grad[0].norm().max(1e-12) + 1e-9);
            assert!((gy - e.grad[1]).norm() <= 1e-6 * e.grad[1].norm().max(1e-12) + 1e-9);
        }
    }

    #[test]
    fn alignment_on_gradient_ray() {
        let f = x().pow(2) + y().pow(2);
        let map = NumericMap::new(&f, &c(1));
        for s in [1.0, 10.0, 1e3] {
            let p = [Complex64::new(s, 0.0), Complex64::new(2.0 * s, 0.0)];
            let e = map.evaluate(p[0], p[1]).unwrap();
            assert!(alignment(e.grad, p) < 1e-9);
        }
        let e = map.evaluate(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!(alignment(e.grad, [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]) > 0.9);
    }

    #[test]
    fn equal_degree_curve() {
        let f = x() * y() + c(1);
        let g = x().pow(2) + c(1);
        let curve = WitnessCurve { x: t(), y: u() * t(), samples: vec![10.0, 100.0, 1000.0, 10000.0] };
        let d = diagnose_curve(&f, &g, Complex64::i(), &curve).unwrap();
        assert!(d.escapes);
        assert_eq!(d.trends[0].verdict, Verdict::ToZero);
        assert_eq!(d.trends[1].verdict, Verdict::ToZero);
    }

    #[test]
    fn cubic_parabola() {
        let (f, g) = cubic_over_hyperbola();
        let curve = WitnessCurve::sampled(t(), t().pow(2), 10.0, 10000.0, 4);
        let d = diagnose_curve(&f, &g, Complex64::new(1.0, 0.0), &curve).unwrap();
        assert_eq!(d.trends[0].verdict, Verdict::ToZero);
        assert_eq!(d.trends[1].verdict, Verdict::ToZero);
    }

    #[test]
    fn coordinate_function_is_bounded() {
        let curve = WitnessCurve::sampled(t(), t(), 10.0, 10000.0, 4);
        let d = diagnose_curve(&x(), &c(1), Complex64::zero(), &curve).unwrap();
        assert_eq!(d.trends[1].verdict, Verdict::BoundedAway);
    }

    #[test]
    fn polar_locus_error() {
        let curve = WitnessCurve::sampled(c(0), t(), 1.0, 2.0, 3);
        assert_eq!(diagnose_curve(&c(1), &x(), Complex64::zero(), &curve).unwrap_err(), Error::CurveInPolarLocus);
    }

    #[test]
    fn malgrange_search_cubic() {
        let (f, g) = cubic_over_hyperbola();
        let radii = geometric_radii(10.0, 10000.0, 4);
        let s0 = search_malgrange_witness(&f, &g, Complex64::zero(), &radii);
        assert_eq!(s0.trend.verdict, Verdict::ToZero);
        let s2 = search_malgrange_witness(&f, &g, Complex64::new(2.0, 0.0), &radii);
        assert_eq!(s2.trend.verdict, Verdict::BoundedAway);
    }

    #[test]
    fn malgrange_search_x_plus_x2y() {
        let radii = geometric_radii(10.0, 10000.0, 4);
        let s = search_malgrange_witness(&(x() + x().pow(2) * y()), &c(1), Complex64::zero(), &radii);
        assert_eq!(s.trend.verdict, Verdict::ToZero);
    }

    #[test]
    fn trend_thresholds() {
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&r| (r, 1.0 / r)).collect();
        assert_eq!(trend("q", &pts).verdict, Verdict::ToZero);
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&r| (r, 2.0)).collect();
        assert_eq!(trend("q", &pts).verdict, Verdict::BoundedAway);
        let pts: Vec<(f64, f64)> = [10.0, 100.0].iter().map(|&r| (r, 0.0)).collect();
        assert_eq!(trend("q", &pts).verdict, Verdict::ToZero);
        let pts: Vec<(f64, f64)> = [10.0, 100.0].iter().map(|&r| (r, 1e-5)).collect();
        assert_eq!(trend("q", &pts).verdict, Verdict::Inconclusive);
    }
}
