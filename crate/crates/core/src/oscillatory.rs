//! Oscillatory integrals along the curve `x1 -> (x1, x1^m, x1^n)`:
//! `I(xi1, xi, eta) = int f(x1, eta) exp(-i (xi1 x1 + xi2 x1^m + xi3 x1^n)) dx1`
//! with `f(x1, eta) = x1^alpha a(x1) beta(eta)`, and scans of its decay.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::{BetaProfile, SeparableAtom};
use crate::error::{Error, Result};
use crate::geometry::{dilate2, dilate3, sphere_point, triple_norm, AnisotropyParams, Vec2, Vec3};
use crate::quad::{gl16, log_space};
use crate::report::{fit_lower_half, fit_upper_half, BoundReport, Comparison};

/// Results below this magnitude are not used to judge decay rates.
pub const QUADRATURE_FLOOR: f64 = 1e-12;

const BASE_SEGMENTS: usize = 32;
const MAX_DEPTH: u32 = 14;
/// Above this many panels the stationary-phase expansion is used instead.
const PANEL_BUDGET: usize = 4_000_000;
/// Plans above this size try the asymptotic estimate first when it is allowed.
const EARLY_ASYMPTOTIC: usize = 2_000;

/// `psi(x) = c1 x + cm x^m + cn x^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePhase {
    pub c1: f64,
    pub cm: f64,
    pub cn: f64,
    pub m: u32,
    pub n: u32,
}

fn falling(p: u32, k: u32) -> f64 {
    (0..k).map(|i| (p - i) as f64).product()
}

impl CurvePhase {
    pub fn new(p: &AnisotropyParams, xi: Vec3) -> Self {
        CurvePhase { c1: xi.x1, cm: xi.x.x, cn: xi.x.y, m: p.m(), n: p.n() }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.c1 * x + self.cm * x.powi(self.m as i32) + self.cn * x.powi(self.n as i32)
    }

    /// `psi^(k)(x)`.
    pub fn derivative(&self, k: u32, x: f64) -> f64 {
        let term = |c: f64, p: u32| {
            if k > p || c == 0.0 {
                0.0
            } else {
                c * falling(p, k) * x.powi((p - k) as i32)
            }
        };
        match k {
            0 => self.value(x),
            _ => term(self.c1, 1) + term(self.cm, self.m) + term(self.cn, self.n),
        }
    }

    /// Upper bound for `|psi'|` on `|x| <= r`.
    pub fn slope_bound(&self, r: f64) -> f64 {
        self.c1.abs()
            + self.m as f64 * self.cm.abs() * r.powi(self.m as i32 - 1)
            + self.n as f64 * self.cn.abs() * r.powi(self.n as i32 - 1)
    }

    /// Zeros of `psi'` in `[a, b]`, by sign changes on a fine grid and bisection.
    pub fn stationary_points(&self, a: f64, b: f64) -> Vec<f64> {
        let k = 4096;
        let d1 = |x: f64| self.derivative(1, x);
        let mut out = Vec::new();
        let mut x0 = a;
        let mut f0 = d1(x0);
        for i in 1..=k {
            let x1 = a + (b - a) * i as f64 / k as f64;
            let f1 = d1(x1);
            if f0 == 0.0 {
                out.push(x0);
            } else if f0 * f1 < 0.0 {
                let (mut lo, mut hi, mut flo) = (x0, x1, f0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    let fm = d1(mid);
                    if fm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if fm * flo < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
            x0 = x1;
            f0 = f1;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OscMethod {
    Panels,
    StationaryPhase,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OscEstimate {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
    pub method: OscMethod,
}

impl OscEstimate {
    fn zero() -> Self {
        OscEstimate { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0, method: OscMethod::Panels }
    }
}

struct PanelSum {
    value: Complex64,
    error: f64,
    panels: usize,
    /// Error of panels that hit the depth limit.
    unresolved: f64,
}

fn gl_panel<G: Fn(f64) -> f64>(g: &G, psi: &CurvePhase, u: f64, v: f64) -> (Complex64, f64) {
    let (x, w) = gl16();
    let c = 0.5 * (u + v);
    let h = 0.5 * (v - u);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        let t = c + h * xi;
        let gv = g(t);
        if gv == 0.0 {
            continue;
        }
        let (s, co) = psi.value(t).sin_cos();
        acc += Complex64::new(co, -s) * (wi * gv);
        abs += wi * gv.abs();
    }
    (acc * h, abs * h)
}

fn adaptive_panel<G: Fn(f64) -> f64>(
    g: &G,
    psi: &CurvePhase,
    u: f64,
    v: f64,
    whole: Complex64,
    tol_density: f64,
    noise: f64,
    depth: u32,
    out: &mut PanelSum,
) {
    let mid = 0.5 * (u + v);
    let (l, la) = gl_panel(g, psi, u, mid);
    let (r, ra) = gl_panel(g, psi, mid, v);
    let both = l + r;
    let diff = (both - whole).norm();
    let allowed = (tol_density * (v - u)).max(noise * (la + ra));
    if diff <= allowed || depth == 0 {
        out.value += both;
        out.error += diff;
        out.panels += 2;
        if diff > allowed {
            out.unresolved += diff;
        }
        return;
    }
    adaptive_panel(g, psi, u, mid, l, tol_density, noise, depth - 1, out);
    adaptive_panel(g, psi, mid, v, r, tol_density, noise, depth - 1, out);
}

/// Bounds on `sup |g|`, `sup |g'|`, `sup |g''|` used by the stationary-phase
/// error estimate.
#[derive(Debug, Clone, Copy)]
pub struct AmplitudeBounds(pub [f64; 3]);

/// `int g(x) exp(-i psi(x)) dx` over `intervals`, where `g` vanishes with all
/// derivatives at the interval ends.
///
/// Each interval is cut into panels over which `psi` varies by at most
/// `pi / 2`; each panel is refined until the Gauss-Legendre estimate agrees
/// with its two halves within the panel's share of `tol`. When the panel count
/// would exceed the budget, the leading stationary-phase term is returned if
/// its error estimate meets `tol`.
pub fn oscillatory_integral<G>(
    g: G,
    psi: &CurvePhase,
    intervals: &[(f64, f64)],
    bounds: AmplitudeBounds,
    tol: f64,
) -> Result<OscEstimate>
where
    G: Fn(f64) -> f64,
{
    integral_impl(g, psi, intervals, bounds, tol, true)
}

fn integral_impl<G>(
    g: G,
    psi: &CurvePhase,
    intervals: &[(f64, f64)],
    bounds: AmplitudeBounds,
    tol: f64,
    strict: bool,
) -> Result<OscEstimate>
where
    G: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let total_len: f64 = intervals.iter().map(|(a, b)| b - a).sum();
    let mut plan: Vec<(f64, f64, usize)> = Vec::new();
    let mut planned = 0usize;
    for &(a, b) in intervals {
        let h = (b - a) / BASE_SEGMENTS as f64;
        for s in 0..BASE_SEGMENTS {
            let (u, v) = (a + h * s as f64, a + h * (s + 1) as f64);
            let slope = psi.slope_bound(u.abs().max(v.abs()));
            let k = ((slope * h / FRAC_PI_2).ceil() as usize).max(1);
            planned = planned.saturating_add(k);
            plan.push((u, v, k));
        }
    }
    if !strict && planned > EARLY_ASYMPTOTIC {
        let sp = stationary_phase(&g, psi, intervals, bounds);
        if sp.error <= tol {
            return Ok(sp);
        }
    }
    if planned > PANEL_BUDGET {
        let sp = stationary_phase(&g, psi, intervals, bounds);
        if sp.error <= tol || !strict {
            return Ok(sp);
        }
        return Err(Error::ToleranceNotMet { requested: tol, achieved: sp.error });
    }
    let tol_density = tol / total_len;
    // relative rounding of the summed panel values, dominated by the phase
    // when |psi| is large
    let reach = intervals.iter().fold(0.0f64, |r, &(a, b)| r.max(a.abs()).max(b.abs()));
    let psi_max = psi.c1.abs() * reach + psi.cm.abs() * reach.powi(psi.m as i32) + psi.cn.abs() * reach.powi(psi.n as i32);
    let noise = 64.0 * f64::EPSILON * (1.0 + psi_max);
    let mut out = PanelSum { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0, unresolved: 0.0 };
    for (u, v, k) in plan {
        let h = (v - u) / k as f64;
        for i in 0..k {
            let (p0, p1) = (u + h * i as f64, u + h * (i + 1) as f64);
            let (whole, _) = gl_panel(&g, psi, p0, p1);
            adaptive_panel(&g, psi, p0, p1, whole, tol_density, noise, MAX_DEPTH, &mut out);
        }
    }
    if out.unresolved > tol {
        return Err(Error::ToleranceNotMet { requested: tol, achieved: out.unresolved });
    }
    Ok(OscEstimate { value: out.value, error: out.error, panels: out.panels, method: OscMethod::Panels })
}

/// Leading stationary-phase term summed over the zeros of `psi'`. On an
/// interval without zeros the integral is bounded by two integrations by
/// parts, `|int g e^{-i psi}| <= int |(d/dx (1/psi') )^2 g|`, and that bound
/// becomes the error.
fn stationary_phase<G: Fn(f64) -> f64>(
    g: &G,
    psi: &CurvePhase,
    intervals: &[(f64, f64)],
    bounds: AmplitudeBounds,
) -> OscEstimate {
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let [g0, g1, g2] = bounds.0;
    for &(a, b) in intervals {
        let zeros = psi.stationary_points(a, b);
        if zeros.is_empty() {
            // the integration-by-parts integrand bounded cell by cell; the
            // derivative bounds on a cell come from its ends plus one Taylor step
            let k = 2048;
            let h = (b - a) / k as f64;
            let d = |order: u32, x: f64| psi.derivative(order, x).abs();
            for i in 0..k {
                let (u, v) = (a + h * i as f64, a + h * (i + 1) as f64);
                let d3 = d(3, u).max(d(3, v)) + 0.5 * h * d(4, u).max(d(4, v));
                let d2 = d(2, u).max(d(2, v)) + 0.5 * h * d3;
                let d1 = d(1, u).min(d(1, v)) - 0.5 * h * d2;
                if !(d1 > 0.0) {
                    error = f64::INFINITY;
                    break;
                }
                let r = d2 / d1;
                error += h * (g2 + 3.0 * g1 * r + g0 * (3.0 * r * r + d3 / d1)) / (d1 * d1);
            }
            continue;
        }
        for xs in zeros {
            let d2 = psi.derivative(2, xs);
            if d2 == 0.0 {
                error = f64::INFINITY;
                continue;
            }
            let d3 = psi.derivative(3, xs).abs() / d2.abs();
            let d4 = psi.derivative(4, xs).abs() / d2.abs();
            let gs = g(xs);
            let phase = psi.value(xs) + d2.signum() * FRAC_PI_4;
            value += Complex64::from_polar(gs * (2.0 * PI / d2.abs()).sqrt(), -phase);
            let k = g2 + g1 * d3 + g0 * (d3 * d3 + d4);
            error += (2.0 * PI).sqrt() * k / d2.abs().powf(1.5);
        }
    }
    OscEstimate { value, error, panels: 0, method: OscMethod::StationaryPhase }
}

/// `A(zeta) = int x1^alpha a(x1) exp(-i (zeta1 x1 + zeta2 x1^m + zeta3 x1^n)) dx1`.
pub fn atom_transform(atom: &SeparableAtom, alpha: u32, zeta: Vec3, tol: f64) -> Result<OscEstimate> {
    atom_transform_impl(atom, alpha, zeta, tol, true)
}

/// As [`atom_transform`], but beyond the panel budget the stationary-phase
/// estimate is returned with its error bound whatever its size.
pub fn atom_transform_bounded(atom: &SeparableAtom, alpha: u32, zeta: Vec3, tol: f64) -> Result<OscEstimate> {
    atom_transform_impl(atom, alpha, zeta, tol, false)
}

fn atom_transform_impl(atom: &SeparableAtom, alpha: u32, zeta: Vec3, tol: f64, strict: bool) -> Result<OscEstimate> {
    let psi = CurvePhase::new(atom.params(), zeta);
    let sup = atom.a_derivative_sup();
    let w = 4f64.powi(alpha as i32);
    let al = alpha as f64;
    // bounds for x^alpha a on 1/2 <= |x| <= 4 by the product rule
    let bounds = AmplitudeBounds([
        w * sup[0],
        w * (sup[1] + 2.0 * al * sup[0]),
        w * (sup[2] + 4.0 * al * sup[1] + 4.0 * al * al * sup[0]),
    ]);
    integral_impl(|x| x.powi(alpha as i32) * atom.a(x), &psi, &atom.x1_support(), bounds, tol, strict)
}

/// Arguments of `I`.
#[derive(Debug, Clone, Copy)]
pub struct OscQuery<'a> {
    pub atom: &'a SeparableAtom,
    pub alpha: u32,
    pub xi: Vec3,
    pub eta: Vec2,
}

/// `I(xi1, xi, eta) = beta(eta) A(xi1, xi)`.
pub fn osc_integral(q: &OscQuery<'_>, tol: f64) -> Result<OscEstimate> {
    if q.alpha > q.atom.params().n() {
        return Err(Error::Domain(format!("alpha = {} exceeds n", q.alpha)));
    }
    let b = q.atom.beta(q.eta);
    if b == 0.0 {
        return Ok(OscEstimate::zero());
    }
    let mut e = atom_transform(q.atom, q.alpha, q.xi, tol / b.abs())?;
    e.value *= b;
    e.error *= b.abs();
    Ok(e)
}

/// Geometry of the phase `Phi(x1) = omega . (x1, gamma(x1))` for a frequency
/// `xi = lambda o omega`, `|||omega||| = 1`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhaseInfo {
    pub lambda: f64,
    pub omega: Vec3,
    /// `min` over the support of `max_{1<=k<=n} |Phi^(k)|`.
    pub finite_type_floor: f64,
    /// `min` over the support of `|Phi'|`.
    pub min_first_derivative: f64,
    pub stationary: bool,
    /// Whether one of the cone conditions `|xi_i| > C (sum of the others)` holds.
    pub cone: bool,
    pub cone_constant: f64,
}

/// Smallest `C` such that `|xi_i| > C (|xi_j| + |xi_k|)` rules out stationary
/// points on `1/2 <= |x1| <= 4`, for each `i`, found by sampling stationary
/// configurations; the returned value is twice the largest of the three.
pub fn cone_constant(p: &AnisotropyParams) -> f64 {
    let (m, n) = (p.m() as f64, p.n() as f64);
    let (mi, ni) = (p.m() as i32, p.n() as i32);
    let xs: Vec<f64> = (0..=400).map(|i| 0.5 + 3.5 * i as f64 / 400.0).collect();
    let mut sup = [0.0f64; 3];
    for &x in &xs {
        for sx in [1.0, -1.0] {
            let x = sx * x;
            let (dm, dn) = (m * x.powi(mi - 1), n * x.powi(ni - 1));
            for i in 0..=100 {
                let t = i as f64 / 100.0;
                for (sa, sb) in [(1.0, 1.0), (1.0, -1.0)] {
                    let (a, b) = (sa * t, sb * (1.0 - t));
                    // Phi' = xi1 + dm xi2 + dn xi3 = 0, solve for one coordinate
                    sup[0] = sup[0].max((dm * a + dn * b).abs());
                    sup[1] = sup[1].max((a + dn * b).abs() / dm.abs());
                    sup[2] = sup[2].max((a + dm * b).abs() / dn.abs());
                }
            }
        }
    }
    2.0 * sup.iter().fold(0.0f64, |a, &b| a.max(b))
}

pub fn phase_analysis(p: &AnisotropyParams, xi: Vec3, support: &[(f64, f64)]) -> Result<PhaseInfo> {
    let lambda = triple_norm(p, xi);
    if lambda == 0.0 {
        return Err(Error::Domain("zero frequency has no phase direction".into()));
    }
    let omega = dilate3(p, 1.0 / lambda, xi)?;
    let phi = CurvePhase::new(p, omega);
    let n = p.n();
    let h = |x: f64| (1..=n).map(|k| phi.derivative(k, x).abs()).fold(0.0, f64::max);
    let mut floor = f64::INFINITY;
    let mut min_d1 = f64::INFINITY;
    let mut stationary = false;
    for &(a, b) in support {
        let k = 2000;
        let mut best = (f64::INFINITY, a);
        for i in 0..=k {
            let x = a + (b - a) * i as f64 / k as f64;
            let v = h(x);
            if v < best.0 {
                best = (v, x);
            }
            min_d1 = min_d1.min(phi.derivative(1, x).abs());
        }
        // golden-section refinement around the best sample
        let step = (b - a) / k as f64;
        let (mut lo, mut hi) = ((best.1 - step).max(a), (best.1 + step).min(b));
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let c = hi - g * (hi - lo);
            let d = lo + g * (hi - lo);
            if h(c) < h(d) {
                hi = d;
            } else {
                lo = c;
            }
        }
        floor = floor.min(best.0.min(h(0.5 * (lo + hi))));
        stationary |= !phi.stationary_points(a, b).is_empty();
    }
    let c = cone_constant(p);
    let (a1, a2, a3) = (xi.x1.abs(), xi.x.x.abs(), xi.x.y.abs());
    let cone = a1 > c * (a2 + a3) || a2 > c * (a1 + a3) || a3 > c * (a1 + a2);
    Ok(PhaseInfo {
        lambda,
        omega,
        finite_type_floor: floor,
        min_first_derivative: min_d1,
        stationary,
        cone,
        cone_constant: c,
    })
}

/// Decay regime of `I` as a function of the frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Large frequencies in a direction with stationary points: `lambda^{-1/n}`.
    Vdc,
    /// `|||xi||| <= 1` with `int a = 0`: linear vanishing.
    Small,
    /// Large frequencies inside the non-stationary cone: faster than any power.
    Cone,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Vdc => "vdc",
            Regime::Small => "small",
            Regime::Cone => "cone",
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            Regime::Vdc => "oscillatory-decay:van-der-corput",
            Regime::Small => "oscillatory-decay:small-frequency",
            Regime::Cone => "oscillatory-decay:non-stationary-cone",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vdc" => Ok(Regime::Vdc),
            "small" => Ok(Regime::Small),
            "cone" => Ok(Regime::Cone),
            _ => Err(Error::Domain(format!("unknown regime {s:?}; expected vdc, small or cone"))),
        }
    }
}

/// A generic direction: `Phi'` has one simple zero near `x1 = 1.64`.
pub const GENERIC_DIRECTION: Vec3 = Vec3 { x1: -1.0, x: Vec2 { x: 0.1, y: 1.0 / 12.0 } };
/// For `(m, n) = (2, 3)`: `Phi' = (x1 - 2)^2 / 4`, a double zero at `x1 = 2`.
pub const DEGENERATE_DIRECTION_23: Vec3 = Vec3 { x1: 1.0, x: Vec2 { x: -0.5, y: 1.0 / 12.0 } };
pub const CONE_DIRECTION: Vec3 = Vec3 { x1: 1.0, x: Vec2 { x: 0.0, y: 0.0 } };

/// Frequencies `xi(lambda)` along a direction. The large-frequency regimes
/// scale linearly, `xi = lambda omega`; the small regime uses the
/// homogeneous dilation `xi = lambda o omega` so that `|||xi||| = lambda`.
#[derive(Debug, Clone, Serialize)]
pub struct DecayScan {
    pub regime: Regime,
    pub direction: Vec3,
    pub eta: Vec2,
    pub alpha: u32,
    pub grid: Vec<f64>,
    pub tol: f64,
}

impl DecayScan {
    pub fn standard(regime: Regime) -> Self {
        let (direction, grid) = match regime {
            Regime::Vdc => (GENERIC_DIRECTION, log_space(1e2, 1e5, 16)),
            Regime::Small => (GENERIC_DIRECTION, log_space(1e-4, 1e-1, 13)),
            Regime::Cone => (CONE_DIRECTION, log_space(2.0, 256.0, 15)),
        };
        DecayScan { regime, direction, eta: Vec2::new(1.0, 0.0), alpha: 0, grid, tol: 1e-15 }
    }

    pub fn frequency(&self, p: &AnisotropyParams, lambda: f64) -> Result<Vec3> {
        match self.regime {
            Regime::Small => dilate3(p, lambda, self.direction),
            _ => Ok(Vec3 { x1: lambda * self.direction.x1, x: Vec2::new(lambda * self.direction.x.x, lambda * self.direction.x.y) }),
        }
    }
}

/// Default atom for a regime: the small-frequency bound needs only `int a = 0`,
/// and with more vanishing moments `|I|` falls below the quadrature floor.
pub fn regime_atom(p: AnisotropyParams, regime: Regime) -> Result<SeparableAtom> {
    match regime {
        Regime::Small => SeparableAtom::new(p, 0, crate::dyadic::Sidedness::Positive, BetaProfile::Annular),
        _ => SeparableAtom::standard(p),
    }
}

/// Evaluates `|I|` on the scan grid and fits the decay exponent.
pub fn decay_scan(atom: &SeparableAtom, scan: &DecayScan) -> Result<BoundReport> {
    if scan.grid.len() < 4 {
        return Err(Error::GridTooShort { got: scan.grid.len(), need: 4 });
    }
    let p = *atom.params();
    let values: Vec<f64> = scan
        .grid
        .par_iter()
        .map(|&l| {
            let xi = scan.frequency(&p, l)?;
            let q = OscQuery { atom, alpha: scan.alpha, xi, eta: scan.eta };
            Ok(osc_integral(&q, scan.tol)?.value.norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    let n = p.n() as f64;
    let report = BoundReport::new(format!("oscdecay-{}", scan.regime.name()), scan.regime.anchor())
        .regime(scan.regime.name())
        .data(scan.grid.clone(), values.clone());
    let report = match scan.regime {
        Regime::Vdc => {
            let fit = fit_upper_half(&scan.grid, &values, QUADRATURE_FLOOR);
            report
                .exponents(fit, Some(-1.0 / n))
                .judge(fit.unwrap_or(f64::NAN), -1.0 / n, Comparison::AtMost, 0.05)
        }
        Regime::Small => {
            let fit = fit_lower_half(&scan.grid, &values, 0.0);
            report.exponents(fit, Some(1.0)).judge(fit.unwrap_or(f64::NAN), 1.0, Comparison::AtLeast, 0.05)
        }
        Regime::Cone => {
            let fit = fit_upper_half(&scan.grid, &values, QUADRATURE_FLOOR);
            let above = values.iter().filter(|&&v| v > QUADRATURE_FLOOR).count();
            let r = report
                .exponents(fit, Some(-3.0))
                .judge(fit.unwrap_or(f64::NAN), -3.0, Comparison::AtMost, 0.0)
                .note(format!("{above} of {} points above the floor", values.len()));
            if above < 4 {
                r.fail("fewer than 4 points above the quadrature floor")
            } else {
                r
            }
        }
    };
    Ok(report)
}

/// Checks `|I| <= C_N rho(eta)^{1/(2n)} (1 + rho(eta))^{-N}` for each `N` at a
/// fixed frequency, with `eta` along a fixed direction and `rho(eta)` on
/// `rho_grid`. A check passes when the ratio is finite and does not grow
/// toward either end of the grid.
pub fn eta_decay_scan(atom: &SeparableAtom, xi: Vec3, rho_grid: &[f64], ns: &[u32], tol: f64) -> Result<Vec<BoundReport>> {
    if rho_grid.len() < 4 {
        return Err(Error::GridTooShort { got: rho_grid.len(), need: 4 });
    }
    let p = *atom.params();
    let amp = atom_transform(atom, 0, xi, tol)?.value.norm();
    let dir = sphere_point(&p, 0.7).v;
    let abs_i: Vec<f64> = rho_grid
        .iter()
        .map(|&r| Ok(atom.beta(dilate2(&p, r, dir)?).abs() * amp))
        .collect::<Result<Vec<f64>>>()?;
    let e = 1.0 / (2.0 * p.n() as f64);
    let mut out = Vec::new();
    for &nn in ns {
        let ratios: Vec<f64> =
            rho_grid.iter().zip(&abs_i).map(|(&r, &v)| v / (r.powf(e) * (1.0 + r).powi(-(nn as i32)))).collect();
        let sup = ratios.iter().cloned().fold(0.0f64, f64::max);
        let k = (rho_grid.len() / 10).max(1);
        let edge = ratios[..k].iter().chain(&ratios[ratios.len() - k..]).cloned().fold(0.0f64, f64::max);
        let inner = ratios[k..ratios.len() - k].iter().cloned().fold(0.0f64, f64::max);
        let mut r = BoundReport::new(format!("oscdecay-eta-N{nn}"), "oscillatory-decay:eta")
            .regime(format!("eta-{:?}", atom.profile()).to_lowercase())
            .data(rho_grid.to_vec(), ratios.clone())
            .judge(sup, f64::INFINITY, Comparison::Finite, 0.0)
            .note(format!("edge max {edge:.3e}, interior max {inner:.3e}"));
        if edge > inner * (1.0 + 1e-9) && edge > 0.0 {
            r = r.fail("ratio grows toward the edge of the grid");
        }
        out.push(r);
    }
    Ok(out)
}

/// Empirical spread of `sup_lambda |||xi|||^{1/n} |A(xi)|` over random unit
/// directions, `xi = lambda omega`.
pub fn direction_uniformity(atom: &SeparableAtom, samples: usize, seed: u64, grid: &[f64], tol: f64) -> Result<BoundReport> {
    let p = *atom.params();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs: Vec<Vec3> = (0..samples)
        .map(|_| {
            let mut c = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let k = rng.gen_range(0..3);
            c[k] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            Vec3::new(c[0], c[1], c[2])
        })
        .collect();
    let n = p.n() as f64;
    let consts: Vec<f64> = dirs
        .par_iter()
        .map(|w| {
            let mut best = 0.0f64;
            for &l in grid {
                let xi = Vec3::new(l * w.x1, l * w.x.x, l * w.x.y);
                let a = atom_transform(atom, 0, xi, tol)?.value.norm();
                best = best.max(triple_norm(&p, xi).powf(1.0 / n) * a);
            }
            Ok(best)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max = consts.iter().cloned().fold(0.0f64, f64::max);
    let min = consts.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(BoundReport::new("oscdecay-direction-spread", "oscillatory-decay:uniform-in-direction")
        .regime("vdc")
        .data((0..samples).map(|i| i as f64).collect(), consts)
        .judge(max, f64::INFINITY, Comparison::Finite, 0.0)
        .note(format!("min {min:.3e}, max {max:.3e}, spread {:.3}", max / min)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Sidedness;

    fn p23() -> AnisotropyParams {
        AnisotropyParams::new(2, 3).unwrap()
    }

    #[test]
    fn gaussian_chirp_against_closed_form() {
        // int exp(-x^2) exp(-i (a x + b x^2)) = sqrt(pi/(1+ib)) exp(-a^2 / (4 (1+ib)))
        let p = p23();
        let (a, b) = (30.0, 7.0);
        let psi = CurvePhase::new(&p, Vec3::new(a, b, 0.0));
        let est = oscillatory_integral(|x| (-x * x).exp(), &psi, &[(-7.0, 7.0)], AmplitudeBounds([1.0; 3]), 1e-14).unwrap();
        let z = Complex64::new(1.0, b);
        let want = (Complex64::new(PI, 0.0) / z).sqrt() * (-(a * a) / (4.0 * z)).exp();
        assert!((est.value - want).norm() < 1e-13, "{} vs {want}", est.value);
    }

    #[test]
    fn mean_zero_atom_at_zero_frequency() {
        let atom = SeparableAtom::standard(p23()).unwrap();
        let v = atom_transform(&atom, 0, Vec3::new(0.0, 0.0, 0.0), 1e-15).unwrap().value;
        assert!(v.norm() < 1e-12);
        let q = OscQuery { atom: &atom, alpha: 0, xi: Vec3::new(3.0, 1.0, 2.0), eta: Vec2::new(0.1, 0.0) };
        assert_eq!(osc_integral(&q, 1e-12).unwrap().value.norm(), 0.0);
    }

    #[test]
    fn conjugation_symmetry() {
        let atom = SeparableAtom::new(p23(), 3, Sidedness::Symmetric, BetaProfile::Annular).unwrap();
        let xi = Vec3::new(4.0, -2.5, 1.3);
        let a = atom_transform(&atom, 1, xi, 1e-14).unwrap().value;
        let b = atom_transform(&atom, 1, Vec3::new(-4.0, 2.5, -1.3), 1e-14).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn stationary_phase_matches_panels() {
        let atom = SeparableAtom::standard(p23()).unwrap();
        let l = 2e5;
        let xi = Vec3::new(-l, 0.1 * l, l / 12.0);
        let psi = CurvePhase::new(atom.params(), xi);
        let sup = atom.a_derivative_sup();
        let sp = stationary_phase(&|x| atom.a(x), &psi, &[(0.5, 4.0)], AmplitudeBounds([sup[0], sup[1], sup[2]]));
        let full = atom_transform(&atom, 0, xi, 1e-12).unwrap();
        assert_eq!(full.method, OscMethod::Panels);
        assert!((sp.value - full.value).norm() <= sp.error, "{} {} {}", sp.value, full.value, sp.error);
    }

    #[test]
    fn non_stationary_bound_covers_value() {
        let atom = SeparableAtom::standard(p23()).unwrap();
        let xi = Vec3::new(0.0, 0.0, 2e4);
        let psi = CurvePhase::new(atom.params(), xi);
        let sup = atom.a_derivative_sup();
        let sp = stationary_phase(&|x| atom.a(x), &psi, &[(0.5, 4.0)], AmplitudeBounds([sup[0], sup[1], sup[2]]));
        let full = atom_transform(&atom, 0, xi, 1e-14).unwrap();
        assert_eq!(sp.value.norm(), 0.0);
        assert!(full.value.norm() <= sp.error && sp.error < 1e-3);
        // far beyond the panel budget only the bound is available
        let far = atom_transform(&atom, 0, Vec3::new(0.0, 0.0, 1e12), 1e-12).unwrap();
        assert_eq!(far.method, OscMethod::StationaryPhase);
        assert!(far.error < 1e-12);
    }

    #[test]
    fn phase_analysis_flags() {
        let p = p23();
        let s = [(0.5, 4.0)];
        let info = phase_analysis(&p, Vec3::new(1.0, 0.0, 0.0), &s).unwrap();
        assert!(info.cone && !info.stationary);
        let info = phase_analysis(&p, GENERIC_DIRECTION, &s).unwrap();
        assert!(info.stationary && !info.cone && info.finite_type_floor > 0.0);
        assert!(phase_analysis(&p, Vec3::new(0.0, 0.0, 0.0), &s).is_err());
        // homogeneity of the norm under the 3D dilation
        let xi = Vec3::new(0.3, -2.0, 5.0);
        let a = phase_analysis(&p, xi, &s).unwrap().lambda;
        let b = phase_analysis(&p, dilate3(&p, 7.0, xi).unwrap(), &s).unwrap().lambda;
        assert!((b - 7.0 * a).abs() < 1e-12 * b);
    }

    #[test]
    fn cone_constant_is_sufficient() {
        let p = p23();
        let c = cone_constant(&p);
        // xi3 dominating by the constant: Phi' = xi1 + 2 xi2 x + 3 xi3 x^2 has no zero
        let xi = Vec3::new(-1.0, 1.0, 2.0 * c);
        assert!(CurvePhase::new(&p, xi).stationary_points(0.5, 4.0).is_empty());
        assert!(CurvePhase::new(&p, xi).stationary_points(-4.0, -0.5).is_empty());
    }
}
