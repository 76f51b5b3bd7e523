//! Anisotropic dilations, the homogeneous norms `rho` on R^2 and `|||.|||` on
//! R^3, anisotropic polar coordinates and quadrature over the unit
//! `rho`-sphere.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{integrate_real, QuadOptions};
use crate::Rational;

/// Exponent pair `(m, n)` with `1 <= m < n` fixing the dilation
/// `delta o (u2, u3) = (delta^{1/2n} u2, delta^{1/2m} u3)` on R^2 and the curve
/// `gamma(t) = (t^m, t^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AnisotropyParams {
    m: u32,
    n: u32,
}

/// Largest exponent accepted; keeps every exact computation inside `i64`.
pub const MAX_EXPONENT: u32 = 64;

impl AnisotropyParams {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m < 1 || m >= n {
            return Err(Error::InvalidParams(format!("need 1 <= m < n, got m={m}, n={n}")));
        }
        if n > MAX_EXPONENT {
            return Err(Error::InvalidParams(format!("n={n} exceeds {MAX_EXPONENT}")));
        }
        Ok(AnisotropyParams { m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Homogeneous dimension `1/(2n) + 1/(2m)`, exact.
    pub fn q(&self) -> Rational {
        Ratio::new(1, 2 * self.n as i64) + Ratio::new(1, 2 * self.m as i64)
    }

    pub fn q_f64(&self) -> f64 {
        0.5 / self.n as f64 + 0.5 / self.m as f64
    }

    pub fn two_mn(&self) -> u32 {
        2 * self.m * self.n
    }

    /// Exponent of the first coordinate under `o`, i.e. `1/(2n)`.
    pub fn e2(&self) -> f64 {
        0.5 / self.n as f64
    }

    /// Exponent of the second coordinate under `o`, i.e. `1/(2m)`.
    pub fn e3(&self) -> f64 {
        0.5 / self.m as f64
    }

    /// `gamma(x1) = (x1^m, x1^n)`.
    pub fn curve(&self, x1: f64) -> Vec2 {
        Vec2::new(x1.powi(self.m as i32), x1.powi(self.n as i32))
    }

    /// Smallest `L` with `L/(2n)` and `L/(2m)` both integers.
    pub fn radial_lcm(&self) -> u32 {
        let (a, b) = (2 * self.n, 2 * self.m);
        a / gcd(a, b) * b
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(&self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// A point `(x1, x)` of R^3 = R x R^2.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec3 {
    pub x1: f64,
    pub x: Vec2,
}

impl Vec3 {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Vec3 { x1, x: Vec2::new(x2, x3) }
    }

    pub fn is_zero(&self) -> bool {
        self.x1 == 0.0 && self.x.is_zero()
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3 { x1: self.x1 + o.x1, x: self.x + o.x }
    }
}

/// `u = r o v` with `rho(v) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub r: f64,
    pub v: Vec2,
}

/// `rho(u) = u2^{2n} + u3^{2m}`.
pub fn rho(p: &AnisotropyParams, u: Vec2) -> Result<f64> {
    let r = rho_unchecked(p, u);
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::OutOfRange(format!("rho({}, {}) overflows", u.x, u.y)))
    }
}

#[inline]
pub(crate) fn rho_unchecked(p: &AnisotropyParams, u: Vec2) -> f64 {
    u.x.powi(2 * p.n as i32) + u.y.powi(2 * p.m as i32)
}

/// Exact `rho` on rational inputs.
pub fn rho_exact(p: &AnisotropyParams, u: [Ratio<i128>; 2]) -> Result<Ratio<i128>> {
    let pow = |b: Ratio<i128>, e: u32| -> Option<Ratio<i128>> {
        let mut acc = Ratio::from_integer(1);
        for _ in 0..e {
            acc = acc.checked_mul(&b)?;
        }
        Some(acc)
    };
    let overflow = || Error::OutOfRange("exact rho overflows i128".into());
    let a = pow(u[0], 2 * p.n).ok_or_else(overflow)?;
    let b = pow(u[1], 2 * p.m).ok_or_else(overflow)?;
    a.checked_add(&b).ok_or_else(overflow)
}

/// Exact dilation by `delta = t^{2mn}`: `(t^m u2, t^n u3)`.
pub fn dilate2_exact(p: &AnisotropyParams, t: Ratio<i128>, u: [Ratio<i128>; 2]) -> Result<[Ratio<i128>; 2]> {
    let overflow = || Error::OutOfRange("exact dilation overflows i128".into());
    if t <= Ratio::zero() {
        return Err(Error::Domain("dilation factor must be positive".into()));
    }
    let mut tm = Ratio::from_integer(1);
    for _ in 0..p.m {
        tm = tm.checked_mul(&t).ok_or_else(overflow)?;
    }
    let mut tn = tm;
    for _ in p.m..p.n {
        tn = tn.checked_mul(&t).ok_or_else(overflow)?;
    }
    Ok([u[0].checked_mul(&tm).ok_or_else(overflow)?, u[1].checked_mul(&tn).ok_or_else(overflow)?])
}

/// `delta o u = (delta^{1/2n} u2, delta^{1/2m} u3)`.
pub fn dilate2(p: &AnisotropyParams, delta: f64, u: Vec2) -> Result<Vec2> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Domain(format!("dilation factor must be positive, got {delta}")));
    }
    Ok(dilate2_unchecked(p, delta, u))
}

#[inline]
pub(crate) fn dilate2_unchecked(p: &AnisotropyParams, delta: f64, u: Vec2) -> Vec2 {
    Vec2::new(delta.powf(p.e2()) * u.x, delta.powf(p.e3()) * u.y)
}

/// `2^j o u`, computed with `exp2` so that dyadic orbits are consistent.
#[inline]
pub fn dilate2_dyadic(p: &AnisotropyParams, j: f64, u: Vec2) -> Vec2 {
    Vec2::new((j * p.e2()).exp2() * u.x, (j * p.e3()).exp2() * u.y)
}

/// `delta . (x1, x) = (delta x1, delta^m x2, delta^n x3)`.
pub fn dilate3(p: &AnisotropyParams, delta: f64, x: Vec3) -> Result<Vec3> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Domain(format!("dilation factor must be positive, got {delta}")));
    }
    Ok(Vec3 {
        x1: delta * x.x1,
        x: Vec2::new(delta.powi(p.m as i32) * x.x.x, delta.powi(p.n as i32) * x.x.y),
    })
}

/// `|||(x1, x)||| = max(|x1|, |x2|^{1/m}, |x3|^{1/n})`.
pub fn triple_norm(p: &AnisotropyParams, x: Vec3) -> f64 {
    x.x1
        .abs()
        .max(x.x.x.abs().powf(1.0 / p.m as f64))
        .max(x.x.y.abs().powf(1.0 / p.n as f64))
}

pub fn polar_decompose(p: &AnisotropyParams, u: Vec2) -> Result<PolarPoint> {
    if u.is_zero() {
        return Err(Error::Domain("polar coordinates undefined at the origin".into()));
    }
    let r = rho(p, u)?;
    let mut v = dilate2_unchecked(p, 1.0 / r, u);
    // one Newton step along the dilation orbit to pin rho(v) = 1
    let rv = rho_unchecked(p, v);
    v = dilate2_unchecked(p, 1.0 / rv, v);
    Ok(PolarPoint { r, v })
}

/// A point of the unit sphere `S = {rho = 1}` together with the density of
/// the measure `sigma` with respect to the Euclidean angle.
#[derive(Debug, Clone, Copy)]
pub struct SpherePoint {
    pub theta: f64,
    pub v: Vec2,
    pub density: f64,
}

/// Radial parametrization `theta -> s(theta) (cos theta, sin theta)` of `S`.
///
/// The density makes `du = r^{Q-1} dr dsigma(v)` exact under `u = r o v`:
/// differentiating the map `(r, theta) -> r o v(theta)` gives the Jacobian
/// `r^{Q-1} |v2 v3' / (2n) - v3 v2' / (2m)|`.
pub fn sphere_point(p: &AnisotropyParams, theta: f64) -> SpherePoint {
    let (sn, cs) = theta.sin_cos();
    let (a, b) = (2 * p.n as i32, 2 * p.m as i32);
    let ca = cs.abs().powi(a);
    let sb = sn.abs().powi(b);
    let g = |s: f64| s.powi(a) * ca + s.powi(b) * sb - 1.0;
    let dg = |s: f64| a as f64 * s.powi(a - 1) * ca + b as f64 * s.powi(b - 1) * sb;
    // g is increasing in s; each term alone forces s <= 1/|cos|, 1/|sin|
    let mut hi = (1.0 / cs.abs()).min(1.0 / sn.abs()).min(2.0);
    let mut lo = 0.0;
    let mut s = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gs = g(s);
        if gs > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let step = gs / dg(s);
        if gs == 0.0 || step.abs() <= 1e-16 * s {
            s -= step;
            break;
        }
        let next = s - step;
        s = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    // implicit derivative of s(theta)
    let g_s = dg(s);
    let g_theta = s.powi(a) * a as f64 * cs.abs().powi(a - 1) * cs.signum() * (-sn)
        + s.powi(b) * b as f64 * sn.abs().powi(b - 1) * sn.signum() * cs;
    let ds = -g_theta / g_s;
    let v = Vec2::new(s * cs, s * sn);
    let dv = Vec2::new(ds * cs - s * sn, ds * sn + s * cs);
    let density = (p.e2() * v.x * dv.y - p.e3() * v.y * dv.x).abs();
    SpherePoint { theta, v, density }
}

const SPHERE_START: usize = 32;
const SPHERE_MAX: usize = 1 << 16;

/// `int_S f dsigma` by the periodic trapezoid rule in `theta`, doubling the
/// node count until successive estimates differ by less than `tol`
/// (relative to `int_S |f| dsigma`).
pub fn sphere_quadrature<F>(p: &AnisotropyParams, f: F, tol: f64) -> Result<Complex64>
where
    F: Fn(Vec2) -> Complex64 + Sync,
{
    sphere_quadrature_fallible(p, |v| Ok(f(v)), tol)
}

/// As [`sphere_quadrature`] for integrands that may fail.
pub fn sphere_quadrature_fallible<F>(p: &AnisotropyParams, f: F, tol: f64) -> Result<Complex64>
where
    F: Fn(Vec2) -> Result<Complex64> + Sync,
{
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let eval = |theta: f64| -> Result<(Complex64, f64)> {
        let sp = sphere_point(p, theta);
        let v = f(sp.v)?;
        Ok((v * sp.density, v.norm() * sp.density))
    };
    let sample = |n: usize, offset: bool| -> Result<(Complex64, f64)> {
        let h = 2.0 * PI / n as f64;
        let vals: Vec<Result<(Complex64, f64)>> = (0..n)
            .into_par_iter()
            .map(|i| eval(h * (i as f64 + if offset { 0.5 } else { 0.0 })))
            .collect();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for v in vals {
            let (a, b) = v?;
            sum += a;
            abs += b;
        }
        Ok((sum, abs))
    };
    let mut n = SPHERE_START;
    let (mut sum, mut abs) = sample(n, false)?;
    let mut estimate = sum * (2.0 * PI / n as f64);
    loop {
        if n >= SPHERE_MAX {
            let scale = abs * 2.0 * PI / n as f64;
            return Err(Error::ToleranceNotMet { requested: tol * scale, achieved: f64::NAN });
        }
        let (s2, a2) = sample(n, true)?;
        sum += s2;
        abs += a2;
        n *= 2;
        let next = sum * (2.0 * PI / n as f64);
        let scale = (abs * 2.0 * PI / n as f64).max(f64::MIN_POSITIVE);
        let diff = (next - estimate).norm();
        estimate = next;
        if diff <= tol * scale {
            return Ok(estimate);
        }
    }
}

/// `sigma(S)`, the total mass of the sphere measure.
pub fn surface_measure(p: &AnisotropyParams, tol: f64) -> Result<f64> {
    Ok(sphere_quadrature(p, |_| Complex64::new(1.0, 0.0), tol)?.re)
}

/// Euclidean area of the unit ball `{rho <= 1}` by one-dimensional quadrature
/// of the section length `2 (1 - u2^{2n})^{1/2m}`.
pub fn ball_area(p: &AnisotropyParams, tol: f64) -> Result<f64> {
    let (a, b) = (2 * p.n as i32, p.e3());
    let (v, _) = integrate_real(
        |x| 2.0 * (1.0 - x.powi(a)).max(0.0).powf(b),
        -1.0,
        1.0,
        &[0.0],
        QuadOptions { abs_tol: tol, rel_tol: 0.0, max_intervals: 10_000 },
    )?;
    Ok(v)
}

/// Constants in `A rho^{1/2n} <= |u| <= B rho^{1/2m}` (`rho > 1`) and
/// `A' rho^{1/2m} <= |u| <= B' rho^{1/2n}` (`rho <= 1`).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormConstants {
    pub a: f64,
    pub b: f64,
    pub a_prime: f64,
    pub b_prime: f64,
}

/// Extremes of `|u| rho(u)^{-e}` over each region.
///
/// Writing `u = r o v`, `|u|^2 / r^{1/n} = v2^2 + r^{1/m - 1/n} v3^2` is increasing in
/// `r`, so every extremum sits on the sphere `r = 1` and all four constants are
/// extremes of `|v|` over `S`.
pub fn norm_equivalence(p: &AnisotropyParams) -> NormConstants {
    let samples = 4096;
    let radius = |t: f64| sphere_point(p, t).v.norm();
    let mut best_min = (f64::INFINITY, 0.0);
    let mut best_max = (0.0, 0.0);
    for i in 0..samples {
        let t = 2.0 * PI * i as f64 / samples as f64;
        let r = radius(t);
        if r < best_min.0 {
            best_min = (r, t);
        }
        if r > best_max.0 {
            best_max = (r, t);
        }
    }
    let h = 2.0 * PI / samples as f64;
    let min = golden(|t| radius(t), best_min.1 - h, best_min.1 + h).min(best_min.0);
    let max = -golden(|t| -radius(t), best_max.1 - h, best_max.1 + h).min(-best_max.0);
    NormConstants { a: min, b: max, a_prime: min, b_prime: max }
}

fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..80 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    f(0.5 * (a + b))
}

/// Largest observed `|||x + y||| / (|||x||| + |||y|||)` over random pairs.
pub fn quasi_triangle_constant(p: &AnisotropyParams, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let mut draw = || {
            let s = 10f64.powf(rng.gen_range(-3.0..3.0));
            Vec3::new(
                s * rng.gen_range(-1.0..1.0),
                s * rng.gen_range(-1.0..1.0),
                s * rng.gen_range(-1.0..1.0),
            )
        };
        let (x, y) = (draw(), draw());
        let lhs = triple_norm(p, x + y);
        let rhs = triple_norm(p, x) + triple_norm(p, y);
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p23() -> AnisotropyParams {
        AnisotropyParams::new(2, 3).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(AnisotropyParams::new(3, 3).is_err());
        assert!(AnisotropyParams::new(0, 2).is_err());
        assert!(AnisotropyParams::new(3, 2).is_err());
        let p = p23();
        assert_eq!(p.q(), Ratio::new(5, 12));
        assert_eq!(p.two_mn(), 12);
        assert_eq!(p.radial_lcm(), 12);
    }

    #[test]
    fn rho_examples() {
        let p = p23();
        assert_eq!(rho(&p, Vec2::ZERO).unwrap(), 0.0);
        assert_eq!(rho(&p, Vec2::new(1.0, 1.0)).unwrap(), 2.0);
        let d = dilate2(&p, 16.0, Vec2::new(1.0, 1.0)).unwrap();
        assert!((rho(&p, d).unwrap() - 32.0).abs() < 1e-12);
        assert!(matches!(rho(&p, Vec2::new(1e60, 0.0)), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn exact_homogeneity() {
        let p = p23();
        let u = [Ratio::new(3, 7), Ratio::new(-5, 4)];
        let t = Ratio::new(2, 3);
        let d = dilate2_exact(&p, t, u).unwrap();
        let mut delta = Ratio::from_integer(1);
        for _ in 0..p.two_mn() {
            delta *= t;
        }
        assert_eq!(rho_exact(&p, d).unwrap(), delta * rho_exact(&p, u).unwrap());
    }

    #[test]
    fn dilation_examples() {
        let p = p23();
        let u = Vec2::new(0.3, -1.7);
        assert_eq!(dilate2(&p, 1.0, u).unwrap(), u);
        let d = dilate2(&p, 64.0, Vec2::new(1.0, 0.0)).unwrap();
        assert!((d.x - 2.0).abs() < 1e-15 && d.y == 0.0);
        let a = dilate2(&p, 3.0, dilate2(&p, 5.0, u).unwrap()).unwrap();
        let b = dilate2(&p, 15.0, u).unwrap();
        assert!((a - b).norm() < 1e-14);
        assert!(dilate2(&p, 0.0, u).is_err());
        assert!(dilate2(&p, -1.0, u).is_err());
    }

    #[test]
    fn dilate3_examples() {
        let p = p23();
        let x = dilate3(&p, 2.0, Vec3::new(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(x, Vec3::new(2.0, 4.0, 8.0));
        // delta . (xi1, xi) = (delta xi1, delta^{2mn} o xi)
        let d = 3.0;
        let xi = Vec2::new(1.0, 1.0);
        let lhs = dilate3(&p, d, Vec3 { x1: 0.0, x: xi }).unwrap().x;
        let rhs = dilate2(&p, d.powi(p.two_mn() as i32), xi).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm());
        assert_eq!(dilate3(&p, 1.0, Vec3::new(0.2, 0.3, 0.4)).unwrap(), Vec3::new(0.2, 0.3, 0.4));
        assert!(dilate3(&p, -2.0, Vec3::new(0.2, 0.3, 0.4)).is_err());
    }

    #[test]
    fn triple_norm_examples() {
        let p = p23();
        assert_eq!(triple_norm(&p, Vec3::new(1.0, 1.0, 1.0)), 1.0);
        assert!((triple_norm(&p, Vec3::new(0.0, 9.0, 0.0)) - 3.0).abs() < 1e-15);
        let x = Vec3::new(1.0, 2.0, 3.0);
        let lhs = triple_norm(&p, dilate3(&p, 5.0, x).unwrap());
        assert!((lhs - 5.0 * triple_norm(&p, x)).abs() < 1e-12);
    }

    #[test]
    fn polar_examples() {
        let p = p23();
        let pp = polar_decompose(&p, Vec2::new(2f64.powf(1.0 / 6.0), 0.0)).unwrap();
        assert!((pp.r - 2.0).abs() < 1e-14);
        assert!((pp.v - Vec2::new(1.0, 0.0)).norm() < 1e-14);
        assert!(polar_decompose(&p, Vec2::ZERO).is_err());
    }

    #[test]
    fn sphere_points_lie_on_sphere() {
        let p = p23();
        for i in 0..100 {
            let sp = sphere_point(&p, 0.0628 * i as f64);
            assert!((rho(&p, sp.v).unwrap() - 1.0).abs() < 1e-14);
            assert!(sp.density > 0.0);
        }
    }

    #[test]
    fn odd_integrand_vanishes() {
        let p = p23();
        let i = sphere_quadrature(&p, |v| Complex64::new(v.x, 0.0), 1e-12).unwrap();
        assert!(i.norm() < 1e-12);
    }

    // area{rho <= 1} = 4 Gamma(1 + 1/2n) Gamma(1 + 1/2m) / Gamma(1 + Q), sigma(S) = Q area
    #[test]
    fn surface_measure_matches_gamma_formula() {
        let cases = [
            ((1, 2), 3.4960767390561597473, 2.6220575542921198105),
            ((2, 3), 3.794265421319873843, 1.5809439255499474346),
            ((3, 5), 3.9090459211030159259, 1.0424122456274709136),
        ];
        for ((m, n), area, sigma) in cases {
            let p = AnisotropyParams::new(m, n).unwrap();
            let s = surface_measure(&p, 1e-13).unwrap();
            assert!((s - sigma).abs() < 1e-12, "{m},{n}: {s} vs {sigma}");
            let a = ball_area(&p, 1e-13).unwrap();
            assert!((a - area).abs() < 1e-11, "{m},{n}: {a} vs {area}");
        }
    }

    #[test]
    fn norm_constants_bracket_samples() {
        let p = p23();
        let c = norm_equivalence(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let u = Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let r = rho(&p, u).unwrap();
            let n = u.norm();
            if r > 1.0 {
                assert!(n >= c.a * r.powf(p.e2()) * (1.0 - 1e-12));
                assert!(n <= c.b * r.powf(p.e3()) * (1.0 + 1e-12));
            } else {
                assert!(n >= c.a_prime * r.powf(p.e3()) * (1.0 - 1e-12));
                assert!(n <= c.b_prime * r.powf(p.e2()) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn bad_tolerance_rejected() {
        assert!(surface_measure(&p23(), 0.0).is_err());
    }

    #[test]
    fn quasi_triangle_is_finite() {
        let c = quasi_triangle_constant(&p23(), 2000, 7);
        assert!(c.is_finite() && c >= 0.5 && c < 10.0);
    }
}
