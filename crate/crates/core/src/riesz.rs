//! The normalized anisotropic Riesz distribution
//! `I^z = C_z rho^{z-Q}`, `C_z = G(0) / (sigma(S) Gamma(z) G(z))`:
//! normalization, pairing with Schwartz atoms, the `z -> 0` limit and the
//! Fourier transform as a dyadic series.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bernstein_sato::{to_f64, RootSystem};
use crate::error::{Error, Result};
use crate::geometry::{
    dilate2_dyadic, dilate2_unchecked, rho_unchecked, sphere_quadrature_fallible, surface_measure,
    AnisotropyParams, Vec2,
};
use crate::quad::{integrate, QuadOptions};
use crate::transform::EvenTransform;
use crate::special::{gamma_real, ln_gamma, recip_gamma};

/// Fixed data for `I^z` at one `(m, n, z)`.
#[derive(Debug, Clone)]
pub struct RieszContext {
    pub params: AnisotropyParams,
    pub roots: RootSystem,
    pub sigma_s: f64,
    pub z: Complex64,
}

impl RieszContext {
    pub fn new(params: AnisotropyParams, z: Complex64) -> Result<Self> {
        let sigma_s = surface_measure(&params, 1e-14)?;
        Ok(RieszContext { params, roots: RootSystem::new(&params, 0), sigma_s, z })
    }

    /// Same parameters, different `z`.
    pub fn with_z(&self, z: Complex64) -> Self {
        RieszContext { z, ..self.clone() }
    }

    fn shifts(&self) -> Vec<f64> {
        self.roots.gamma_shifts.iter().map(|c| to_f64(*c)).collect()
    }

    /// `G(0) = prod Gamma(c)` over the shifts, all of which lie in `(0, 1]`.
    pub fn g_zero(&self) -> f64 {
        self.shifts().iter().map(|&c| gamma_real(c)).product()
    }

    /// `1 / G(w)`, entire in `w`.
    pub fn recip_g(&self, w: Complex64) -> Complex64 {
        let args: Vec<Complex64> = self.shifts().iter().map(|c| w + c).collect();
        recip_gamma_product(&args)
    }

    /// `C_z`.
    pub fn normalization(&self) -> Complex64 {
        let mut args: Vec<Complex64> = vec![self.z];
        args.extend(self.shifts().iter().map(|c| self.z + c));
        recip_gamma_product(&args) * (self.g_zero() / self.sigma_s)
    }

    /// `C_z I_2 = G(0) phi(0) / (Gamma(z+1) G(z))` for `phi(0) = 1`.
    pub fn delta_coefficient(&self) -> Complex64 {
        let mut args: Vec<Complex64> = vec![self.z + 1.0];
        args.extend(self.shifts().iter().map(|c| self.z + c));
        recip_gamma_product(&args) * self.g_zero()
    }

    /// `min(1/(2n), -zeta_2, 1)`; the pairing needs `Re z > -margin`.
    pub fn strip_margin(&self) -> f64 {
        self.roots.strip_margin()
    }
}

/// `prod 1/Gamma(a_i)`, accumulated in logarithms; zero if any `a_i` is a pole.
fn recip_gamma_product(args: &[Complex64]) -> Complex64 {
    if args.iter().any(|a| recip_gamma(*a) == Complex64::new(0.0, 0.0)) {
        return Complex64::new(0.0, 0.0);
    }
    let log: Complex64 = args.iter().map(|a| ln_gamma(*a)).sum();
    (-log).exp()
}

/// A test function on R^2 that can be paired with `I^z`.
pub trait TestFunction: Sync {
    fn eval(&self, u: Vec2) -> Complex64;

    /// Euclidean radius beyond which `|phi| < eps`.
    fn decay_radius(&self, eps: f64) -> f64;

    fn at_origin(&self) -> Complex64 {
        self.eval(Vec2::ZERO)
    }
}

/// `P(u - c) exp(-pi |u - c|^2)` with a real polynomial `P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchwartzAtom {
    pub center: Vec2,
    /// Monomials `coef * w2^i * w3^j`, keyed by `(i, j)`.
    pub poly: BTreeMap<(u32, u32), f64>,
}

impl SchwartzAtom {
    pub fn gaussian() -> Self {
        Self::shifted_gaussian(Vec2::ZERO)
    }

    pub fn shifted_gaussian(center: Vec2) -> Self {
        SchwartzAtom { center, poly: BTreeMap::from([((0, 0), 1.0)]) }
    }

    pub fn new(center: Vec2, terms: &[((u32, u32), f64)]) -> Self {
        let mut poly = BTreeMap::new();
        for &(k, c) in terms {
            *poly.entry(k).or_insert(0.0) += c;
        }
        SchwartzAtom { center, poly }
    }

    fn poly_at(&self, w: Vec2) -> f64 {
        self.poly.iter().map(|(&(i, j), c)| c * w.x.powi(i as i32) * w.y.powi(j as i32)).sum()
    }

    pub fn value(&self, u: Vec2) -> f64 {
        let w = u - self.center;
        self.poly_at(w) * (-PI * w.dot(w)).exp()
    }

    /// `d/du2` (`axis = 0`) or `d/du3` (`axis = 1`), again an atom.
    pub fn derivative(&self, axis: usize) -> SchwartzAtom {
        let mut out: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for (&(i, j), &c) in &self.poly {
            let (k, raised) = if axis == 0 { (i, (i + 1, j)) } else { (j, (i, j + 1)) };
            if k > 0 {
                let lowered = if axis == 0 { (i - 1, j) } else { (i, j - 1) };
                *out.entry(lowered).or_insert(0.0) += c * k as f64;
            }
            *out.entry(raised).or_insert(0.0) -= 2.0 * PI * c;
        }
        out.retain(|_, c| *c != 0.0);
        SchwartzAtom { center: self.center, poly: out }
    }

    /// `int phi`, exact from Gaussian moments.
    pub fn integral(&self) -> f64 {
        fn moment(k: u32) -> f64 {
            if k % 2 == 1 {
                0.0
            } else {
                let a = (k as f64 + 1.0) / 2.0;
                gamma_real(a) / PI.powf(a)
            }
        }
        self.poly.iter().map(|(&(i, j), c)| c * moment(i) * moment(j)).sum()
    }

    /// Sampled `sup (1 + |u|)^N |d^beta phi(u)|` over `|beta| <= N`, an estimate
    /// of the Schwartz seminorm of order `N`.
    pub fn seminorm(&self, order: u32) -> f64 {
        let r = self.decay_radius(1e-16) + 1.0;
        let mut derivs = vec![self.clone()];
        let mut frontier = vec![self.clone()];
        for _ in 0..order {
            let next: Vec<SchwartzAtom> =
                frontier.iter().flat_map(|a| [a.derivative(0), a.derivative(1)]).collect();
            derivs.extend(next.iter().cloned());
            frontier = next;
        }
        let k = 81;
        let mut best: f64 = 0.0;
        for a in 0..k {
            for b in 0..k {
                let u = self.center
                    + Vec2::new(-r + 2.0 * r * a as f64 / (k - 1) as f64, -r + 2.0 * r * b as f64 / (k - 1) as f64);
                let wt = (1.0 + u.norm()).powi(order as i32);
                for d in &derivs {
                    best = best.max(wt * d.value(u).abs());
                }
            }
        }
        best
    }

    /// `sup |grad phi|`, sampled.
    pub fn gradient_sup(&self) -> f64 {
        let (dx, dy) = (self.derivative(0), self.derivative(1));
        let r = self.decay_radius(1e-16);
        let k = 201;
        let mut best: f64 = 0.0;
        for a in 0..k {
            for b in 0..k {
                let u = self.center
                    + Vec2::new(-r + 2.0 * r * a as f64 / (k - 1) as f64, -r + 2.0 * r * b as f64 / (k - 1) as f64);
                best = best.max(dx.value(u).hypot(dy.value(u)));
            }
        }
        best
    }
}

impl TestFunction for SchwartzAtom {
    fn eval(&self, u: Vec2) -> Complex64 {
        Complex64::new(self.value(u), 0.0)
    }

    fn decay_radius(&self, eps: f64) -> f64 {
        let c: f64 = self.poly.values().map(|c| c.abs()).sum();
        let d = self.poly.keys().map(|(i, j)| i + j).max().unwrap_or(0) as i32;
        let mut r: f64 = 1.0;
        while c * (1.0 + r).powi(d) * (-PI * r * r).exp() >= eps {
            r += 0.25;
        }
        r + self.center.norm()
    }
}

/// `phi_delta(u) = delta^{-Q} phi(delta^{-1} o u)`.
pub struct Dilated<'a, T: TestFunction + ?Sized> {
    pub inner: &'a T,
    pub params: AnisotropyParams,
    pub delta: f64,
}

impl<T: TestFunction + ?Sized> TestFunction for Dilated<'_, T> {
    fn eval(&self, u: Vec2) -> Complex64 {
        let w = dilate2_unchecked(&self.params, 1.0 / self.delta, u);
        self.inner.eval(w) * self.delta.powf(-self.params.q_f64())
    }

    fn decay_radius(&self, eps: f64) -> f64 {
        let s = self.delta.powf(self.params.e2()).max(self.delta.powf(self.params.e3()));
        self.inner.decay_radius(eps * self.delta.powf(self.params.q_f64()).min(1.0)) * s
    }
}

/// The pieces of `<I^z, phi> = C_z (I_1 + I_2 + I_3)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Pairing {
    pub value: Complex64,
    pub c_z: Complex64,
    /// `int_{rho <= 1} rho^{z-Q} (phi - phi(0))`.
    pub i1: Complex64,
    /// `C_z I_2`, in closed form.
    pub delta_term: Complex64,
    /// `int_{rho > 1} rho^{z-Q} phi`.
    pub i3: Complex64,
}

fn check_strip(ctx: &RieszContext) -> Result<()> {
    let margin = ctx.strip_margin();
    if !(ctx.z.re > -margin) {
        return Err(Error::Domain(format!(
            "Re z = {} outside the strip Re z > {}",
            ctx.z.re, -margin
        )));
    }
    Ok(())
}

/// `<I^z, phi>` through the split at `rho = 1`, in anisotropic polar coordinates.
pub fn pair_iz<T: TestFunction + ?Sized>(ctx: &RieszContext, phi: &T, tol: f64) -> Result<Pairing> {
    check_strip(ctx)?;
    let p = &ctx.params;
    let z = ctx.z;
    let phi0 = phi.at_origin();
    let lcm = p.radial_lcm() as f64;
    let re = phi.decay_radius(1e-17);
    let r_max = re.powi(2 * p.n() as i32) + re.powi(2 * p.m() as i32);
    let s_max = r_max.max(std::f64::consts::E).ln();
    let inner = QuadOptions { abs_tol: 1e-3 * tol, rel_tol: 1e-3 * tol, max_intervals: 20_000 };

    // r = t^L keeps t^L o v polynomial in t
    let inner_one = |v: Vec2| -> Result<Complex64> {
        Ok(integrate(
            |t| {
                if t == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let w = Vec2::new(t.powf(lcm * p.e2()) * v.x, t.powf(lcm * p.e3()) * v.y);
                (phi.eval(w) - phi0) * ((z * lcm - 1.0) * t.ln()).exp() * lcm
            },
            0.0,
            1.0,
            &[0.5],
            inner,
        )?
        .value)
    };
    // r = e^s
    let inner_three = |v: Vec2| -> Result<Complex64> {
        Ok(integrate(
            |s| (z * s).exp() * phi.eval(dilate2_unchecked(p, s.exp(), v)),
            0.0,
            s_max,
            &[0.25 * s_max, 0.5 * s_max],
            inner,
        )?
        .value)
    };
    let i1 = sphere_quadrature_fallible(p, inner_one, tol)?;
    let i3 = sphere_quadrature_fallible(p, inner_three, tol)?;
    let c_z = ctx.normalization();
    let delta_term = ctx.delta_coefficient() * phi0;
    Ok(Pairing { value: c_z * (i1 + i3) + delta_term, c_z, i1, delta_term, i3 })
}

/// Upper bound `B' sup|grad phi| sigma(S) / (1/(2n) + Re z)` for `|I_1|`, from
/// `|phi(r o v) - phi(0)| <= sup|grad phi| |v|_max r^{1/(2n)}` on `r <= 1`.
pub fn i1_bound(ctx: &RieszContext, grad_sup: f64, max_sphere_radius: f64) -> f64 {
    grad_sup * max_sphere_radius * ctx.sigma_s / (ctx.params.e2() + ctx.z.re)
}

/// `|<I^z, phi_delta> - delta^{z-Q} <I^z, phi>|` and `|<I^z, phi>|`.
pub fn homogeneity_defect<T: TestFunction>(
    ctx: &RieszContext,
    phi: &T,
    delta: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if !(delta > 0.0) {
        return Err(Error::Domain("dilation factor must be positive".into()));
    }
    let base = pair_iz(ctx, phi, tol)?.value;
    let dil = Dilated { inner: phi, params: ctx.params, delta };
    let scaled = pair_iz(ctx, &dil, tol)?.value;
    let expect = base * Complex64::new(delta, 0.0).powc(ctx.z - ctx.params.q_f64());
    Ok(((scaled - expect).norm(), base.norm()))
}

/// `<I^z, phi>` along a real sequence `z -> 0+`.
pub fn delta_limit_probe<T: TestFunction>(
    ctx: &RieszContext,
    phi: &T,
    zs: &[f64],
    tol: f64,
) -> Result<Vec<Complex64>> {
    let mut prev = f64::INFINITY;
    for &z in zs {
        if !(z > 0.0 && z < prev) {
            return Err(Error::Domain("z sequence must be positive and decreasing".into()));
        }
        prev = z;
    }
    zs.iter().map(|&z| Ok(pair_iz(&ctx.with_z(Complex64::new(z, 0.0)), phi, tol)?.value)).collect()
}

/// Value at 0 of the quadratic through the last three samples.
pub fn extrapolate_to_zero(zs: &[f64], values: &[Complex64]) -> Result<Complex64> {
    if zs.len() < 3 || values.len() != zs.len() {
        return Err(Error::GridTooShort { got: zs.len().min(values.len()), need: 3 });
    }
    let k = zs.len();
    let (x, y) = (&zs[k - 3..], &values[k - 3..]);
    let mut out = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        let mut l = 1.0;
        for j in 0..3 {
            if j != i {
                l *= x[j] / (x[j] - x[i]);
            }
        }
        out += y[i] * l;
    }
    Ok(out)
}

/// Width, in `ln rho`, of the transition of `Theta`.
const THETA_WIDTH: f64 = 1.0;
/// `Theta(rho/2) < 1e-18` beyond `rho = 2 exp(THETA_CUT)`.
const THETA_CUT: f64 = 6.3;
/// Frequency radius (per axis) that the tensor grid resolves.
const GRID_FREQ: f64 = 110.0;
const LOW_FREQ: f64 = 1e-3;

/// `Theta(t) = erfc(ln t) / 2`: decreases from 1 at `0+` to 0 at infinity.
fn theta(t: f64) -> f64 {
    0.5 * libm::erfc(t.ln() / THETA_WIDTH)
}

/// `eta(u) = Theta(rho/2) - Theta(rho)`; the dyadic dilates telescope to 1.
///
/// `eta` is a Gaussian bump in `ln rho`, so `eta rho^{z-Q}` is smooth at the
/// origin and `f0_hat` decays exponentially, which keeps the tabulation small.
pub fn fourier_cutoff(rho: f64) -> f64 {
    if rho <= 0.0 {
        return 0.0;
    }
    theta(0.5 * rho) - theta(rho)
}

/// `f0_hat` tabulated on a tensor Gauss-Legendre grid, for summing
/// `I^z_hat(xi) = C_z sum_j 2^{-jz} f0_hat(2^{-j} o xi)`, `f0 = eta rho^{z-Q}`.
#[derive(Debug, Clone)]
pub struct FourierKernel {
    params: AnisotropyParams,
    z: Complex64,
    c_z: Complex64,
    transform: EvenTransform,
    m0: Complex64,
    m22: Complex64,
    m33: Complex64,
    /// `|f0_hat|` observed at the edge of the resolved band.
    edge: f64,
}

/// One evaluation of the dyadic series.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FourierValue {
    pub value: Complex64,
    pub j_first: i64,
    pub j_last: i64,
    pub high_tail: f64,
}

impl FourierKernel {
    pub fn new(ctx: &RieszContext) -> Result<Self> {
        if !(ctx.z.re > 0.0) {
            return Err(Error::Domain("the Fourier series needs Re z > 0".into()));
        }
        let p = ctx.params;
        let support = 2.0 * (THETA_CUT * THETA_WIDTH).exp();
        let zq = ctx.z - p.q_f64();
        let transform = EvenTransform::new((support.powf(p.e2()), support.powf(p.e3())), GRID_FREQ, |u| {
            let r = rho_unchecked(&p, u);
            let eta = fourier_cutoff(r);
            if eta == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(r, 0.0).powc(zq) * eta
            }
        });
        Ok(FourierKernel {
            params: p,
            z: ctx.z,
            c_z: ctx.normalization(),
            m0: transform.moment(0, 0),
            m22: transform.moment(2, 0),
            m33: transform.moment(0, 2),
            edge: transform.edge_magnitude(),
            transform,
        })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// `f0_hat(zeta) = int f0(u) exp(-i zeta . u) du`.
    pub fn f0_hat(&self, zeta: Vec2) -> Complex64 {
        self.transform.eval(zeta)
    }

    /// `sum_j 2^{-jz} f0_hat(2^{-j} o xi)` without the constant `C_z`.
    pub fn series(&self, xi: Vec2, tol: f64) -> Result<FourierValue> {
        if xi.is_zero() {
            return Err(Error::Domain("zero frequency".into()));
        }
        let p = &self.params;
        let z = self.z;
        let weight = |j: i64| Complex64::new(2.0, 0.0).powc(-z * j as f64);
        // first j whose frequency the grid resolves
        let mut j = (rho_unchecked(p, xi).log2().floor() as i64) - 64;
        while !self.transform.resolves(dilate2_dyadic(p, -(j as f64), xi)) {
            j += 1;
        }
        let j_first = j;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut first_term = 0.0;
        for count in 0.. {
            if count > 2000 {
                return Err(Error::TruncationInsufficient("dyadic series did not reach low frequencies".into()));
            }
            let zeta = dilate2_dyadic(p, -(j as f64), xi);
            if zeta.norm() < LOW_FREQ {
                break;
            }
            let term = weight(j) * self.f0_hat(zeta);
            if count == 0 {
                first_term = term.norm();
            }
            sum += term;
            j += 1;
        }
        // closed-form tail: f0_hat(zeta) = m0 - (m22 zeta2^2 + m33 zeta3^2) / 2 + O(|zeta|^4)
        let geo = |r: Complex64| r.powf(j as f64) / (1.0 - r);
        let r0 = Complex64::new(2.0, 0.0).powc(-z);
        let r2 = r0 * (-2.0 * p.e2()).exp2();
        let r3 = r0 * (-2.0 * p.e3()).exp2();
        sum += self.m0 * geo(r0) - 0.5 * (self.m22 * xi.x * xi.x * geo(r2) + self.m33 * xi.y * xi.y * geo(r3));
        // unresolved terms are bounded by the edge value times a geometric
        // factor; f0_hat decays exponentially beyond the edge
        let high_tail = 2.0 * (self.edge * weight(j_first - 1).norm()).max(first_term);
        if high_tail > tol * sum.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::TruncationInsufficient(format!(
                "high-frequency tail {high_tail:.3e} exceeds tolerance at xi = ({}, {})",
                xi.x, xi.y
            )));
        }
        Ok(FourierValue { value: sum, j_first, j_last: j - 1, high_tail })
    }

    /// `I^z_hat(xi)`, including `C_z`.
    pub fn eval(&self, xi: Vec2, tol: f64) -> Result<FourierValue> {
        let mut v = self.series(xi, tol)?;
        v.value *= self.c_z;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sphere_point, Vec2};

    fn ctx(z: Complex64) -> RieszContext {
        RieszContext::new(AnisotropyParams::new(2, 3).unwrap(), z).unwrap()
    }

    #[test]
    fn normalization_values() {
        let c = ctx(Complex64::new(0.0, 0.0));
        assert_eq!(c.normalization(), Complex64::new(0.0, 0.0));
        // G(0)/(sigma G(1)) with G = product of Gamma(z + shift); reference by mpmath
        let c1 = c.with_z(Complex64::new(1.0, 0.0)).normalization();
        assert!((c1.re - 1681.990281966803930768796).abs() < 1e-9, "{c1}");
        assert!(c1.im.abs() < 1e-15);
        let z = Complex64::new(0.7, 0.3);
        let a = c.with_z(z).normalization();
        let b = c.with_z(z.conj()).normalization();
        assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn atom_derivative_and_integral() {
        let g = SchwartzAtom::gaussian();
        assert!((g.integral() - 1.0).abs() < 1e-14);
        let d = g.derivative(0);
        let h = 1e-6;
        let u = Vec2::new(0.3, -0.2);
        let fd = (g.value(Vec2::new(u.x + h, u.y)) - g.value(Vec2::new(u.x - h, u.y))) / (2.0 * h);
        assert!((d.value(u) - fd).abs() < 1e-8);
        let x2 = SchwartzAtom::new(Vec2::ZERO, &[((2, 0), 1.0)]);
        assert!((x2.integral() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(g.seminorm(2).is_finite());
        assert!(g.decay_radius(1e-16) < 4.0);
    }

    #[test]
    fn pairing_at_q_is_normalized_mass() {
        let p = AnisotropyParams::new(2, 3).unwrap();
        let c = ctx(Complex64::new(p.q_f64(), 0.0));
        let pr = pair_iz(&c, &SchwartzAtom::gaussian(), 1e-10).unwrap();
        assert!((pr.value - c.normalization()).norm() < 1e-9 * c.normalization().norm());
    }

    #[test]
    fn odd_atom_pairs_to_zero() {
        let c = ctx(Complex64::new(0.3, 0.1));
        let odd = SchwartzAtom::new(Vec2::ZERO, &[((1, 0), 1.0)]);
        let pr = pair_iz(&c, &odd, 1e-10).unwrap();
        assert!(pr.value.norm() < 1e-12);
    }

    #[test]
    fn outside_strip_is_domain_error() {
        let c = ctx(Complex64::new(-0.5, 0.0));
        assert!(matches!(pair_iz(&c, &SchwartzAtom::gaussian(), 1e-8), Err(Error::Domain(_))));
    }

    #[test]
    fn extended_strip_is_finite() {
        let c = ctx(Complex64::new(-0.1, 0.2));
        let v = pair_iz(&c, &SchwartzAtom::gaussian(), 1e-8).unwrap().value;
        assert!(v.re.is_finite() && v.im.is_finite());
    }

    #[test]
    fn delta_term_matches_i2_quadrature() {
        // C_z I_2 with I_2 = sigma(S) / z for phi(0) = 1
        let z = Complex64::new(0.4, -0.2);
        let c = ctx(z);
        let direct = c.normalization() * c.sigma_s / z;
        assert!((direct - c.delta_coefficient()).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn extrapolation_is_exact_on_quadratics() {
        let zs = [0.1, 0.01, 0.001];
        let f = |x: f64| Complex64::new(2.0 + 3.0 * x - x * x, x);
        let v: Vec<Complex64> = zs.iter().map(|&x| f(x)).collect();
        assert!((extrapolate_to_zero(&zs, &v).unwrap() - f(0.0)).norm() < 1e-13);
        assert!(extrapolate_to_zero(&zs[..2], &v[..2]).is_err());
    }

    #[test]
    fn cutoff_telescopes() {
        for &r in &[1e-6, 0.3, 1.0, 7.7, 1e5] {
            let s: f64 = (-200..200).map(|j| fourier_cutoff(r * (j as f64).exp2())).sum();
            assert!((s - 1.0).abs() < 1e-14, "{r}: {s}");
        }
    }

    #[test]
    fn fourier_is_homogeneous_of_degree_minus_z() {
        let z = Complex64::new(0.3, 0.0);
        let fk = FourierKernel::new(&ctx(z)).unwrap();
        let p = AnisotropyParams::new(2, 3).unwrap();
        let xi = sphere_point(&p, 0.7).v;
        let a = fk.series(xi, 1e-8).unwrap().value;
        let d = 5.0;
        let b = fk.series(dilate2_unchecked(&p, d, xi), 1e-8).unwrap().value;
        assert!((b - a * d.powf(-z.re)).norm() < 1e-8 * a.norm(), "{a} {b}");
        assert!(fk.series(Vec2::ZERO, 1e-8).is_err());
    }
}
