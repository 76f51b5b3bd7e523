//! Dyadic partitions of unity, vanishing-moment decompositions, separable
//! atoms with exact cancellation, the shear along `gamma` and the pieces of the
//! prototype kernel `p.v. (1/x1) rho(x)^{-Q + i mu}`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::Serialize;

use crate::bump::ShellBump;
use crate::error::{Error, Result};
use crate::geometry::{dilate2_dyadic, rho_unchecked, AnisotropyParams, Vec2, Vec3};
use crate::jet::{Jet, ORDER};
use crate::quad::{integrate_real, CompositeRule, QuadOptions};
use crate::transform::EvenTransform;

/// `eta = psi / Psi` with `psi` a bump in `rho` that is 1 on `[1/2, 4]` and
/// vanishes off `[1/4, 8]`, and `Psi(u) = sum_j psi(2^j o u)`.
#[derive(Debug, Clone, Copy)]
pub struct RadialPartition {
    pub bump: ShellBump,
}

impl Default for RadialPartition {
    fn default() -> Self {
        RadialPartition { bump: ShellBump::DYADIC }
    }
}

impl RadialPartition {
    fn shifts(&self, r: f64) -> std::ops::RangeInclusive<i32> {
        let (lo, hi) = (self.bump.lo0, self.bump.hi1);
        let l = r.log2();
        ((lo - l).floor() as i32)..=((hi - l).ceil() as i32)
    }

    pub fn psi(&self, r: f64) -> f64 {
        self.bump.eval(r)
    }

    /// `Psi` as a function of `rho`: `sum_j psi(2^j rho)`.
    pub fn big_psi(&self, r: f64) -> f64 {
        self.shifts(r).map(|j| self.bump.eval(r * (j as f64).exp2())).sum()
    }

    /// `eta` as a function of `rho > 0`.
    pub fn eta_rho(&self, r: f64) -> f64 {
        if !(r > 0.0) {
            return 0.0;
        }
        let num = self.bump.eval(r);
        if num == 0.0 {
            0.0
        } else {
            num / self.big_psi(r)
        }
    }

    pub fn eta_rho_jet(&self, r: Jet) -> Jet {
        let r0 = r.value();
        if !(r0 > 0.0) || self.bump.eval(r0) == 0.0 {
            return Jet::zero();
        }
        let mut den = Jet::zero();
        for j in self.shifts(r0) {
            den = den + self.bump.eval_jet(r.scale((j as f64).exp2()));
        }
        self.bump.eval_jet(r) / den
    }

    pub fn eta(&self, p: &AnisotropyParams, u: Vec2) -> Result<f64> {
        if u.is_zero() {
            return Err(Error::Domain("eta is undefined at the origin".into()));
        }
        Ok(self.eta_rho(rho_unchecked(p, u)))
    }

    /// Jet of `eta` along coordinate `axis` (0 for `u2`, 1 for `u3`) at `u`.
    pub fn eta_axis_jet(&self, p: &AnisotropyParams, u: Vec2, axis: usize) -> Jet {
        self.eta_rho_jet(rho_jet(p, u, axis))
    }
}

/// Jet of `rho` along one coordinate axis.
pub fn rho_jet(p: &AnisotropyParams, u: Vec2, axis: usize) -> Jet {
    let (a, b) = (2 * p.n(), 2 * p.m());
    if axis == 0 {
        Jet::variable(u.x).powi(a) + u.y.powi(b as i32)
    } else {
        Jet::variable(u.y).powi(b) + u.x.powi(a as i32)
    }
}

/// One-dimensional dyadic partition `sum_k eta1(2^k t) = 1` (`t != 0`) with
/// `eta1` supported in `[-4, -1] u [1, 4]`.
///
/// The profiles on the two half-lines may differ; with equal profiles `eta1`
/// is even, otherwise `int t eta1(t) dt != 0`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinePartition {
    pub positive: ShellBump,
    pub negative: ShellBump,
}

const LINE_POS: ShellBump = ShellBump { lo0: 0.0, lo1: 0.6, hi0: 1.4, hi1: 2.0 };
const LINE_NEG: ShellBump = ShellBump { lo0: 0.0, lo1: 0.25, hi0: 0.9, hi1: 2.0 };

impl LinePartition {
    pub fn asymmetric() -> Self {
        LinePartition { positive: LINE_POS, negative: LINE_NEG }
    }

    pub fn symmetric() -> Self {
        LinePartition { positive: LINE_POS, negative: LINE_POS }
    }

    fn side(&self, t: f64) -> (&ShellBump, f64) {
        if t >= 0.0 {
            (&self.positive, t)
        } else {
            (&self.negative, -t)
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let (b, s) = self.side(t);
        let part = RadialPartition { bump: *b };
        part.eta_rho(s)
    }

    pub fn eval_jet(&self, t: Jet) -> Jet {
        let t0 = t.value();
        if t0 == 0.0 {
            return Jet::zero();
        }
        let (b, _) = self.side(t0);
        let part = RadialPartition { bump: *b };
        part.eta_rho_jet(if t0 > 0.0 { t } else { -t })
    }

    /// `int t^k eta1(t) dt`.
    pub fn moment(&self, k: i32) -> f64 {
        let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-15, max_intervals: 2000 };
        let f = |t: f64| t.powi(k) * self.eval(t);
        let pos = integrate_real(f, 1.0, 4.0, &[2.0], opts).map(|v| v.0).unwrap_or(f64::NAN);
        let neg = integrate_real(f, -4.0, -1.0, &[-2.0], opts).map(|v| v.0).unwrap_or(f64::NAN);
        pos + neg
    }
}

/// Solves `a x = b` for a small dense system by partial pivoting.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[piv][col].abs() < 1e-300 {
            return Err(Error::Construction("singular moment matrix".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Ok(x)
}

/// Decomposition `phi = sum_k A_k` (pointwise for `x != 0`) into pieces with
/// `int x^l A_k = 0` for every `l` in `orders`.
///
/// With `chi_k(x) = eta1(2^{-k} x)`, `a_k^i = int x^i chi_k phi`,
/// `S_k^i = sum_{j >= k} a_j^i` and functions `omega^i = eta1 P_i` dual to the
/// monomials of `orders`,
///
/// `A_k = phi chi_k - sum_i a_k^i omega_k^i + sum_i S_k^i (omega_k^i - omega_{k-1}^i)`,
/// `omega_k^i(x) = 2^{-k(i+1)} omega^i(2^{-k} x)`.
///
/// For `orders = [1]` the dual function is `eta1 / int t eta1`.
pub struct MomentKill<F> {
    phi: F,
    support: (f64, f64),
    eta: LinePartition,
    orders: Vec<u32>,
    dual: Vec<Vec<f64>>,
    k_lo: i32,
    k_hi: i32,
    a: Vec<Vec<f64>>,
    s: Vec<Vec<f64>>,
}

/// Builds the decomposition for `phi` supported in `support`, which must not
/// contain 0.
pub fn moment_kill<F>(phi: F, support: (f64, f64), orders: &[u32]) -> Result<MomentKill<F>>
where
    F: Fn(f64) -> f64,
{
    moment_kill_with(phi, support, orders, LinePartition::asymmetric())
}

pub fn moment_kill_with<F>(phi: F, support: (f64, f64), orders: &[u32], eta: LinePartition) -> Result<MomentKill<F>>
where
    F: Fn(f64) -> f64,
{
    let (a, b) = support;
    if !(a < b) || (a <= 0.0 && b >= 0.0) {
        return Err(Error::Domain("support must be an interval not containing 0".into()));
    }
    if orders.is_empty() {
        return Err(Error::Domain("no moment orders requested".into()));
    }
    let d = orders.len();
    // Gram matrix of eta1 against monomials: M[i][l] = int t^{o_i + l} eta1
    let mat: Vec<Vec<f64>> =
        orders.iter().map(|&o| (0..d).map(|l| eta.moment(o as i32 + l as i32)).collect()).collect();
    if orders == [1] && eta.moment(1).abs() < 1e-12 {
        return Err(Error::Construction("the partition has zero first moment".into()));
    }
    let mut dual = vec![vec![0.0; d]; d];
    for i in 0..d {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        // columns of M^{-1}: sum_l M[i'][l] c[l] = delta
        let c = solve_dense(mat.clone(), e)?;
        dual[i] = c;
    }
    let (lo_abs, hi_abs) = if a > 0.0 { (a, b) } else { (-b, -a) };
    let k_lo = (lo_abs.log2() - 2.0).floor() as i32 + 1;
    let k_hi = hi_abs.log2().ceil() as i32 - 1;
    let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-14, max_intervals: 4000 };
    let mut amat = Vec::new();
    for k in k_lo..=k_hi {
        let sc = (k as f64).exp2();
        let mut row = Vec::with_capacity(d);
        for &o in orders {
            let f = |x: f64| x.powi(o as i32) * phi(x) * eta.eval(x / sc);
            let breaks = [sc, 2.0 * sc, 4.0 * sc, -sc, -2.0 * sc, -4.0 * sc];
            row.push(integrate_real(f, a, b, &breaks, opts)?.0);
        }
        amat.push(row);
    }
    let mut s = vec![vec![0.0; d]; amat.len()];
    let mut acc = vec![0.0; d];
    for idx in (0..amat.len()).rev() {
        for i in 0..d {
            acc[i] += amat[idx][i];
        }
        s[idx] = acc.clone();
    }
    Ok(MomentKill { phi, support, eta, orders: orders.to_vec(), dual, k_lo, k_hi, a: amat, s })
}

impl<F: Fn(f64) -> f64> MomentKill<F> {
    /// Scales `k` on which `phi chi_k` is not identically zero.
    pub fn active_range(&self) -> (i32, i32) {
        (self.k_lo, self.k_hi)
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// `S_{-infinity}^i = int x^i phi`. When nonzero, the pieces below the
    /// active range are `S (omega_k - omega_{k-1})` and do not vanish.
    pub fn tail_moments(&self) -> Vec<f64> {
        self.s.first().cloned().unwrap_or_else(|| vec![0.0; self.orders.len()])
    }

    fn coeffs(&self, k: i32) -> (Vec<f64>, Vec<f64>) {
        let d = self.orders.len();
        if k < self.k_lo {
            (vec![0.0; d], self.tail_moments())
        } else if k > self.k_hi {
            (vec![0.0; d], vec![0.0; d])
        } else {
            let i = (k - self.k_lo) as usize;
            (self.a[i].clone(), self.s[i].clone())
        }
    }

    /// `omega^i(t)`.
    pub fn dual_function(&self, i: usize, t: f64) -> f64 {
        let e = self.eta.eval(t);
        if e == 0.0 {
            return 0.0;
        }
        e * self.dual[i].iter().enumerate().map(|(l, c)| c * t.powi(l as i32)).sum::<f64>()
    }

    fn omega(&self, i: usize, k: i32, x: f64) -> f64 {
        let sc = (-(k as f64)).exp2();
        sc.powi(self.orders[i] as i32 + 1) * self.dual_function(i, x * sc)
    }

    fn phi_at(&self, x: f64) -> f64 {
        if x < self.support.0 || x > self.support.1 {
            0.0
        } else {
            (self.phi)(x)
        }
    }

    /// `A_k(x)`.
    pub fn piece(&self, k: i32, x: f64) -> f64 {
        let (a, s) = self.coeffs(k);
        let chi = self.eta.eval(x * (-(k as f64)).exp2());
        let mut v = if chi == 0.0 { 0.0 } else { self.phi_at(x) * chi };
        for i in 0..self.orders.len() {
            let wk = self.omega(i, k, x);
            let wk1 = self.omega(i, k - 1, x);
            v += -a[i] * wk + s[i] * (wk - wk1);
        }
        v
    }

    /// `sum_k A_k(x)`. The pieces below the active range telescope to
    /// `sum_i S^i omega_{k_lo - 1}^i`, which is used in place of the
    /// individual terms (they grow like `2^{-k(i+1)}` and cancel).
    pub fn reconstruct(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let l = x.abs().log2();
        let lo = (l.floor() as i32 - 3).max(self.k_lo);
        let hi = (l.ceil() as i32 + 2).min(self.k_hi);
        let mut v: f64 = (lo..=hi).map(|k| self.piece(k, x)).sum();
        let tail = self.tail_moments();
        for (i, s) in tail.iter().enumerate() {
            v += s * self.omega(i, self.k_lo - 1, x);
        }
        v
    }

    /// `int x^l A_k(x) dx` by composite Gauss-Legendre on the dyadic shells
    /// carrying `A_k`, split at the ends of the support of `phi`.
    pub fn piece_moment(&self, k: i32, l: u32) -> f64 {
        let sc = (k as f64).exp2();
        let mut cuts: Vec<f64> = [0.5, 1.0, 2.0, 4.0].iter().map(|m| m * sc).collect();
        for e in [self.support.0.abs(), self.support.1.abs()] {
            if e > cuts[0] && e < cuts[3] {
                cuts.push(e);
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let rule = CompositeRule::new(w[0], w[1], 24, 16);
            total += rule.integrate(|x| x.powi(l as i32) * self.piece(k, x));
            total += rule.integrate(|x| (-x).powi(l as i32) * self.piece(k, -x));
        }
        total
    }
}

/// Which half-lines carry the `x1`-profile of an atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sidedness {
    Positive,
    Symmetric,
}

/// The `eta`-side profile `beta` of a separable atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaProfile {
    /// A bump of `rho(eta)` supported in `[1/2, 4]`; all `x`-moments of the
    /// atom vanish.
    Annular,
    /// `|eta|^2 exp(-|eta|^2 / 2)`, with physical side
    /// `(2 pi)^{-1} (2 - |x|^2) exp(-|x|^2 / 2)`; only moments of order 0
    /// and 1 vanish.
    GaussianLaplacian,
}

const ATOM_LINE: ShellBump = ShellBump { lo0: -1.0, lo1: -0.3, hi0: 1.3, hi1: 2.0 };
/// Frequency radius resolved by the tabulated inverse transform of the annular profile.
const ANNULAR_GRID_FREQ: f64 = 80.0;

/// `phi(x1, x) = a(x1) g(x)` with `F_2 phi(x1, eta) = a(x1) beta(eta)`, where
/// `a` is supported in `1/2 <= |x1| <= 4` and has vanishing moments of order
/// `0..=m1`.
#[derive(Debug, Clone)]
pub struct SeparableAtom {
    params: AnisotropyParams,
    m1: u32,
    sided: Sidedness,
    profile: BetaProfile,
    /// Coefficients of the polynomial factor of `a` in `(x1 - center) / half_width`,
    /// lowest degree first.
    poly: Vec<f64>,
    center: f64,
    half_width: f64,
    inverse: Arc<OnceLock<EvenTransform>>,
}

/// JSON description of a [`SeparableAtom`].
#[derive(Debug, Clone, Serialize)]
pub struct AtomDescriptor {
    pub profile: BetaProfile,
    pub sidedness: Sidedness,
    pub m1: u32,
    pub x1_support: (f64, f64),
    pub x1_knots_log2: [f64; 4],
    pub annulus: Option<(f64, f64)>,
    pub annulus_knots_log2: Option<[f64; 4]>,
    /// Coefficients in `(x1 - center) / half_width`, lowest degree first.
    pub polynomial: Vec<f64>,
    pub center: f64,
    pub half_width: f64,
}

impl SeparableAtom {
    pub fn new(params: AnisotropyParams, m1: u32, sided: Sidedness, profile: BetaProfile) -> Result<Self> {
        if m1 > 8 {
            return Err(Error::Domain("at most 8 vanishing moments are supported".into()));
        }
        // P is built in the centred variable u = (x - c) / s for conditioning
        let (c, s) = match sided {
            Sidedness::Positive => (2.25, 1.75),
            Sidedness::Symmetric => (0.0, 4.0),
        };
        let rule = CompositeRule::new(0.5, 4.0, 400, 16);
        let moment = |k: i32| -> f64 {
            let pos = rule.integrate(|t| ((t - c) / s).powi(k) * ATOM_LINE.eval(t));
            let neg = match sided {
                Sidedness::Positive => 0.0,
                Sidedness::Symmetric => rule.integrate(|t| ((-t - c) / s).powi(k) * ATOM_LINE.eval(t)),
            };
            pos + neg
        };
        let d = m1 as usize + 1;
        // P(u) = u^d + sum_{l<d} c_l u^l with int u^k B P = 0 for k < d
        let mut mat = vec![vec![0.0; d]; d];
        let mut rhs = vec![0.0; d];
        for k in 0..d {
            for l in 0..d {
                mat[k][l] = moment((k + l) as i32);
            }
            rhs[k] = -moment((k + d) as i32);
        }
        let mut poly = solve_dense(mat, rhs)?;
        poly.push(1.0);
        let mut atom = SeparableAtom { params, m1, sided, profile, poly, center: c, half_width: s, inverse: Arc::new(OnceLock::new()) };
        let peak = (0..2000).map(|i| atom.a(0.5 + 3.5 * i as f64 / 1999.0).abs()).fold(0.0, f64::max);
        atom.poly.iter_mut().for_each(|c| *c /= peak);
        Ok(atom)
    }

    /// Positive-side atom with the annular profile and `m1 = 3`.
    pub fn standard(params: AnisotropyParams) -> Result<Self> {
        Self::new(params, 3, Sidedness::Positive, BetaProfile::Annular)
    }

    pub fn params(&self) -> &AnisotropyParams {
        &self.params
    }

    pub fn m1(&self) -> u32 {
        self.m1
    }

    pub fn profile(&self) -> BetaProfile {
        self.profile
    }

    pub fn sidedness(&self) -> Sidedness {
        self.sided
    }

    /// Intervals of `x1` carrying the profile.
    pub fn x1_support(&self) -> Vec<(f64, f64)> {
        match self.sided {
            Sidedness::Positive => vec![(0.5, 4.0)],
            Sidedness::Symmetric => vec![(-4.0, -0.5), (0.5, 4.0)],
        }
    }

    pub fn a(&self, x1: f64) -> f64 {
        if self.sided == Sidedness::Positive && x1 <= 0.0 {
            return 0.0;
        }
        let b = ATOM_LINE.eval(x1.abs());
        if b == 0.0 {
            return 0.0;
        }
        let u = (x1 - self.center) / self.half_width;
        b * self.poly.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    pub fn a_jet(&self, x1: Jet) -> Jet {
        let t0 = x1.value();
        if (self.sided == Sidedness::Positive && t0 <= 0.0) || t0 == 0.0 {
            return Jet::zero();
        }
        let b = ATOM_LINE.eval_jet(if t0 > 0.0 { x1 } else { -x1 });
        let mut p = Jet::zero();
        let u = (x1 + (-self.center)).scale(1.0 / self.half_width);
        for c in self.poly.iter().rev() {
            p = p * u + *c;
        }
        b * p
    }

    pub fn beta(&self, eta: Vec2) -> f64 {
        match self.profile {
            BetaProfile::Annular => ShellBump::ANNULUS.eval(rho_unchecked(&self.params, eta)),
            BetaProfile::GaussianLaplacian => {
                let r2 = eta.dot(eta);
                r2 * (-0.5 * r2).exp()
            }
        }
    }

    /// Radii of the `rho`-annulus carrying `beta`, if compact.
    pub fn annulus(&self) -> Option<(f64, f64)> {
        match self.profile {
            BetaProfile::Annular => Some(ShellBump::ANNULUS.support()),
            BetaProfile::GaussianLaplacian => None,
        }
    }

    /// `g(x) = (2 pi)^{-2} int beta(eta) exp(i eta . x) d eta`.
    pub fn g(&self, x: Vec2) -> f64 {
        match self.profile {
            BetaProfile::GaussianLaplacian => {
                let r2 = x.dot(x);
                (2.0 - r2) * (-0.5 * r2).exp() / (2.0 * PI)
            }
            BetaProfile::Annular => {
                let t = self.inverse.get_or_init(|| {
                    let p = self.params;
                    let (_, hi) = ShellBump::ANNULUS.support();
                    let b = (hi.powf(p.e2()), hi.powf(p.e3()));
                    EvenTransform::new(b, ANNULAR_GRID_FREQ, move |u| {
                        Complex64::new(ShellBump::ANNULUS.eval(rho_unchecked(&p, u)), 0.0)
                    })
                });
                if !t.resolves(x) {
                    return 0.0;
                }
                t.eval(x).re / (4.0 * PI * PI)
            }
        }
    }

    /// `phi(x1, x) = a(x1) g(x)`.
    pub fn eval(&self, x1: f64, x: Vec2) -> f64 {
        let a = self.a(x1);
        if a == 0.0 {
            0.0
        } else {
            a * self.g(x)
        }
    }

    /// `F_2 phi(x1, eta) = a(x1) beta(eta)`.
    pub fn partial_fourier(&self, x1: f64, eta: Vec2) -> f64 {
        self.a(x1) * self.beta(eta)
    }

    pub fn descriptor(&self) -> AtomDescriptor {
        let k = |b: &ShellBump| [b.lo0, b.lo1, b.hi0, b.hi1];
        AtomDescriptor {
            profile: self.profile,
            sidedness: self.sided,
            m1: self.m1,
            x1_support: (0.5, 4.0),
            x1_knots_log2: k(&ATOM_LINE),
            annulus: self.annulus(),
            annulus_knots_log2: self.annulus().map(|_| k(&ShellBump::ANNULUS)),
            polynomial: self.poly.clone(),
            center: self.center,
            half_width: self.half_width,
        }
    }

    /// `max |a^(k)|`, `k <= 4`.
    pub fn a_derivative_sup(&self) -> [f64; ORDER + 1] {
        let mut out = crate::jet::derivative_sup(|t| self.a_jet(t), 0.5, 4.0, 2001);
        if self.sided == Sidedness::Symmetric {
            let neg = crate::jet::derivative_sup(|t| self.a_jet(t), -4.0, -0.5, 2001);
            for k in 0..=ORDER {
                out[k] = out[k].max(neg[k]);
            }
        }
        out
    }
}

/// A scale pair `J = (j1, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DyadicIndex {
    pub j1: i32,
    pub j: i32,
}

impl DyadicIndex {
    pub fn new(j1: i32, j: i32) -> Self {
        DyadicIndex { j1, j }
    }
}

/// A complex-valued function on R^3 = R x R^2.
pub trait Kernel3: Sync {
    fn eval3(&self, x1: f64, x: Vec2) -> Complex64;
}

impl Kernel3 for SeparableAtom {
    fn eval3(&self, x1: f64, x: Vec2) -> Complex64 {
        Complex64::new(self.eval(x1, x), 0.0)
    }
}

/// `(x1, x) -> 2^{-j1 - jQ} phi(2^{-j1} x1, 2^{-j} o (x - gamma(x1)))`.
pub struct AdaptedPiece<'a, K: Kernel3 + ?Sized> {
    pub params: AnisotropyParams,
    pub kernel: &'a K,
    pub index: DyadicIndex,
    /// Whether to shear along `gamma`; without it this is the plain rescaled piece.
    pub sheared: bool,
}

pub fn adapted_shift<K: Kernel3 + ?Sized>(p: AnisotropyParams, kernel: &K, index: DyadicIndex) -> AdaptedPiece<'_, K> {
    AdaptedPiece { params: p, kernel, index, sheared: true }
}

impl<K: Kernel3 + ?Sized> AdaptedPiece<'_, K> {
    pub fn eval(&self, x1: f64, x: Vec2) -> Complex64 {
        let p = &self.params;
        let (j1, j) = (self.index.j1 as f64, self.index.j as f64);
        let y = if self.sheared { x - p.curve(x1) } else { x };
        let scale = (-j1 - j * p.q_f64()).exp2();
        self.kernel.eval3((-j1).exp2() * x1, dilate2_dyadic(p, -j, y)) * scale
    }

    pub fn eval_point(&self, x: Vec3) -> Complex64 {
        self.eval(x.x1, x.x)
    }
}

/// Normalized piece of `H = p.v. (1/x1) rho(x)^{-Q + i mu}`:
/// `psi(t, y) = eta1(t)/t [eta(y) rho(y)^{-Q+i mu} - c_mu b(y)]` with `eta1` even,
/// `b = eta / int eta` and `c_mu = int eta rho^{-Q + i mu}`, so that both
/// `int psi dt` and `int psi dy` vanish.
#[derive(Debug, Clone)]
pub struct PrototypePiece {
    pub params: AnisotropyParams,
    pub mu: f64,
    line: LinePartition,
    radial: RadialPartition,
    /// `c_mu / int eta`.
    correction: Complex64,
}

impl PrototypePiece {
    pub fn new(params: AnisotropyParams, mu: f64) -> Result<Self> {
        if mu == 0.0 || !mu.is_finite() {
            return Err(Error::Domain("mu must be a nonzero real".into()));
        }
        let radial = RadialPartition::default();
        let q = params.q_f64();
        let sigma = crate::geometry::surface_measure(&params, 1e-14)?;
        let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-15, max_intervals: 4000 };
        let breaks = [0.5, 1.0, 2.0, 4.0];
        let (cr, _) = integrate_real(|r| radial.eta_rho(r) * (mu * r.ln()).cos() / r, 0.25, 8.0, &breaks, opts)?;
        let (ci, _) = integrate_real(|r| radial.eta_rho(r) * (mu * r.ln()).sin() / r, 0.25, 8.0, &breaks, opts)?;
        let (mass, _) = integrate_real(|r| radial.eta_rho(r) * r.powf(q - 1.0), 0.25, 8.0, &breaks, opts)?;
        let c_mu = Complex64::new(cr, ci) * sigma;
        Ok(PrototypePiece {
            params,
            mu,
            line: LinePartition::symmetric(),
            radial,
            correction: c_mu / (sigma * mass),
        })
    }

    /// The `x`-factor `eta(y) rho^{-Q+i mu} - c_mu b(y)`.
    pub fn x_factor(&self, y: Vec2) -> Complex64 {
        let r = rho_unchecked(&self.params, y);
        let e = self.radial.eta_rho(r);
        if e == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let pw = Complex64::new(-self.params.q_f64(), self.mu) * r.ln();
        e * (pw.exp() - self.correction)
    }

    /// The `x1`-factor `eta1(t) / t`.
    pub fn x1_factor(&self, t: f64) -> f64 {
        let e = self.line.eval(t);
        if e == 0.0 {
            0.0
        } else {
            e / t
        }
    }

    /// `psi_J` in normalized coordinates; `J` enters only through the phase `2^{i j mu}`.
    pub fn normalized(&self, index: DyadicIndex, t: f64, y: Vec2) -> Complex64 {
        let phase = Complex64::from_polar(1.0, index.j as f64 * self.mu * std::f64::consts::LN_2);
        phase * self.x1_factor(t) * self.x_factor(y)
    }

    /// Supremum norms of pure derivatives of order `<= 4` in each variable,
    /// sampled on the support.
    pub fn derivative_sup(&self) -> [f64; ORDER + 1] {
        let line = self.line;
        let t_part = crate::jet::derivative_sup(|t| line.eval_jet(t) / t, 1.0, 4.0, 1201);
        let p = self.params;
        let mut out = [0.0f64; ORDER + 1];
        let x1_sup = self.x1_factor_sup();
        let y_sup = self.x_factor_axis_sup(&p);
        for k in 0..=ORDER {
            out[k] = (t_part[k] * y_sup[0]).max(x1_sup * y_sup[k]);
        }
        out
    }

    fn x1_factor_sup(&self) -> f64 {
        (0..1201).map(|i| self.x1_factor(1.0 + 3.0 * i as f64 / 1200.0).abs()).fold(0.0, f64::max)
    }

    fn x_factor_axis_sup(&self, p: &AnisotropyParams) -> [f64; ORDER + 1] {
        let mut out = [0.0f64; ORDER + 1];
        let (b2, b3) = (8f64.powf(p.e2()), 8f64.powf(p.e3()));
        let k = 61;
        for ia in 0..k {
            for ib in 0..k {
                let y = Vec2::new(b2 * ia as f64 / (k - 1) as f64, b3 * ib as f64 / (k - 1) as f64);
                if y.is_zero() {
                    continue;
                }
                for axis in 0..2 {
                    let r = rho_jet(p, y, axis);
                    let e = self.radial.eta_rho_jet(r);
                    if e.value() == 0.0 && e.derivative(1) == 0.0 {
                        continue;
                    }
                    let l = r.ln();
                    let (sn, cs) = l.scale(self.mu).sin_cos();
                    let mag = (l.scale(-p.q_f64())).exp();
                    let re = e * (mag * cs + (-self.correction.re));
                    let im = e * (mag * sn + (-self.correction.im));
                    for d in 0..=ORDER {
                        out[d] = out[d].max(re.derivative(d).hypot(im.derivative(d)));
                    }
                }
            }
        }
        out
    }

    /// `int (x-factor) dy`, zero up to quadrature error. The factor depends
    /// on `y` only through `rho(y)`, so this is `sigma(S) int f(r) r^{Q-1} dr`.
    pub fn x_mean_residual(&self) -> Result<Complex64> {
        let p = self.params;
        let sigma = crate::geometry::surface_measure(&p, 1e-14)?;
        let v = crate::geometry::sphere_point(&p, 0.3).v;
        let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-15, max_intervals: 4000 };
        let f = |r: f64| self.x_factor(crate::geometry::dilate2_unchecked(&p, r, v)) * r.powf(p.q_f64() - 1.0);
        Ok(crate::quad::integrate(f, 0.25, 8.0, &[0.5, 1.0, 2.0, 4.0], opts)?.value * sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p23() -> AnisotropyParams {
        AnisotropyParams::new(2, 3).unwrap()
    }

    #[test]
    fn radial_partition_sums_to_one() {
        let p = p23();
        let part = RadialPartition::default();
        for &r in &[1e-6, 0.01, 0.3, 1.0, 5.5, 1e6] {
            let u = crate::geometry::dilate2(&p, r, Vec2::new(0.6, 0.8)).unwrap();
            let s: f64 = (-60..60).map(|j| part.eta(&p, dilate2_dyadic(&p, j as f64, u)).unwrap()).sum();
            assert!((s - 1.0).abs() < 1e-12, "{r}: {s}");
        }
        assert!(part.eta(&p, Vec2::ZERO).is_err());
        // only one shell overlaps at rho = 1 (plateau of psi, neighbours vanish)
        assert!((part.eta_rho(1.5) - part.psi(1.5) / part.big_psi(1.5)).abs() < 1e-15);
    }

    #[test]
    fn line_partition() {
        for eta in [LinePartition::asymmetric(), LinePartition::symmetric()] {
            for &t in &[0.001, 0.7, 3.3, -0.2, -5.0] {
                let s: f64 = (-30..30).map(|k| eta.eval(t * (k as f64).exp2())).sum();
                assert!((s - 1.0).abs() < 1e-14);
            }
            assert_eq!(eta.eval(0.5), 0.0);
            assert_eq!(eta.eval(-4.5), 0.0);
        }
        assert!(LinePartition::asymmetric().moment(1).abs() > 0.1);
        assert!(LinePartition::symmetric().moment(1).abs() < 1e-13);
    }

    #[test]
    fn moment_kill_first_moment() {
        let bump = |x: f64| crate::bump::smooth_step((x - 1.0) * 4.0) * crate::bump::smooth_step((2.0 - x) * 4.0);
        let mk = moment_kill(bump, (1.0, 2.0), &[1]).unwrap();
        let (lo, hi) = mk.active_range();
        for k in lo - 2..=hi + 1 {
            assert!(mk.piece_moment(k, 1).abs() < 1e-10, "k={k}");
        }
        for i in 0..50 {
            let x = 0.9 + 1.2 * i as f64 / 49.0;
            assert!((mk.reconstruct(x) - bump(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn moment_kill_rejects_support_through_zero() {
        assert!(moment_kill(|x| x, (-1.0, 1.0), &[1]).is_err());
        assert!(moment_kill_with(|x| x, (1.0, 2.0), &[1], LinePartition::symmetric()).is_err());
    }

    #[test]
    fn atom_moments_vanish() {
        for sided in [Sidedness::Positive, Sidedness::Symmetric] {
            let atom = SeparableAtom::new(p23(), 3, sided, BetaProfile::Annular).unwrap();
            for l in 0..=3 {
                let rule = CompositeRule::new(0.5, 4.0, 300, 20);
                let pos = rule.integrate(|t| t.powi(l) * atom.a(t));
                let neg = rule.integrate(|t| (-t).powi(l) * atom.a(-t));
                assert!((pos + neg).abs() < 1e-12 * 4f64.powi(l), "l={l}: {}", pos + neg);
            }
            let d = atom.a_derivative_sup();
            assert!(d.iter().all(|v| v.is_finite()) && (d[0] - 1.0).abs() < 1e-2);
        }
    }

    #[test]
    fn beta_support() {
        let atom = SeparableAtom::standard(p23()).unwrap();
        assert_eq!(atom.beta(Vec2::new(0.1, 0.1)), 0.0);
        assert_eq!(atom.beta(Vec2::new(2.0, 0.0)), 0.0);
        assert!(atom.beta(Vec2::new(1.0, 0.5)) > 0.0);
        let js = serde_json::to_value(atom.descriptor()).unwrap();
        assert_eq!(js["profile"], "annular");
        assert_eq!(js["m1"], 3);
    }

    #[test]
    fn gaussian_laplacian_inverse_transform() {
        // check the closed form against the tabulated transform of beta
        let atom = SeparableAtom::new(p23(), 3, Sidedness::Positive, BetaProfile::GaussianLaplacian).unwrap();
        let t = EvenTransform::new((10.0, 10.0), 30.0, |u| Complex64::new(atom.beta(u), 0.0));
        for x in [Vec2::ZERO, Vec2::new(0.7, -1.2), Vec2::new(2.5, 0.3)] {
            let want = t.eval(x).re / (4.0 * PI * PI);
            assert!((atom.g(x) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn adapted_shift_on_curve() {
        let p = p23();
        let atom = SeparableAtom::new(p, 3, Sidedness::Positive, BetaProfile::GaussianLaplacian).unwrap();
        let pc = adapted_shift(p, &atom, DyadicIndex::new(0, 0));
        let x1 = 1.3;
        let v = pc.eval(x1, p.curve(x1));
        assert!((v.re - atom.eval(x1, Vec2::ZERO)).abs() < 1e-15);
        let shifted = adapted_shift(p, &atom, DyadicIndex::new(1, 0));
        assert_eq!(shifted.eval(0.9, Vec2::new(0.1, 0.2)).norm(), 0.0);
        assert!(shifted.eval(1.5, p.curve(1.5)).norm() > 0.0);
    }

    #[test]
    fn prototype_piece_cancellations() {
        let pc = PrototypePiece::new(p23(), 1.5).unwrap();
        assert!(PrototypePiece::new(p23(), 0.0).is_err());
        // int psi dt = 0: eta1 even, 1/t odd
        for t in [1.2, 2.7, 3.9] {
            assert!((pc.x1_factor(t) + pc.x1_factor(-t)).abs() < 1e-15);
        }
        let res = pc.x_mean_residual().unwrap();
        assert!(res.norm() < 1e-12, "{res}");
        let a = pc.normalized(DyadicIndex::new(0, 0), 1.5, Vec2::new(1.0, 0.2));
        let b = pc.normalized(DyadicIndex::new(3, -2), 1.5, Vec2::new(1.0, 0.2));
        assert!((a.norm() - b.norm()).abs() < 1e-15);
        assert!(pc.derivative_sup().iter().all(|v| v.is_finite()));
    }
}
