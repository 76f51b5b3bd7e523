//! Truncated Taylor jets for forward-mode differentiation up to fourth order.
//!
//! A [`Jet`] stores the normalized Taylor coefficients `f^(k)(t0) / k!` of a
//! scalar function at a point. Arithmetic on jets propagates derivatives
//! exactly (up to rounding), which is how every smooth bump in this crate
//! reports its derivatives.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Highest derivative order carried by a [`Jet`].
pub const ORDER: usize = 4;
const LEN: usize = ORDER + 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [f64; LEN],
}

const FACTORIAL: [f64; LEN] = [1.0, 1.0, 2.0, 6.0, 24.0];

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = v;
        Jet { c }
    }

    /// The identity function `t` expanded at `t0`.
    pub fn variable(t0: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = t0;
        c[1] = 1.0;
        Jet { c }
    }

    pub fn zero() -> Self {
        Jet { c: [0.0; LEN] }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// The `k`-th derivative, `k <= ORDER`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.c[k] * FACTORIAL[k]
    }

    pub fn derivatives(&self) -> [f64; LEN] {
        let mut d = [0.0; LEN];
        for (k, v) in d.iter_mut().enumerate() {
            *v = self.derivative(k);
        }
        d
    }

    pub fn scale(self, s: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|v| *v *= s);
        Jet { c }
    }

    pub fn recip(self) -> Self {
        let a0 = self.c[0];
        let mut r = [0.0; LEN];
        r[0] = 1.0 / a0;
        for k in 1..LEN {
            let mut s = 0.0;
            for j in 1..=k {
                s += self.c[j] * r[k - j];
            }
            r[k] = -s / a0;
        }
        Jet { c: r }
    }

    pub fn exp(self) -> Self {
        // b' = a' b in coefficient form: k b_k = sum_{j=1..k} j a_j b_{k-j}
        let mut b = [0.0; LEN];
        b[0] = self.c[0].exp();
        for k in 1..LEN {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * self.c[j] * b[k - j];
            }
            b[k] = s / k as f64;
        }
        Jet { c: b }
    }

    pub fn ln(self) -> Self {
        // a = exp(b): a_k k = sum j b_j a_{k-j}  =>  b_k = (k a_k - sum_{j<k} j b_j a_{k-j}) / (k a0)
        let a0 = self.c[0];
        let mut b = [0.0; LEN];
        b[0] = a0.ln();
        for k in 1..LEN {
            let mut s = k as f64 * self.c[k];
            for j in 1..k {
                s -= j as f64 * b[j] * self.c[k - j];
            }
            b[k] = s / (k as f64 * a0);
        }
        Jet { c: b }
    }

    /// `(sin, cos)` of the jet.
    pub fn sin_cos(self) -> (Self, Self) {
        // s' = c a', c' = -s a' in coefficient form
        let mut sn = [0.0; LEN];
        let mut cs = [0.0; LEN];
        (sn[0], cs[0]) = self.c[0].sin_cos();
        for k in 1..LEN {
            let mut a = 0.0;
            let mut b = 0.0;
            for j in 1..=k {
                a += j as f64 * self.c[j] * cs[k - j];
                b -= j as f64 * self.c[j] * sn[k - j];
            }
            sn[k] = a / k as f64;
            cs[k] = b / k as f64;
        }
        (Jet { c: sn }, Jet { c: cs })
    }

    pub fn powi(self, e: u32) -> Self {
        let mut out = Jet::constant(1.0);
        let mut base = self;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out * base;
            }
            base = base * base;
            e >>= 1;
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.c;
        c.iter_mut().zip(o.c).for_each(|(a, b)| *a += b);
        Jet { c }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        let mut c = self.c;
        c.iter_mut().zip(o.c).for_each(|(a, b)| *a -= b);
        Jet { c }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; LEN];
        for (i, ci) in c.iter_mut().enumerate() {
            for j in 0..=i {
                *ci += self.c[j] * o.c[i - j];
            }
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, o: f64) -> Jet {
        let mut c = self.c;
        c[0] += o;
        Jet { c }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        self.scale(o)
    }
}

/// `max |f^(k)|` for `k = 0..=ORDER` over `samples` equispaced points of `[a, b]`.
pub fn derivative_sup<F: Fn(Jet) -> Jet>(f: F, a: f64, b: f64, samples: usize) -> [f64; LEN] {
    let mut out = [0.0f64; LEN];
    for i in 0..samples {
        let t = a + (b - a) * i as f64 / (samples - 1).max(1) as f64;
        let d = f(Jet::variable(t)).derivatives();
        for k in 0..LEN {
            out[k] = out[k].max(d[k].abs());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_square_matches_closed_form() {
        // d^k/dt^k exp(t^2) at t = 0.3
        let t = 0.3f64;
        let j = (Jet::variable(t) * Jet::variable(t)).exp();
        let e = (t * t).exp();
        let expect = [
            e,
            2.0 * t * e,
            (2.0 + 4.0 * t * t) * e,
            (12.0 * t + 8.0 * t.powi(3)) * e,
            (12.0 + 48.0 * t * t + 16.0 * t.powi(4)) * e,
        ];
        for k in 0..=ORDER {
            assert!((j.derivative(k) - expect[k]).abs() < 1e-12 * expect[k].abs().max(1.0));
        }
    }

    #[test]
    fn ln_inverts_exp() {
        let x = Jet::variable(0.7) * 2.0 + 1.0;
        let back = x.exp().ln();
        for k in 0..=ORDER {
            assert!((back.derivative(k) - x.derivative(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn recip_and_powi() {
        let x = Jet::variable(2.0);
        let r = x.recip();
        // d^k (1/t) = (-1)^k k! / t^{k+1}
        for k in 0..=ORDER {
            let expect = (-1f64).powi(k as i32) * FACTORIAL[k] / 2f64.powi(k as i32 + 1);
            assert!((r.derivative(k) - expect).abs() < 1e-14);
        }
        let c = x.powi(3);
        assert_eq!(c.derivative(0), 8.0);
        assert_eq!(c.derivative(1), 12.0);
        assert_eq!(c.derivative(2), 12.0);
        assert_eq!(c.derivative(3), 6.0);
        assert_eq!(c.derivative(4), 0.0);
    }

    #[test]
    fn sin_cos_derivatives() {
        let t = 0.7f64;
        let (s, c) = (Jet::variable(t) * Jet::variable(t)).sin_cos();
        // d/dt sin(t^2) = 2t cos(t^2); d2/dt2 cos(t^2) = -2 sin(t^2) - 4t^2 cos(t^2)
        assert!((s.derivative(1) - 2.0 * t * (t * t).cos()).abs() < 1e-14);
        let want = -2.0 * (t * t).sin() - 4.0 * t * t * (t * t).cos();
        assert!((c.derivative(2) - want).abs() < 1e-13);
    }

    #[test]
    fn derivative_sup_of_cubic() {
        let d = derivative_sup(|x| x.powi(3), -1.0, 2.0, 31);
        assert_eq!(d, [8.0, 12.0, 12.0, 6.0, 0.0]);
    }
}
