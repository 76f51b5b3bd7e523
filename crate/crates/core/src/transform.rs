//! Fourier transforms of functions on R^2 that are even in each variable,
//! tabulated once on a tensor Gauss-Legendre grid over a quadrant box.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::geometry::Vec2;
use crate::quad::gauss_legendre;

// 16-point panels stay accurate while a panel holds at most ~1.5 wavelengths.
const PER_PANEL: f64 = 1.5 * 2.0 * PI;

/// `F(zeta) = int f(u) exp(-i zeta . u) du` for `f` even in `u2` and in `u3`
/// and negligible outside `[-b2, b2] x [-b3, b3]`.
#[derive(Debug, Clone)]
pub struct EvenTransform {
    u2: Vec<f64>,
    u3: Vec<f64>,
    /// `4 w_i w_k f(u_i, u_k)`, row-major in `u2`.
    re: Vec<f64>,
    im: Vec<f64>,
    /// Per row, the range of columns holding non-negligible entries.
    rows: Vec<(usize, usize)>,
    /// Per-axis frequencies the grid resolves.
    pub max_freq: (f64, f64),
}

fn axis(b: f64, freq: f64) -> (Vec<f64>, Vec<f64>, f64) {
    let (gx, gw) = gauss_legendre(16);
    let np = ((freq * b / PER_PANEL).ceil() as usize).max(2);
    let h = b / np as f64;
    let mut x = Vec::with_capacity(16 * np);
    let mut w = Vec::with_capacity(16 * np);
    for k in 0..np {
        let c = h * (k as f64 + 0.5);
        for (a, wa) in gx.iter().zip(&gw) {
            x.push(c + 0.5 * h * a);
            w.push(0.5 * h * wa);
        }
    }
    (x, w, PER_PANEL * np as f64 / b)
}

impl EvenTransform {
    /// Tabulates `f` on `[0, b2] x [0, b3]` finely enough to resolve
    /// frequencies up to `freq` on each axis.
    pub fn new<F>(b: (f64, f64), freq: f64, f: F) -> Self
    where
        F: Fn(Vec2) -> Complex64 + Sync,
    {
        let (u2, w2, f2) = axis(b.0, freq);
        let (u3, w3, f3) = axis(b.1, freq);
        let table: Vec<Complex64> = u2
            .par_iter()
            .zip(&w2)
            .flat_map_iter(|(&a, &wa)| {
                let (u3, w3, f) = (&u3, &w3, &f);
                u3.iter().zip(w3).map(move |(&c, &wc)| f(Vec2::new(a, c)) * (4.0 * wa * wc))
            })
            .collect();
        let nk = u3.len();
        let peak = table.iter().map(|t| t.norm()).fold(0.0, f64::max);
        let keep = |t: &Complex64| t.norm() > 1e-20 * peak;
        let rows = (0..u2.len())
            .map(|i| {
                let row = &table[i * nk..(i + 1) * nk];
                match row.iter().position(keep) {
                    Some(a) => (a, nk - row.iter().rev().position(keep).unwrap_or(0)),
                    None => (0, 0),
                }
            })
            .collect();
        EvenTransform {
            re: table.iter().map(|t| t.re).collect(),
            im: table.iter().map(|t| t.im).collect(),
            u2,
            u3,
            rows,
            max_freq: (f2, f3),
        }
    }

    /// `int f(u) u2^a u3^b du` for even `a`, `b`.
    pub fn moment(&self, a: i32, b: i32) -> Complex64 {
        let nk = self.u3.len();
        let mut out = Complex64::new(0.0, 0.0);
        for (i, x) in self.u2.iter().enumerate() {
            let (lo, hi) = self.rows[i];
            for k in lo..hi {
                out += Complex64::new(self.re[i * nk + k], self.im[i * nk + k]) * (x.powi(a) * self.u3[k].powi(b));
            }
        }
        out
    }

    pub fn eval(&self, zeta: Vec2) -> Complex64 {
        let nk = self.u3.len();
        let mut out = Complex64::new(0.0, 0.0);
        let c3: Vec<f64> = self.u3.iter().map(|b| (zeta.y * b).cos()).collect();
        for (i, a) in self.u2.iter().enumerate() {
            let (lo, hi) = self.rows[i];
            if lo == hi {
                continue;
            }
            let c = &c3[lo..hi];
            let base = i * nk;
            let re = dot(&self.re[base + lo..base + hi], c);
            let im = dot(&self.im[base + lo..base + hi], c);
            out += Complex64::new(re, im) * (zeta.x * a).cos();
        }
        out
    }

    /// Whether `zeta` lies inside the resolved frequency ellipse.
    pub fn resolves(&self, zeta: Vec2) -> bool {
        (zeta.x / self.max_freq.0).powi(2) + (zeta.y / self.max_freq.1).powi(2) <= 1.0
    }

    /// Largest `|F|` sampled on the boundary of the resolved ellipse.
    pub fn edge_magnitude(&self) -> f64 {
        (0..16)
            .map(|k| {
                let a = 0.5 * PI * k as f64 / 15.0;
                self.eval(Vec2::new(self.max_freq.0 * a.cos(), self.max_freq.1 * a.sin())).norm()
            })
            .fold(0.0, f64::max)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    let tail: f64 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
    acc[0] + acc[1] + acc[2] + acc[3] + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_transform() {
        // int exp(-pi |u|^2) exp(-i zeta u) du = exp(-|zeta|^2 / (4 pi))
        let t = EvenTransform::new((6.0, 6.0), 40.0, |u| Complex64::new((-PI * u.dot(u)).exp(), 0.0));
        for z in [Vec2::ZERO, Vec2::new(1.0, 2.0), Vec2::new(-7.0, 3.5)] {
            let want = (-z.dot(z) / (4.0 * PI)).exp();
            assert!((t.eval(z).re - want).abs() < 1e-14, "{z:?}");
        }
        assert!((t.moment(2, 0).re - 1.0 / (2.0 * PI)).abs() < 1e-13);
        assert!(t.resolves(Vec2::new(30.0, 0.0)) && !t.resolves(Vec2::new(60.0, 60.0)));
    }
}
