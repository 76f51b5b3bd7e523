//! Exact root data of the Bernstein-Sato polynomial of `rho(u) = u2^{2n} + u3^{2m}`
//! and the derived quantities that govern the poles of `I^z`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::geometry::AnisotropyParams;
use crate::Rational;

/// Roots of `b_rho(s)` with multiplicity, sorted decreasing.
///
/// `b_rho(s) / (s + 1)` has the simple roots `-p1/(2n) - p2/(2m)` with
/// `1 <= p1 <= 2n-1`, `1 <= p2 <= 2m-1`; repeated values of the enumeration
/// collapse. The extra factor `s + 1` makes `-1` a double root.
pub fn bs_roots(p: &AnisotropyParams) -> Vec<Rational> {
    let mut roots = distinct_enumeration(p);
    roots.push(Ratio::from_integer(-1));
    roots.sort_by(|a, b| b.cmp(a));
    roots
}

fn distinct_enumeration(p: &AnisotropyParams) -> Vec<Rational> {
    let (n, m) = (p.n() as i64, p.m() as i64);
    let mut out: Vec<Rational> = Vec::new();
    for p1 in 1..2 * n {
        for p2 in 1..2 * m {
            out.push(-Ratio::new(p1, 2 * n) - Ratio::new(p2, 2 * m));
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out.dedup();
    out
}

/// Distinct roots in `(-Q-1, -Q]`, decreasing; the first is `-Q`.
pub fn strip_zeros(p: &AnisotropyParams) -> Vec<Rational> {
    let q = p.q();
    let lo = -q - 1;
    let mut z: Vec<Rational> = bs_roots(p).into_iter().filter(|r| *r > lo && *r <= -q).collect();
    z.dedup();
    z
}

/// Offsets `c` such that `G(z) = prod Gamma(z + c)`: `1 - Q` followed by
/// `-zeta_j = -(Q + s_j)` for the distinct strip zeros `s_2, ..., s_h`.
pub fn gamma_shifts(p: &AnisotropyParams) -> Vec<Rational> {
    let q = p.q();
    let mut out = vec![Ratio::from_integer(1) - q];
    out.extend(strip_zeros(p).into_iter().skip(1).map(|s| -(q + s)));
    out
}

/// Pole locations `Q + s_j - k`, `k = 0..=kmax`, with their orders.
/// The points `-1 + Q - k` coming from the double root are of order two.
pub fn pole_set(p: &AnisotropyParams, kmax: u32) -> BTreeMap<Rational, u32> {
    let q = p.q();
    let minus_one = Ratio::from_integer(-1);
    let mut out = BTreeMap::new();
    for s in strip_zeros(p) {
        let order = if s == minus_one { 2 } else { 1 };
        for k in 0..=kmax as i64 {
            out.insert(q + s - k, order);
        }
    }
    out
}

/// All root data for one parameter pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    pub params: AnisotropyParams,
    pub roots: Vec<Rational>,
    pub strip_zeros: Vec<Rational>,
    pub zetas: Vec<Rational>,
    pub gamma_shifts: Vec<Rational>,
    pub pole_orders: BTreeMap<Rational, u32>,
}

impl RootSystem {
    /// Builds the root system; poles are listed for `k = 0..=kmax`.
    pub fn new(p: &AnisotropyParams, kmax: u32) -> Self {
        let strip = strip_zeros(p);
        let q = p.q();
        RootSystem {
            params: *p,
            roots: bs_roots(p),
            zetas: strip.iter().map(|s| q + s).collect(),
            strip_zeros: strip,
            gamma_shifts: gamma_shifts(p),
            pole_orders: pole_set(p, kmax),
        }
    }

    /// Number `h` of distinct strip zeros.
    pub fn h(&self) -> usize {
        self.strip_zeros.len()
    }

    /// `min(1/(2n), -zeta_2, 1)`: `I^z` is given by the regularized pairing for
    /// `Re z` greater than minus this value.
    pub fn strip_margin(&self) -> f64 {
        let z2 = self.zetas.get(1).map(|z| -to_f64(*z)).unwrap_or(1.0);
        self.params.e2().min(z2).min(1.0)
    }
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

struct Fractions<'a>(&'a [Rational]);

impl Serialize for Fractions<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|r| r.to_string()))
    }
}

struct Poles<'a>(&'a BTreeMap<Rational, u32>);

impl Serialize for Poles<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().rev() {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

impl Serialize for RootSystem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RootSystem", 9)?;
        st.serialize_field("m", &self.params.m())?;
        st.serialize_field("n", &self.params.n())?;
        st.serialize_field("Q", &self.params.q().to_string())?;
        st.serialize_field("roots", &Fractions(&self.roots))?;
        st.serialize_field("strip_zeros", &Fractions(&self.strip_zeros))?;
        st.serialize_field("h", &self.h())?;
        st.serialize_field("zetas", &Fractions(&self.zetas))?;
        st.serialize_field("gamma_shifts", &Fractions(&self.gamma_shifts))?;
        st.serialize_field("pole_orders", &Poles(&self.pole_orders))?;
        st.end()
    }
}
