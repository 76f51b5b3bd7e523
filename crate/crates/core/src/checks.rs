//! Report-producing checks shared by the command line and the test suite.

use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bernstein_sato::bs_roots;
use crate::bump::smooth_step;
use crate::dyadic::{moment_kill, RadialPartition};
use crate::error::{Error, Result};
use crate::geometry::{dilate2, dilate2_dyadic, rho, sphere_point, AnisotropyParams, Vec2};
use crate::report::{BoundReport, Comparison};
use crate::riesz::{
    delta_limit_probe, extrapolate_to_zero, homogeneity_defect, pair_iz, FourierKernel, RieszContext, SchwartzAtom,
    TestFunction,
};

/// Structural identities of the root multiset, checked exactly.
pub fn root_reports(p: &AnisotropyParams) -> Vec<BoundReport> {
    let roots = bs_roots(p);
    let q = p.q();
    let minus_one = Ratio::from_integer(-1);
    let max_ok = roots.iter().max() == Some(&-q);
    let mult = roots.iter().filter(|r| **r == minus_one).count();
    let mut mirrored: Vec<_> = roots.iter().map(|r| Ratio::from_integer(-2) - r).collect();
    mirrored.sort_by(|a, b| b.cmp(a));
    let asym = roots.iter().zip(&mirrored).filter(|(a, b)| a != b).count();
    let tag = format!("({}, {})", p.m(), p.n());
    vec![
        BoundReport::new("roots-max", "largest-root-is-minus-q")
            .regime(tag.clone())
            .note(format!("max root {}", roots.iter().max().map(|r| r.to_string()).unwrap_or_default()))
            .judge(if max_ok { 0.0 } else { 1.0 }, 0.0, Comparison::Within, 0.0),
        BoundReport::new("roots-minus-one", "double-root-at-minus-one")
            .regime(tag.clone())
            .judge(mult as f64, 2.0, Comparison::Within, 0.0),
        BoundReport::new("roots-symmetry", "roots-symmetric-about-minus-one")
            .regime(tag)
            .note("measured: number of roots r whose mirror -2 - r is missing")
            .judge(asym as f64, 0.0, Comparison::Within, 0.0),
    ]
}

/// `max |sum_j eta(2^j o u) - 1|` over log-uniform samples with
/// `rho(u)` in `[1e-6, 1e6]`.
pub fn partition_check(p: &AnisotropyParams, samples: usize, seed: u64) -> Result<BoundReport> {
    let part = RadialPartition::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..samples)
        .map(|_| (rng.gen_range(-6.0f64..6.0), rng.gen_range(0.0..2.0 * std::f64::consts::PI)))
        .collect();
    let devs: Vec<f64> = pts
        .par_iter()
        .map(|&(e, th)| {
            let r = 10f64.powf(e);
            let u = dilate2(p, r, sphere_point(p, th).v)?;
            let c = -r.log2().round() as i32;
            let mut s = 0.0;
            for j in c - 6..=c + 6 {
                s += part.eta(p, dilate2_dyadic(p, j as f64, u))?;
            }
            Ok((s - 1.0).abs())
        })
        .collect::<Result<_>>()?;
    let worst = devs.iter().cloned().fold(0.0, f64::max);
    Ok(BoundReport::new("partition", "dyadic-partition-of-unity")
        .note(format!("{samples} samples, seed {seed}"))
        .judge(worst, 0.0, Comparison::AtMost, 1e-12))
}

/// Test functions for the pairing checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    Gaussian,
    Shifted,
    /// Vanishes at the origin.
    Vanishing,
}

impl AtomKind {
    pub fn build(self) -> SchwartzAtom {
        match self {
            AtomKind::Gaussian => SchwartzAtom::gaussian(),
            AtomKind::Shifted => SchwartzAtom::shifted_gaussian(Vec2::new(0.3, -0.2)),
            AtomKind::Vanishing => SchwartzAtom::new(Vec2::ZERO, &[((2, 0), 1.0), ((0, 1), 0.5)]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AtomKind::Gaussian => "gaussian",
            AtomKind::Shifted => "shifted",
            AtomKind::Vanishing => "vanishing",
        }
    }
}

impl std::str::FromStr for AtomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(AtomKind::Gaussian),
            "shifted" => Ok(AtomKind::Shifted),
            "vanishing" => Ok(AtomKind::Vanishing),
            _ => Err(Error::Domain(format!("unknown atom '{s}' (gaussian, shifted, vanishing)"))),
        }
    }
}

/// `<I^z, phi>`. Near `z = 0` the value is compared with `phi(0)` at
/// tolerance `max(1e-2, 10 |z|)`; otherwise only finiteness is required.
pub fn pairing_check(p: &AnisotropyParams, z: Complex64, atom: AtomKind, tol: f64) -> Result<BoundReport> {
    let ctx = RieszContext::new(*p, z)?;
    let phi = atom.build();
    let pr = pair_iz(&ctx, &phi, tol)?;
    let rep = BoundReport::new("pair", "riesz-pairing")
        .regime(atom.name())
        .note(format!("z = {z}, value = {}", pr.value))
        .note(format!("I1 = {}, delta term = {}, I3 = {}", pr.i1, pr.delta_term, pr.i3));
    let phi0 = phi.at_origin();
    Ok(rep.note(format!("|value - phi(0)| = {:.3e}", (pr.value - phi0).norm())).judge(pr.value.norm(), f64::NAN, Comparison::Finite, 0.0))
}

/// Relative defect of `<I^z, phi_delta> = delta^{z-Q} <I^z, phi>`.
pub fn homogeneity_check(p: &AnisotropyParams, z: Complex64, deltas: &[f64], tol: f64) -> Result<Vec<BoundReport>> {
    let ctx = RieszContext::new(*p, z)?;
    let phi = SchwartzAtom::gaussian();
    deltas
        .iter()
        .map(|&d| {
            let (defect, base) = homogeneity_defect(&ctx, &phi, d, tol)?;
            Ok(BoundReport::new("homogeneity", "riesz-homogeneity")
                .regime(format!("delta = {d}"))
                .note(format!("z = {z}"))
                .judge(defect / base, 0.0, Comparison::AtMost, 1e-6))
        })
        .collect()
}

/// Quadratic extrapolation of `<I^z, phi>` over `z = 0.1, 0.01, 0.001` to `z = 0`.
pub fn delta_limit_check(p: &AnisotropyParams, atoms: &[AtomKind], tol: f64) -> Result<Vec<BoundReport>> {
    let ctx = RieszContext::new(*p, Complex64::new(0.1, 0.0))?;
    let zs = [1e-1, 1e-2, 1e-3];
    atoms
        .iter()
        .map(|&a| {
            let phi = a.build();
            let vals = delta_limit_probe(&ctx, &phi, &zs, tol)?;
            let lim = extrapolate_to_zero(&zs, &vals)?;
            let phi0 = phi.at_origin();
            Ok(BoundReport::new("delta-limit", "riesz-delta-limit")
                .regime(a.name())
                .data(zs.to_vec(), vals.iter().map(|v| v.re).collect())
                .note(format!("extrapolated {lim}, phi(0) = {phi0}"))
                .judge((lim - phi0).norm(), 0.0, Comparison::AtMost, 1e-3))
        })
        .collect()
}

/// `|I^z-hat(xi)| rho(xi)^{Re z}` along one ray: finite on the grid, with
/// the means over the top two decades within 10% of each other.
pub fn fourier_decay_check(p: &AnisotropyParams, z: Complex64, direction: Vec2, rho_grid: &[f64], tol: f64) -> Result<BoundReport> {
    if rho_grid.len() < 4 {
        return Err(Error::GridTooShort { got: rho_grid.len(), need: 4 });
    }
    let ctx = RieszContext::new(*p, z)?;
    let fk = FourierKernel::new(&ctx)?;
    let omega = dilate2(p, 1.0 / rho(p, direction)?, direction)?;
    let ratios: Vec<f64> = rho_grid
        .par_iter()
        .map(|&r| Ok(fk.eval(dilate2(p, r, omega)?, tol)?.value.norm() * r.powf(z.re)))
        .collect::<Result<_>>()?;
    let top = rho_grid.iter().cloned().fold(0.0, f64::max);
    let mean = |lo: f64, hi: f64| -> f64 {
        let v: Vec<f64> = rho_grid.iter().zip(&ratios).filter(|(r, _)| **r > lo && **r <= hi).map(|(_, v)| *v).collect();
        v.iter().sum::<f64>() / v.len().max(1) as f64
    };
    let (a, b) = (mean(top / 10.0, top), mean(top / 100.0, top / 10.0));
    let variation = (a / b - 1.0).abs();
    let sup = ratios.iter().cloned().fold(0.0, f64::max);
    let mut rep = BoundReport::new("fourier-decay", "riesz-fourier-decay")
        .regime(format!("Re z = {}", z.re))
        .data(rho_grid.to_vec(), ratios)
        .note(format!("sup ratio {sup:.6e}"))
        .note("measured: relative change of the mean ratio between the top two decades")
        .judge(variation, 0.0, Comparison::AtMost, 0.1);
    if !sup.is_finite() {
        rep = rep.fail("ratio not finite");
    }
    Ok(rep)
}

/// Bump on `[1, 2]` used by the moment-killing checks.
pub fn moment_test_bump(x: f64) -> f64 {
    smooth_step((x - 1.0) * 4.0) * smooth_step((2.0 - x) * 4.0)
}

/// One pass (first moment) and the `l <= 3` variant, on the active range and
/// one scale on each side, plus reconstruction on a grid.
pub fn moment_kill_checks() -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    let grid: Vec<f64> = (0..200).map(|i| 0.9 + 1.2 * i as f64 / 199.0).collect();
    for (orders, id, tol) in [(vec![1u32], "moments-one-pass", 1e-10), (vec![0, 1, 2, 3], "moments-three-passes", 1e-9)] {
        let mk = moment_kill(moment_test_bump, (1.0, 2.0), &orders)?;
        let (lo, hi) = mk.active_range();
        let ks: Vec<i32> = (lo - 1..=hi + 1).collect();
        let mut worst = 0.0f64;
        for &k in &ks {
            for &l in &orders {
                if l > 0 || orders.len() > 1 {
                    worst = worst.max(mk.piece_moment(k, l).abs());
                }
            }
        }
        out.push(
            BoundReport::new(id, "moment-killing")
                .note(format!("orders {orders:?}, scales {}..={}", lo - 1, hi + 1))
                .judge(worst, 0.0, Comparison::AtMost, tol),
        );
        let rec = grid.iter().map(|&x| (mk.reconstruct(x) - moment_test_bump(x)).abs()).fold(0.0, f64::max);
        out.push(
            BoundReport::new(format!("{id}-reconstruction"), "moment-killing")
                .note(format!("{} grid points", grid.len()))
                .judge(rec, 0.0, Comparison::AtMost, 1e-10),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_pass_for_small_pairs() {
        for n in 2..=6 {
            for m in 1..n {
                let p = AnisotropyParams::new(m, n).unwrap();
                assert!(root_reports(&p).iter().all(|r| r.pass), "({m}, {n})");
            }
        }
    }

    #[test]
    fn partition_is_deterministic() {
        let p = AnisotropyParams::new(2, 3).unwrap();
        let a = partition_check(&p, 50, 3).unwrap();
        let b = partition_check(&p, 50, 3).unwrap();
        assert!(a.pass);
        assert_eq!(a.to_json_line(), b.to_json_line());
    }

    #[test]
    fn atom_names_round_trip() {
        for a in [AtomKind::Gaussian, AtomKind::Shifted, AtomKind::Vanishing] {
            assert_eq!(a.name().parse::<AtomKind>().unwrap(), a);
        }
        assert_eq!(AtomKind::Vanishing.build().at_origin().norm(), 0.0);
    }
}
