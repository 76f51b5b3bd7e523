//! Property tests for the exact and dyadic invariances.

use adapted_kernels::bernstein_sato::bs_roots;
use adapted_kernels::cli::parse_complex;
use adapted_kernels::dyadic::{RadialPartition, SeparableAtom};
use adapted_kernels::geometry::{dilate2, dilate3, rho, AnisotropyParams, Vec2, Vec3};
use adapted_kernels::multiplier::MultiplierContext;
use adapted_kernels::Rational;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = AnisotropyParams> {
    (2u32..=8).prop_flat_map(|n| (1..n, Just(n))).prop_map(|(m, n)| AnisotropyParams::new(m, n).unwrap())
}

proptest! {
    #[test]
    fn roots_are_symmetric_about_minus_one(p in params()) {
        let mut roots = bs_roots(&p);
        roots.sort();
        let reflected: Vec<Rational> = roots.iter().rev().map(|r| Rational::from_integer(-2) - r).collect();
        prop_assert_eq!(&roots, &reflected);
        prop_assert_eq!(*roots.last().unwrap(), -p.q());
        prop_assert_eq!(roots.iter().filter(|r| **r == Rational::from_integer(-1)).count(), 2);
    }

    #[test]
    fn rho_is_homogeneous(p in params(), x in -3.0f64..3.0, y in -3.0f64..3.0, e in -20.0f64..20.0) {
        let u = Vec2::new(x, y);
        let d = e.exp2();
        let r = rho(&p, u).unwrap();
        let rd = rho(&p, dilate2(&p, d, u).unwrap()).unwrap();
        prop_assert!((rd - d * r).abs() <= 1e-12 * d * r.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn dilations_compose(p in params(), x in -3.0f64..3.0, y in -3.0f64..3.0, a in -8.0f64..8.0, b in -8.0f64..8.0) {
        let u = Vec2::new(x, y);
        let once = dilate2(&p, (a + b).exp2(), u).unwrap();
        let twice = dilate2(&p, a.exp2(), dilate2(&p, b.exp2(), u).unwrap()).unwrap();
        prop_assert!((once.x - twice.x).abs() <= 1e-12 * once.x.abs().max(1e-300));
        prop_assert!((once.y - twice.y).abs() <= 1e-12 * once.y.abs().max(1e-300));
    }

    #[test]
    fn partition_sums_to_one(p in params(), theta in 0.0f64..std::f64::consts::TAU, e in -18.0f64..18.0) {
        let eta = RadialPartition::default();
        let u = dilate2(&p, e.exp2(), Vec2::new(theta.cos(), theta.sin())).unwrap();
        let sum: f64 = (-80..=80).map(|j| eta.eta(&p, dilate2(&p, (j as f64).exp2(), u).unwrap()).unwrap()).sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12, "sum = {sum}");
    }

    #[test]
    fn complex_display_round_trips(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        let text = format!("{re}{}{}i", if im.is_sign_negative() { "" } else { "+" }, im);
        let z = parse_complex(&text).unwrap();
        prop_assert_eq!((z.re, z.im), (re, im));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn khat1_is_invariant_under_dyadic_dilation(
        x1 in 0.1f64..4.0,
        sign in prop::bool::ANY,
        theta in 0.0f64..std::f64::consts::TAU,
        k in -4i32..=4,
    ) {
        let p = AnisotropyParams::new(2, 3).unwrap();
        let ctx = MultiplierContext::new(SeparableAtom::standard(p).unwrap());
        let xi = Vec3 { x1: if sign { x1 } else { -x1 }, x: Vec2::new(theta.cos(), theta.sin()) };
        let moved = dilate3(&p, (k as f64).exp2(), xi).unwrap();
        let a = ctx.khat1(xi.x1, xi.x).unwrap();
        let b = ctx.khat1(moved.x1, moved.x).unwrap();
        prop_assert!((a.value - b.value).norm() <= 1e-10 + a.error + b.error, "{} vs {}", a.value, b.value);
    }
}
