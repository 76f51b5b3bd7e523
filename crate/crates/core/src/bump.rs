//! Smooth steps and shell bumps built from `exp(-1/t)`.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::jet::Jet;

// Below this distance from the ends the step equals 0 or 1 to all printed
// digits, derivatives included (exp(-1000) underflows).
const FLAT: f64 = 1e-3;

fn e(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// `C^infinity` step: 0 for `t <= 0`, 1 for `t >= 1`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = e(t);
        a / (a + e(1.0 - t))
    }
}

/// [`smooth_step`] with derivatives through the jet order.
pub fn smooth_step_jet(t: Jet) -> Jet {
    let t0 = t.value();
    if t0 <= FLAT {
        Jet::zero()
    } else if t0 >= 1.0 - FLAT {
        Jet::constant(1.0)
    } else {
        let a = (-t.recip()).exp();
        let b = (-(Jet::constant(1.0) - t).recip()).exp();
        a / (a + b)
    }
}

/// Radial bump on `(0, infinity)` that vanishes outside `[2^lo0, 2^hi1]` and equals 1 on
/// `[2^lo1, 2^hi0]`, with transitions that are smooth steps in `log2 x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellBump {
    pub lo0: f64,
    pub lo1: f64,
    pub hi0: f64,
    pub hi1: f64,
}

impl ShellBump {
    /// Equal to 1 on `[1/2, 4]`, zero outside `[1/4, 8]`.
    pub const DYADIC: ShellBump = ShellBump { lo0: -2.0, lo1: -1.0, hi0: 2.0, hi1: 3.0 };
    /// Supported in `[1/2, 4]`, peaking at `sqrt 2` with wide transitions.
    pub const ANNULUS: ShellBump = ShellBump { lo0: -1.0, lo1: 0.5, hi0: 0.5, hi1: 2.0 };
    /// Equal to 1 on `[0.6, 3]`, zero outside `[1/2, 4]`.
    pub const NARROW: ShellBump = ShellBump { lo0: -1.0, lo1: -0.736_965_594_166_206, hi0: 1.584_962_500_721_156, hi1: 2.0 };

    pub fn support(&self) -> (f64, f64) {
        (self.lo0.exp2(), self.hi1.exp2())
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let l = x.log2();
        if l <= self.lo0 || l >= self.hi1 {
            return 0.0;
        }
        smooth_step((l - self.lo0) / (self.lo1 - self.lo0)) * (1.0 - smooth_step((l - self.hi0) / (self.hi1 - self.hi0)))
    }

    pub fn eval_jet(&self, x: Jet) -> Jet {
        let x0 = x.value();
        if !(x0 > 0.0) {
            return Jet::zero();
        }
        let l0 = x0.log2();
        if l0 <= self.lo0 || l0 >= self.hi1 {
            return Jet::zero();
        }
        let l = x.ln().scale(1.0 / LN_2);
        let up = smooth_step_jet((l + (-self.lo0)).scale(1.0 / (self.lo1 - self.lo0)));
        let down = smooth_step_jet((l + (-self.hi0)).scale(1.0 / (self.hi1 - self.hi0)));
        up * (Jet::constant(1.0) - down)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_limits_and_symmetry() {
        assert_eq!(smooth_step(-0.5), 0.0);
        assert_eq!(smooth_step(1.5), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        for i in 1..20 {
            let t = i as f64 / 20.0;
            assert!((smooth_step(t) + smooth_step(1.0 - t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn jet_derivative_matches_difference_quotient() {
        for &t in &[0.1, 0.37, 0.5, 0.81] {
            let j = smooth_step_jet(Jet::variable(t));
            let h = 1e-5;
            let fd = (smooth_step(t + h) - smooth_step(t - h)) / (2.0 * h);
            assert!((j.derivative(1) - fd).abs() < 1e-8, "t={t}");
            let fd2 = (j_at(t + h, 1) - j_at(t - h, 1)) / (2.0 * h);
            assert!((j.derivative(2) - fd2).abs() < 1e-6);
        }
    }

    fn j_at(t: f64, k: usize) -> f64 {
        smooth_step_jet(Jet::variable(t)).derivative(k)
    }

    #[test]
    fn shell_bump_plateau_and_support() {
        let b = ShellBump::DYADIC;
        assert_eq!(b.eval(0.25), 0.0);
        assert_eq!(b.eval(8.0), 0.0);
        assert_eq!(b.eval(0.2), 0.0);
        for x in [0.5, 1.0, 2.0, 4.0] {
            assert!((b.eval(x) - 1.0).abs() < 1e-15);
        }
        let n = ShellBump::NARROW;
        assert!((n.eval(0.6) - 1.0).abs() < 1e-12 && (n.eval(3.0) - 1.0).abs() < 1e-12);
        assert_eq!(n.eval(0.5), 0.0);
        assert_eq!(n.eval(4.0), 0.0);
        let (a, c) = n.support();
        assert_eq!((a, c), (0.5, 4.0));
    }
}
