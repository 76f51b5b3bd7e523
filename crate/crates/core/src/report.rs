//! Machine-readable results of the numerical checks.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::linear_fit;

/// How `measured` is compared with `claimed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// `measured <= claimed + tolerance`
    AtMost,
    /// `measured >= claimed - tolerance`
    AtLeast,
    /// `|measured - claimed| <= tolerance`
    Within,
    /// `measured` is finite; `claimed` is informational.
    Finite,
}

impl Comparison {
    pub fn holds(self, measured: f64, claimed: f64, tolerance: f64) -> bool {
        if !measured.is_finite() {
            return false;
        }
        match self {
            Comparison::AtMost => measured <= claimed + tolerance,
            Comparison::AtLeast => measured >= claimed - tolerance,
            Comparison::Within => (measured - claimed).abs() <= tolerance,
            Comparison::Finite => true,
        }
    }
}

/// One verified bound. Serialized as a single JSON line.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub check_id: String,
    /// Name of the estimate or identity being checked.
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<String>,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_exponent: Option<f64>,
    pub measured: f64,
    pub claimed: f64,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(check_id: impl Into<String>, anchor: impl Into<String>) -> Self {
        BoundReport {
            check_id: check_id.into(),
            anchor: anchor.into(),
            regime: None,
            grid: Vec::new(),
            values: Vec::new(),
            fitted_exponent: None,
            claimed_exponent: None,
            measured: f64::NAN,
            claimed: f64::NAN,
            comparison: Comparison::Finite,
            tolerance: 0.0,
            pass: false,
            notes: Vec::new(),
        }
    }

    pub fn regime(mut self, r: impl Into<String>) -> Self {
        self.regime = Some(r.into());
        self
    }

    pub fn data(mut self, grid: Vec<f64>, values: Vec<f64>) -> Self {
        self.grid = grid;
        self.values = values;
        self
    }

    pub fn exponents(mut self, fitted: Option<f64>, claimed: Option<f64>) -> Self {
        self.fitted_exponent = fitted;
        self.claimed_exponent = claimed;
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    /// Sets the headline comparison and computes `pass`.
    pub fn judge(mut self, measured: f64, claimed: f64, cmp: Comparison, tolerance: f64) -> Self {
        self.measured = measured;
        self.claimed = claimed;
        self.comparison = cmp;
        self.tolerance = tolerance;
        self.pass = cmp.holds(measured, claimed, tolerance);
        self
    }

    /// Forces failure, e.g. when an auxiliary condition does not hold.
    pub fn fail(mut self, why: impl Into<String>) -> Self {
        self.pass = false;
        self.notes.push(why.into());
        self
    }

    pub fn to_json_line(&self) -> String {
        // NaN is not valid JSON; serde_json writes it as null
        serde_json::to_string(self).unwrap_or_else(|e| format!("{{\"check_id\":\"{}\",\"error\":\"{e}\"}}", self.check_id))
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let bound = match self.comparison {
            Comparison::AtMost => format!("<= {:.5e} + {:.1e}", self.claimed, self.tolerance),
            Comparison::AtLeast => format!(">= {:.5e} - {:.1e}", self.claimed, self.tolerance),
            Comparison::Within => format!("= {:.5e} +- {:.1e}", self.claimed, self.tolerance),
            Comparison::Finite => "finite".to_string(),
        };
        format!(
            "{:<5} {:<26} {:<28} {:>13.5e} {bound}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check_id,
            self.regime.as_deref().unwrap_or("-"),
            self.measured,
        )
    }
}

pub fn write_jsonl<W: Write>(mut w: W, reports: &[BoundReport]) -> Result<()> {
    for r in reports {
        writeln!(w, "{}", r.to_json_line()).map_err(|e| Error::Domain(format!("write failed: {e}")))?;
    }
    Ok(())
}

/// Least-squares slope of `log y` against `log x` over the upper half of the
/// points with `y > floor`. Needs at least two such points.
pub fn fit_upper_half(x: &[f64], y: &[f64], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(&a, &b)| a > 0.0 && b.is_finite() && b > floor)
        .map(|(&a, &b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let top = &pts[pts.len() / 2..];
    let top = if top.len() < 2 { &pts[pts.len() - 2..] } else { top };
    let (xs, ys): (Vec<f64>, Vec<f64>) = top.iter().copied().unzip();
    Some(linear_fit(&xs, &ys).0)
}

/// As [`fit_upper_half`] but over the lower half, for decay toward `x -> 0`.
pub fn fit_lower_half(x: &[f64], y: &[f64], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(&a, &b)| a > 0.0 && b.is_finite() && b > floor)
        .map(|(&a, &b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len().div_ceil(2).max(2);
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts[..k].iter().copied().unzip();
    Some(linear_fit(&xs, &ys).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_power_laws() {
        let x: Vec<f64> = (0..10).map(|i| 10f64.powf(i as f64 / 3.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(-0.5)).collect();
        assert!((fit_upper_half(&x, &y, 0.0).unwrap() + 0.5).abs() < 1e-12);
        assert!((fit_lower_half(&x, &y, 0.0).unwrap() + 0.5).abs() < 1e-12);
        assert!(fit_upper_half(&x, &y, 1e9).is_none());
    }

    #[test]
    fn report_serializes_nan_as_null() {
        let r = BoundReport::new("x", "y").judge(f64::NAN, 1.0, Comparison::AtMost, 0.0);
        assert!(!r.pass);
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert!(v["measured"].is_null());
        assert_eq!(v["comparison"], "at-most");
    }
}
