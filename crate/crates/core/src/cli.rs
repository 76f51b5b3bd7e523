//! Command-line driver: `roots` and `verify <check>`.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails or a
//! numerical step errors, 2 on usage errors and invalid parameters.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;

use crate::bernstein_sato::RootSystem;
use crate::checks::{fourier_decay_check, moment_kill_checks, pairing_check, partition_check, root_reports, AtomKind};
use crate::dyadic::{BetaProfile, SeparableAtom, Sidedness};
use crate::error::{Error, Result};
use crate::geometry::{AnisotropyParams, Vec2};
use crate::multiplier::{
    besov_piece_reports, bz_fourier_decay, bz_l1_lipschitz, identity_cases, identity_reports, khat1_reports,
    khat2z_report, marcinkiewicz_base_grid, marcinkiewicz_reports, marcinkiewicz_scan, write_marcinkiewicz_csv,
    BzContext, MultiplierContext,
};
use crate::oscillatory::{decay_scan, eta_decay_scan, regime_atom, DecayScan, Regime, GENERIC_DIRECTION};
use crate::quad::log_space;
use crate::report::{write_jsonl, BoundReport};

#[derive(Debug, Parser)]
#[command(name = "adapted-kernels", version, about = "Numerical checks for product kernels adapted to the curve (t^m, t^n)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Bernstein-Sato roots, strip zeros, Gamma shifts and poles.
    Roots(RootsArgs),
    /// Run one family of numerical checks and emit JSON-lines reports.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[arg(short = 'm')]
    pub m: u32,
    #[arg(short = 'n')]
    pub n: u32,
    /// Number of pole shifts `k` to list.
    #[arg(long, default_value_t = 2)]
    pub kmax: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// Pair I^z with a Schwartz test function.
    Pair(Common),
    /// Decay of the Fourier transform of I^z along a ray.
    FourierDecay(Common),
    /// Dyadic partition of unity in the plane.
    Partition(Common),
    /// Moment killing on the line.
    Moments(Common),
    /// Decay of the oscillatory integral in one regime (vdc, small, cone, eta, all).
    Oscdecay(Common),
    /// Multiplier sums: boundedness, Marcinkiewicz differences, K2z.
    Multscan(Common),
    /// Direct 3D quadrature of m_J against the 1D identity.
    Identity(Common),
    /// L1-Lipschitz and Fourier decay estimates for the truncated kernel B^z.
    Bzlip(Common),
    /// Besov-type hypotheses for the smoothed piece psi_0.
    Besov(Common),
}

impl Check {
    fn common(&self) -> &Common {
        match self {
            Check::Pair(c)
            | Check::FourierDecay(c)
            | Check::Partition(c)
            | Check::Moments(c)
            | Check::Oscdecay(c)
            | Check::Multscan(c)
            | Check::Identity(c)
            | Check::Bzlip(c)
            | Check::Besov(c) => c,
        }
    }
}

/// Options shared by the checks. Every option can also come from a flat JSON
/// object given by `--config`; flags take precedence.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Common {
    #[arg(short = 'm')]
    pub m: Option<u32>,
    #[arg(short = 'n')]
    pub n: Option<u32>,
    /// Complex parameter, e.g. `0.7+0.3i`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub grid_min: Option<f64>,
    #[arg(long)]
    pub grid_max: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// JSON-lines output; without it reports go to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV output for tabular data (Marcinkiewicz table).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub regime: Option<String>,
    #[arg(long)]
    pub atom: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Common {
    /// Fills unset options from the config file.
    fn resolve(&self) -> Result<Common> {
        let Some(path) = &self.config else {
            return Ok(self.clone());
        };
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidParams(format!("{}: {e}", path.display())))?;
        let file: Common = serde_json::from_str(&text).map_err(|e| Error::InvalidParams(format!("{}: {e}", path.display())))?;
        Ok(Common {
            m: self.m.or(file.m),
            n: self.n.or(file.n),
            z: self.z.clone().or(file.z),
            tol: self.tol.or(file.tol),
            grid_min: self.grid_min.or(file.grid_min),
            grid_max: self.grid_max.or(file.grid_max),
            grid_points: self.grid_points.or(file.grid_points),
            out: self.out.clone().or(file.out),
            csv: self.csv.clone().or(file.csv),
            seed: self.seed.or(file.seed),
            samples: self.samples.or(file.samples),
            regime: self.regime.clone().or(file.regime),
            atom: self.atom.clone().or(file.atom),
            config: None,
        })
    }

    fn params(&self) -> Result<AnisotropyParams> {
        AnisotropyParams::new(self.m.unwrap_or(2), self.n.unwrap_or(3))
    }

    fn z_or(&self, default: Complex64) -> Result<Complex64> {
        self.z.as_deref().map_or(Ok(default), parse_complex)
    }

    fn grid_or(&self, lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
        let (lo, hi, k) = (self.grid_min.unwrap_or(lo), self.grid_max.unwrap_or(hi), self.grid_points.unwrap_or(points));
        if !(lo > 0.0 && hi > lo) || k < 2 {
            return Err(Error::InvalidParams(format!("bad grid [{lo}, {hi}] with {k} points")));
        }
        Ok(log_space(lo, hi, k))
    }

    fn grid_given(&self) -> bool {
        self.grid_min.is_some() || self.grid_max.is_some() || self.grid_points.is_some()
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidParams(format!("cannot parse complex number '{s}'"));
    let num = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0));
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(body[..k].parse::<f64>().map_err(|_| bad())?, num(&body[k..])?)),
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match cli.command {
        Command::Roots(a) => cmd_roots(&a, stdout, stderr),
        Command::Verify { check } => cmd_verify(&check, stdout, stderr),
    }
}

fn usage(stderr: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(stderr, "error: {e}");
    2
}

pub fn cmd_roots(a: &RootsArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let p = match AnisotropyParams::new(a.m, a.n) {
        Ok(p) => p,
        Err(e) => return usage(stderr, &e),
    };
    let rs = RootSystem::new(&p, a.kmax);
    let list = |v: &[crate::Rational]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ");
    let mut factors: Vec<(crate::Rational, usize)> = Vec::new();
    for r in &rs.roots {
        match factors.last_mut() {
            Some((v, k)) if v == r => *k += 1,
            _ => factors.push((*r, 1)),
        }
    }
    let fac = factors
        .iter()
        .map(|(r, k)| if *k > 1 { format!("(s + {})^{k}", -r) } else { format!("(s + {})", -r) })
        .collect::<Vec<_>>()
        .join(" ");
    let poles = rs.pole_orders.iter().rev().map(|(r, k)| format!("{r} (order {k})")).collect::<Vec<_>>().join(", ");
    let reports = root_reports(&p);
    let _ = writeln!(stdout, "(m, n) = ({}, {}), Q = {}", p.m(), p.n(), p.q());
    let _ = writeln!(stdout, "b(s) = {fac}");
    let _ = writeln!(stdout, "roots ({}): {}", rs.roots.len(), list(&rs.roots));
    let _ = writeln!(stdout, "strip zeros: {}", list(&rs.strip_zeros));
    let _ = writeln!(stdout, "gamma shifts: {}", list(&rs.gamma_shifts));
    let _ = writeln!(stdout, "poles (k <= {}): {poles}", a.kmax);
    finish(&reports, a.out.as_deref(), stdout, stderr, true)
}

pub fn cmd_verify(check: &Check, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let c = match check.common().resolve() {
        Ok(c) => c,
        Err(e) => return usage(stderr, &e),
    };
    let p = match c.params() {
        Ok(p) => p,
        Err(e) => return usage(stderr, &e),
    };
    let reports = match run_check(check, &c, p) {
        Ok(r) => r,
        Err(e @ Error::InvalidParams(_)) => return usage(stderr, &e),
        Err(e) => vec![BoundReport::new(check_name(check), "numerical-failure").fail(e.to_string())],
    };
    finish(&reports, c.out.as_deref(), stdout, stderr, false)
}

fn check_name(check: &Check) -> &'static str {
    match check {
        Check::Pair(_) => "pair",
        Check::FourierDecay(_) => "fourier-decay",
        Check::Partition(_) => "partition",
        Check::Moments(_) => "moments",
        Check::Oscdecay(_) => "oscdecay",
        Check::Multscan(_) => "multscan",
        Check::Identity(_) => "identity",
        Check::Bzlip(_) => "bzlip",
        Check::Besov(_) => "besov",
    }
}

/// Per-item failures become failing reports so that the remaining items still run.
fn collect(out: &mut Vec<BoundReport>, id: &str, r: Result<Vec<BoundReport>>) -> Result<()> {
    match r {
        Ok(v) => out.extend(v),
        Err(e @ Error::InvalidParams(_)) => return Err(e),
        Err(e) => out.push(BoundReport::new(id, "numerical-failure").fail(e.to_string())),
    }
    Ok(())
}

fn run_check(check: &Check, c: &Common, p: AnisotropyParams) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    let seed = c.seed.unwrap_or(1);
    match check {
        Check::Pair(_) => {
            let atom: AtomKind = c.atom.as_deref().unwrap_or("gaussian").parse().map_err(invalid)?;
            let z = c.z_or(Complex64::new(1e-3, 0.0))?;
            collect(&mut out, "pair", pairing_check(&p, z, atom, c.tol.unwrap_or(1e-10)).map(|r| vec![r]))?;
        }
        Check::FourierDecay(_) => {
            let z = c.z_or(Complex64::new(0.2, 0.0))?;
            let grid = c.grid_or(1.0, 1e6, 13)?;
            let r = fourier_decay_check(&p, z, Vec2::new(0.6, 0.8), &grid, c.tol.unwrap_or(1e-10));
            collect(&mut out, "fourier-decay", r.map(|r| vec![r]))?;
        }
        Check::Partition(_) => {
            collect(&mut out, "partition", partition_check(&p, c.samples.unwrap_or(1000), seed).map(|r| vec![r]))?;
        }
        Check::Moments(_) => collect(&mut out, "moments", moment_kill_checks())?,
        Check::Oscdecay(_) => {
            let which = c.regime.as_deref().unwrap_or("vdc");
            let regimes: Vec<&str> = if which == "all" { vec!["vdc", "small", "cone", "eta"] } else { vec![which] };
            for r in regimes {
                if r == "eta" {
                    let grid = c.grid_or(1e-4, 1e4, 41)?;
                    let xi = crate::geometry::Vec3 { x1: 10.0 * GENERIC_DIRECTION.x1, x: Vec2::new(10.0 * GENERIC_DIRECTION.x.x, 10.0 * GENERIC_DIRECTION.x.y) };
                    for profile in [BetaProfile::Annular, BetaProfile::GaussianLaplacian] {
                        let atom = SeparableAtom::new(p, 3, Sidedness::Positive, profile)?;
                        collect(&mut out, "oscdecay-eta", eta_decay_scan(&atom, xi, &grid, &[0, 2, 4], c.tol.unwrap_or(1e-13)))?;
                    }
                    continue;
                }
                let regime: Regime = r.parse().map_err(invalid)?;
                let mut scan = DecayScan::standard(regime);
                if c.grid_given() {
                    let (lo, hi) = (scan.grid[0], *scan.grid.last().unwrap_or(&1.0));
                    scan.grid = c.grid_or(lo, hi, scan.grid.len())?;
                }
                if let Some(t) = c.tol {
                    scan.tol = t;
                }
                let res = regime_atom(p, regime).and_then(|a| decay_scan(&a, &scan));
                collect(&mut out, &format!("oscdecay-{}", regime.name()), res.map(|r| vec![r]))?;
            }
        }
        Check::Multscan(_) => {
            let ctx = MultiplierContext::new(SeparableAtom::standard(p)?);
            let points = marcinkiewicz_base_grid(&p, c.samples.unwrap_or(100), seed);
            collect(&mut out, "khat1", khat1_reports(&ctx, &points))?;
            let base = marcinkiewicz_base_grid(&p, c.grid_points.unwrap_or(160), seed.wrapping_add(1));
            let dilations = [1.0, 10.0, 100.0];
            let orders = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
            let marc = marcinkiewicz_scan(&ctx, &base, &dilations, &orders).and_then(|rows| {
                if let Some(path) = &c.csv {
                    let f = File::create(path).map_err(|e| Error::InvalidParams(format!("{}: {e}", path.display())))?;
                    write_marcinkiewicz_csv(BufWriter::new(f), &rows)?;
                }
                Ok(marcinkiewicz_reports(&rows, &dilations, &orders))
            });
            collect(&mut out, "marcinkiewicz", marc)?;
            let mn2 = (p.m() * p.n() * p.n()) as f64;
            let z = c.z_or(Complex64::new(-1.0 / (4.0 * mn2), 0.0))?;
            let k2 = BzContext::new(p, z).and_then(|bz| {
                let pts = &points[..points.len().min(20)];
                khat2z_report(&ctx, &bz, pts, c.tol.unwrap_or(1e-8))
            });
            collect(&mut out, "khat2z", k2.map(|r| vec![r]))?;
        }
        Check::Identity(_) => collect(&mut out, "identity", identity_reports(p, &identity_cases()))?,
        Check::Bzlip(_) => {
            let z = c.z_or(Complex64::new(0.2, 0.0))?;
            let tol = c.tol.unwrap_or(1e-8);
            let bz = BzContext::new(p, z)?;
            let grid = c.grid_or(1e-6, 1e-1, 11)?;
            collect(&mut out, "bz-l1-lipschitz", bz_l1_lipschitz(&bz, &grid, tol).map(|r| vec![r]))?;
            let decay = bz_fourier_decay(&bz, Vec2::new(0.6, 0.8), &log_space(1.0, 1e4, 9), tol);
            collect(&mut out, "bz-fourier-decay", decay.map(|r| vec![r]))?;
        }
        Check::Besov(_) => {
            let z = c.z_or(Complex64::new(0.2, 0.0))?;
            if z.im != 0.0 {
                return Err(Error::InvalidParams("the Besov check needs real z".into()));
            }
            let ts = c.grid_or(1e-3, 0.3, 5)?;
            collect(&mut out, "besov", besov_piece_reports(p, z.re, &ts))?;
        }
    }
    Ok(out)
}

fn invalid(e: Error) -> Error {
    Error::InvalidParams(e.to_string())
}

fn finish(reports: &[BoundReport], out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write, summary_to_stdout: bool) -> i32 {
    let pass = reports.iter().all(|r| r.pass);
    match out {
        Some(path) => {
            let written = File::create(path)
                .map_err(|e| Error::InvalidParams(format!("{}: {e}", path.display())))
                .and_then(|f| write_jsonl(BufWriter::new(f), reports));
            if let Err(e) = written {
                return usage(stderr, &e);
            }
            for r in reports {
                let _ = writeln!(stdout, "{}", r.summary());
            }
        }
        None => {
            let sink: &mut dyn Write = if summary_to_stdout { &mut *stdout } else { &mut *stderr };
            for r in reports {
                let _ = writeln!(sink, "{}", r.summary());
            }
            if !summary_to_stdout {
                let _ = write_jsonl(&mut *stdout, reports);
            }
        }
    }
    if pass {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn parses_complex_forms() {
        assert_eq!(parse_complex("0.7+0.3i").unwrap(), Complex64::new(0.7, 0.3));
        assert_eq!(parse_complex("-0.2-1e-3i").unwrap(), Complex64::new(-0.2, -1e-3));
        assert_eq!(parse_complex("1e-3").unwrap(), Complex64::new(1e-3, 0.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("2.5i").unwrap(), Complex64::new(0.0, 2.5));
        assert!(parse_complex("x+yi").is_err());
    }

    #[test]
    fn roots_exit_codes() {
        let (code, out, _) = run_str(&["ak", "roots", "-m", "1", "-n", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("roots (4): -3/4, -1, -1, -5/4"), "{out}");
        let (code, _, err) = run_str(&["ak", "roots", "-m", "3", "-n", "3"]);
        assert_eq!(code, 2, "{err}");
        let (code, _, _) = run_str(&["ak", "roots", "-m", "2"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn verify_partition_emits_jsonl() {
        let (code, out, err) = run_str(&["ak", "verify", "partition", "-m", "2", "-n", "3", "--samples", "200"]);
        assert_eq!(code, 0, "{err}");
        let v: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
        assert_eq!(v["check_id"], "partition");
        assert_eq!(v["pass"], true);
        assert!(err.starts_with("PASS"));
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.json");
        std::fs::write(&cfg, r#"{"m": 1, "n": 2, "samples": 50, "seed": 9}"#).unwrap();
        let out = dir.path().join("r.jsonl");
        let (code, _, err) = run_str(&[
            "ak", "verify", "partition", "--config", cfg.to_str().unwrap(), "-n", "4", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        let line = std::fs::read_to_string(&out).unwrap();
        assert!(line.contains("50 samples, seed 9"));
        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, r#"{"bogus": 1}"#).unwrap();
        let (code, _, _) = run_str(&["ak", "verify", "partition", "--config", bad.to_str().unwrap()]);
        assert_eq!(code, 2);
    }

    #[test]
    fn invalid_params_and_numeric_failures() {
        let (code, _, _) = run_str(&["ak", "verify", "partition", "-m", "4", "-n", "3"]);
        assert_eq!(code, 2);
        // outside the strip the pairing is a recorded numerical failure
        let (code, out, _) = run_str(&["ak", "verify", "pair", "--z", "-0.9"]);
        assert_eq!(code, 1);
        assert!(out.contains("numerical-failure"));
    }
}
