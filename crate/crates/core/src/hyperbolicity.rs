//! Line probing for hyperbolicity, directional derivatives, weighted log-concavity checks.

use num::bigint::BigInt;
use num::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::hive::{classify_values_f64, index_set, rhombus_inequalities, HiveClass, HiveClassification, RhombusFamily, RhombusInequality};
use crate::pencil::{CMatrix, PencilTriple};
use crate::poly::{real_root_count_float, sturm_count_int, Mode, Poly, CLUSTER_TOL, IMAG_TOL};
use crate::rational::{f64_to_q, Q};

/// Slack tolerance for the float hive test on `log F - V1`.
pub const SHIFTED_HIVE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// A point of the open positive triangle; every probed line passes through it.
    pub base: [f64; 3],
    /// Directions at equally spaced angles in `[0, pi)`.
    pub equally_spaced: usize,
    /// Extra directions at seeded random angles.
    pub random: usize,
    pub seed: u64,
    pub mode: Mode,
    /// Jittered retries for a probe that hits a tangency or a root at infinity.
    pub max_reprobes: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { base: [1.0, 1.0, 1.0], equally_spaced: 360, random: 128, seed: 0, mode: Mode::Exact, max_reprobes: 4 }
    }
}

impl ProbeConfig {
    pub fn with_counts(equally_spaced: usize, random: usize) -> Self {
        ProbeConfig { equally_spaced, random, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineProbe {
    pub id: usize,
    pub base: [f64; 3],
    /// Points of the line are `base + s * direction`.
    pub direction: [f64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub probe: LineProbe,
    pub real_roots: usize,
    /// Degree of the restriction actually counted.
    pub degree: usize,
    pub reprobes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    pub verdict: Verdict,
    pub degree: usize,
    pub probes: usize,
    /// Probes that needed at least one jittered retry.
    pub degenerate: usize,
    pub counterexample: Option<ProbeOutcome>,
}

/// Direction at angle `theta` in the plane `z = 0`, rounded to multiples of `2^-24`.
fn direction(theta: f64) -> [f64; 3] {
    let r = |x: f64| (x * 16_777_216.0).round() / 16_777_216.0;
    [r(theta.cos()), r(theta.sin()), 0.0]
}

pub fn probe_lines(cfg: &ProbeConfig) -> Vec<LineProbe> {
    let d = cfg.equally_spaced;
    let mut out: Vec<LineProbe> =
        (0..d).map(|m| LineProbe { id: m, base: cfg.base, direction: direction(std::f64::consts::PI * m as f64 / d as f64) }).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for m in 0..cfg.random {
        let theta = rng.random_range(0.0..std::f64::consts::PI);
        out.push(LineProbe { id: d + m, base: cfg.base, direction: direction(theta) });
    }
    out
}

enum Count {
    Ok(usize),
    /// Root at infinity or a repeated root.
    Degenerate(usize, usize),
}

/// Integer coordinates of a point, up to a positive scale (the line is unchanged).
fn integer_point(p: &[Q; 3]) -> [BigInt; 3] {
    let l = p.iter().fold(BigInt::from(1), |l, c| l.lcm(c.denom()));
    p.clone().map(|c| (c * Q::from_integer(l.clone())).to_integer())
}

fn count_exact(f: &TernaryForm<BigInt>, base: &[BigInt; 3], dir: [f64; 3]) -> Result<Count> {
    let n = f.degree();
    // Directions are multiples of 2^-24.
    let d = dir.map(|x| BigInt::from((x * 16_777_216.0) as i64));
    let p = f.restrict_line(base, &d);
    if p.is_zero() {
        return Ok(Count::Degenerate(0, 0));
    }
    let deg = p.degree().unwrap();
    let (real, repeated) = sturm_count_int(&p.coeffs)?;
    if deg < n || repeated {
        return Ok(Count::Degenerate(real, deg));
    }
    Ok(Count::Ok(real))
}

fn count_float(f: &TernaryForm<f64>, base: &[f64; 3], dir: [f64; 3]) -> Result<Count> {
    let n = f.degree();
    let p = f.restrict_line(base, &dir);
    let scale = p.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if p.is_zero() || scale == 0.0 {
        return Ok(Count::Degenerate(0, 0));
    }
    let deg = p.degree().unwrap();
    if deg < n || p.coeffs[n].abs() <= 1e-12 * scale {
        let trimmed = Poly::new(p.coeffs[..n].to_vec());
        let real = if trimmed.is_zero() { 0 } else { real_root_count_float(&trimmed, None, IMAG_TOL, CLUSTER_TOL)? };
        return Ok(Count::Degenerate(real, deg.min(n - 1)));
    }
    let distinct = real_root_count_float(&p, None, IMAG_TOL, CLUSTER_TOL)?;
    // Two real roots merged by clustering signal a tangency.
    let loose = real_root_count_float(&p, None, IMAG_TOL, 0.0)?;
    if loose != distinct {
        return Ok(Count::Degenerate(distinct, deg));
    }
    Ok(Count::Ok(distinct))
}

fn run_probe(probe: &LineProbe, cfg: &ProbeConfig, count: &(dyn Fn([f64; 3]) -> Result<Count> + Sync), n: usize) -> Result<ProbeOutcome> {
    let mut dir = probe.direction;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (probe.id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut reprobes = 0;
    loop {
        match count(dir)? {
            Count::Ok(real) => {
                return Ok(ProbeOutcome { probe: LineProbe { direction: dir, ..probe.clone() }, real_roots: real, degree: n, reprobes })
            }
            Count::Degenerate(real, deg) => {
                if reprobes == cfg.max_reprobes {
                    return Ok(ProbeOutcome {
                        probe: LineProbe { direction: dir, ..probe.clone() },
                        real_roots: real,
                        degree: deg,
                        reprobes,
                    });
                }
                reprobes += 1;
                let theta = dir[1].atan2(dir[0]) + rng.random_range(-1e-3..1e-3);
                dir = direction(theta);
            }
        }
    }
}

fn check_preconditions<T: crate::form::Scalar>(f: &TernaryForm<T>, base: &[f64; 3]) -> Result<()> {
    if let Some(t) = f.first_nonpositive() {
        return Err(Error::NonpositiveCoefficient { i: t.i, j: t.j, k: t.k });
    }
    if base.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Schema(format!("base point {base:?} is not strictly positive")));
    }
    Ok(())
}

fn aggregate(n: usize, outcomes: Vec<ProbeOutcome>) -> HyperbolicityReport {
    let degenerate = outcomes.iter().filter(|o| o.reprobes > 0).count();
    let probes = outcomes.len();
    // The first failing probe in id order, so the report does not depend on scheduling.
    let counterexample = outcomes.into_iter().find(|o| o.real_roots < n || o.degree < n);
    HyperbolicityReport {
        verdict: if counterexample.is_some() { Verdict::Fail } else { Verdict::Pass },
        degree: n,
        probes,
        degenerate,
        counterexample,
    }
}

/// Probes lines through `cfg.base`; passes when every line meets the curve in `n` distinct real points.
pub fn vinnikov_check(f: &TernaryForm<f64>, cfg: &ProbeConfig) -> Result<HyperbolicityReport> {
    vinnikov_check_lines(f, &probe_lines(cfg), cfg)
}

pub fn vinnikov_check_lines(f: &TernaryForm<f64>, lines: &[LineProbe], cfg: &ProbeConfig) -> Result<HyperbolicityReport> {
    check_preconditions(f, &cfg.base)?;
    let n = f.degree();
    let outcomes: Vec<ProbeOutcome> = match cfg.mode {
        Mode::Exact => {
            let fq = f.to_exact()?;
            return vinnikov_check_exact_lines(&fq, lines, cfg);
        }
        Mode::Float => lines.par_iter().map(|p| run_probe(p, cfg, &|d| count_float(f, &p.base, d), n)).collect::<Result<_>>()?,
    };
    Ok(aggregate(n, outcomes))
}

pub fn vinnikov_check_exact(f: &TernaryForm<Q>, cfg: &ProbeConfig) -> Result<HyperbolicityReport> {
    vinnikov_check_exact_lines(f, &probe_lines(cfg), cfg)
}

fn vinnikov_check_exact_lines(f: &TernaryForm<Q>, lines: &[LineProbe], cfg: &ProbeConfig) -> Result<HyperbolicityReport> {
    check_preconditions(f, &cfg.base)?;
    let n = f.degree();
    let l = f.coeffs().iter().fold(BigInt::from(1), |l, c| l.lcm(c.denom()));
    let fi = f.map(|c| (c * Q::from_integer(l.clone())).to_integer());
    let outcomes: Vec<ProbeOutcome> = lines
        .par_iter()
        .map(|p| {
            let base = integer_point(&p.base.map(|x| f64_to_q(x).expect("finite base")));
            run_probe(p, cfg, &|d| count_exact(&fi, &base, d), n)
        })
        .collect::<Result<_>>()?;
    Ok(aggregate(n, outcomes))
}

/// Roots `s` of `det(B + sQ)` for `B = X(base)` and `Q = X(dir)`, from Hermitian eigenvalues.
///
/// With `B = L L*`, the roots are `-1/mu` over the nonzero eigenvalues `mu` of `L^{-1} Q L^{-*}`.
pub fn pencil_line_roots(p: &PencilTriple, base: [f64; 3], dir: [f64; 3]) -> Result<Vec<f64>> {
    let c = |x: f64| num::complex::Complex64::new(x, 0.0);
    let b = p.at(c(base[0]), c(base[1]), c(base[2]));
    let qm = p.at(c(dir[0]), c(dir[1]), c(dir[2]));
    let l = b.cholesky().ok_or_else(|| Error::NotPositiveDefinite("pencil at base point".into()))?.l();
    let li = l.try_inverse().ok_or_else(|| Error::NotInvertible("Cholesky factor".into()))?;
    let m: CMatrix = &li * qm * li.adjoint();
    let ev = crate::pencil::hermitian_eigenvalues(&crate::pencil::symmetrize(&m))?;
    let scale = ev.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut roots: Vec<f64> = ev.into_iter().filter(|mu| mu.abs() > 1e-14 * scale).map(|mu| -1.0 / mu).collect();
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// `dir_x dF/dx + dir_y dF/dy + dir_z dF/dz`.
pub fn directional_derivative<T: crate::form::Scalar>(f: &TernaryForm<T>, dir: &[T; 3]) -> Result<TernaryForm<T>> {
    if dir.iter().any(|d| *d < T::zero()) || dir.iter().all(|d| d.is_zero()) {
        return Err(Error::Schema("derivative direction must be nonnegative and nonzero".into()));
    }
    f.directional_derivative(dir)
}

/// `2(m-1)/m` where `m` is the family coordinate at the anchor.
pub fn backward_weight(r: &RhombusInequality) -> f64 {
    let a = r.anchor();
    let m = match r.family {
        RhombusFamily::K => a.k,
        RhombusFamily::J => a.j,
        RhombusFamily::I => a.i,
    } as f64;
    2.0 * (m - 1.0) / m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackwardMargin {
    pub rhombus: RhombusInequality,
    pub weight: f64,
    /// `weight * F_plus0 * F_plus1 - F_minus0 * F_minus1`.
    pub margin: f64,
    /// The same margin divided by `F_minus0 * F_minus1`.
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackwardReport {
    pub verdict: Verdict,
    pub margins: Vec<BackwardMargin>,
}

/// The weighted rhombus inequalities every determinantal form satisfies strictly.
pub fn backward_inequalities(f: &TernaryForm<f64>) -> Result<BackwardReport> {
    if let Some(t) = f.first_nonpositive() {
        return Err(Error::NonpositiveCoefficient { i: t.i, j: t.j, k: t.k });
    }
    let margins: Vec<BackwardMargin> = rhombus_inequalities(f.degree())
        .into_iter()
        .map(|r| {
            let w = backward_weight(&r);
            let lhs = w * f.get(r.plus[0]) * f.get(r.plus[1]);
            let rhs = f.get(r.minus[0]) * f.get(r.minus[1]);
            BackwardMargin { rhombus: r, weight: w, margin: lhs - rhs, relative: lhs / rhs - 1.0 }
        })
        .collect();
    let verdict = if margins.iter().all(|m| m.margin > 0.0) { Verdict::Pass } else { Verdict::Fail };
    Ok(BackwardReport { verdict, margins })
}

fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|x| (x as f64).ln()).sum()
}

/// `V1(i,j,k) = -log(i! j! k! 2^{ij+jk+ki})`, in the order of `index_set(n)`.
pub fn v1_vector(n: usize) -> Vec<f64> {
    index_set(n)
        .into_iter()
        .map(|t| {
            let s = (t.i * t.j + t.j * t.k + t.k * t.i) as f64;
            -(ln_factorial(t.i) + ln_factorial(t.j) + ln_factorial(t.k) + s * std::f64::consts::LN_2)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftedHiveReport {
    pub values: Vec<f64>,
    pub classification: HiveClassification,
    /// Strict positivity is what determinantal forms guarantee, so only `strict_hive` passes.
    pub verdict: Verdict,
}

/// Classifies `log F - V1` with slack tolerance [`SHIFTED_HIVE_TOL`].
pub fn shifted_hive_check(f: &TernaryForm<f64>) -> Result<ShiftedHiveReport> {
    if let Some(t) = f.first_nonpositive() {
        return Err(Error::NonpositiveCoefficient { i: t.i, j: t.j, k: t.k });
    }
    let v1 = v1_vector(f.degree());
    let values: Vec<f64> = f.coeffs().iter().zip(&v1).map(|(c, v)| c.ln() - v).collect();
    let classification = classify_values_f64(f.degree(), &values, SHIFTED_HIVE_TOL);
    let verdict = if classification.class == HiveClass::StrictHive { Verdict::Pass } else { Verdict::Fail };
    Ok(ShiftedHiveReport { values, classification, verdict })
}
