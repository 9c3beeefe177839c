//! Ronkin function `N_F` and its coefficients `u_ijk`.
//!
//! Homogeneity gives `N_F(x,y,z) = n z + N(x−z, y−z)` with `N` the 2-torus mean of
//! `log |f(e^{a+iθ}, e^{b+iφ})|`, `f(X,w) = F(X,w,1)`. The `φ` mean is done in closed form by
//! Jensen's formula, `mean log|p(e^{b+iφ})| = log|lead p| + Σ max(b, log|root|)`, so only the
//! `θ` circle is sampled.

use std::collections::BTreeMap;

use num::complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::log_boundary;
use crate::error::{Edge, Error, Result};
use crate::form::TernaryForm;
use crate::hive::{boundary_of, TriangleIndex};
use crate::pencil::curve_boundary;
use crate::poly::complex_roots;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RonkinSpec {
    /// Samples on the `θ` circle.
    pub resolution: usize,
    /// Width at which the convex search stops.
    pub tolerance: f64,
    /// Search interval for `a = x − z`; derived from the coefficients when absent.
    pub window: Option<(f64, f64)>,
}

impl Default for RonkinSpec {
    fn default() -> Self {
        RonkinSpec { resolution: 512, tolerance: 1e-7, window: None }
    }
}

impl RonkinSpec {
    pub fn with_resolution(resolution: usize) -> Self {
        RonkinSpec { resolution, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.resolution < 16 {
            return Err(Error::Numeric(format!("ronkin resolution {} is below 16", self.resolution)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Numeric("ronkin tolerance must be positive".into()));
        }
        if let Some((lo, hi)) = self.window {
            if !(lo < hi) {
                return Err(Error::Numeric("ronkin window must be a nonempty interval".into()));
            }
        }
        Ok(())
    }
}

/// Sub-samples used on a cell where the leading coefficient nearly vanishes.
const REFINE: usize = 16;
const NEAR_ZERO: f64 = 1e-8;

/// `f(X,w) = Σ_j cols[j](X) w^j` with `cols[j][i] = F_{i,j,n−i−j}`.
struct Slice {
    cols: Vec<Vec<f64>>,
    top: usize,
}

/// One weighted `θ` sample: `log|lead|` and the root logs in `w`.
struct Sample {
    weight: f64,
    lead: f64,
    rho: Vec<f64>,
}

impl Slice {
    fn new(f: &TernaryForm<f64>) -> Result<Self> {
        let n = f.degree();
        let cols: Vec<Vec<f64>> = (0..=n).map(|j| (0..=n - j).map(|i| *f.get(TriangleIndex::new(i, j, n - i - j))).collect()).collect();
        let top = cols.iter().rposition(|c| c.iter().any(|x| *x != 0.0)).ok_or(Error::ZeroPolynomial)?;
        Ok(Slice { cols, top })
    }

    fn column(&self, j: usize, x: Complex64) -> Complex64 {
        self.cols[j].iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    fn column_scale(&self, j: usize, a: f64) -> f64 {
        self.cols[j].iter().enumerate().map(|(i, c)| c.abs() * (i as f64 * a).exp()).sum()
    }

    fn sample(&self, a: f64, theta: f64, weight: f64) -> Sample {
        let x = Complex64::from_polar(a.exp(), theta);
        let p: Vec<Complex64> = (0..=self.top).map(|j| self.column(j, x)).collect();
        let lead = p[self.top].norm().ln();
        let rho = complex_roots(&p).into_iter().map(|r| r.norm().ln()).collect();
        Sample { weight, lead, rho }
    }

    /// Midpoint rule on the `θ` circle; cells where the leading coefficient nearly vanishes
    /// are subdivided, since `log|lead|` has an integrable singularity there.
    fn samples(&self, a: f64, m: usize) -> Vec<Sample> {
        let h = std::f64::consts::TAU / m as f64;
        let scale = self.column_scale(self.top, a);
        (0..m)
            .flat_map(|c| {
                let mid = (c as f64 + 0.5) * h;
                let lead = self.column(self.top, Complex64::from_polar(a.exp(), mid)).norm();
                if lead > NEAR_ZERO * scale {
                    vec![self.sample(a, mid, 1.0 / m as f64)]
                } else {
                    (0..REFINE)
                        .map(|s| self.sample(a, c as f64 * h + (s as f64 + 0.5) * h / REFINE as f64, 1.0 / (m * REFINE) as f64))
                        .filter(|s| s.lead.is_finite())
                        .collect()
                }
            })
            .collect()
    }
}

fn n2(samples: &[Sample], b: f64) -> f64 {
    samples.iter().map(|s| s.weight * (s.lead + s.rho.iter().map(|r| b.max(*r)).sum::<f64>())).sum()
}

/// `min_b N(a,b) − j b`. The objective is convex and piecewise linear in `b` with slope
/// `(weight of roots below b) − j`, so the minimizer is a weighted quantile of the root logs.
fn inner_min(samples: &[Sample], j: usize) -> f64 {
    if j == 0 {
        return samples.iter().map(|s| s.weight * (s.lead + s.rho.iter().sum::<f64>())).sum();
    }
    let total: f64 = samples.iter().map(|s| s.weight).sum();
    let mut pooled: Vec<(f64, f64)> = samples.iter().flat_map(|s| s.rho.iter().map(move |r| (*r, s.weight / total))).collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut acc = 0.0;
    let mut b = pooled.last().map_or(0.0, |p| p.0);
    for (r, w) in &pooled {
        acc += w;
        if acc >= j as f64 - 1e-9 {
            b = *r;
            break;
        }
    }
    n2(samples, b) - j as f64 * b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RonkinValue {
    pub value: f64,
    /// Same quantity at twice the resolution.
    pub refined: f64,
    pub deviation: f64,
}

/// `N_F(x,y,z)`.
pub fn ronkin_value(f: &TernaryForm<f64>, point: [f64; 3], spec: &RonkinSpec) -> Result<RonkinValue> {
    spec.validate()?;
    let slice = Slice::new(f)?;
    let [x, y, z] = point;
    let at = |m: usize| f.degree() as f64 * z + n2(&slice.samples(x - z, m), y - z);
    let (value, refined) = rayon::join(|| at(spec.resolution), || at(2 * spec.resolution));
    Ok(RonkinValue { value, refined, deviation: (value - refined).abs() })
}

fn corner_check(f: &TernaryForm<f64>) -> Result<()> {
    let n = f.degree();
    for t in [TriangleIndex::new(n, 0, 0), TriangleIndex::new(0, n, 0), TriangleIndex::new(0, 0, n)] {
        if *f.get(t) == 0.0 {
            return Err(Error::CornerCoefficientZero { i: t.i, j: t.j, k: t.k });
        }
    }
    Ok(())
}

/// The monomial `c x^i y^j z^k` has `N_F = log|c| + ix + jy + kz`, so `u_ijk = log|c|`.
fn monomial(f: &TernaryForm<f64>) -> Option<(TriangleIndex, f64)> {
    let mut nz = f.iter().filter(|(_, c)| **c != 0.0);
    let (t, c) = nz.next()?;
    nz.next().is_none().then(|| (t, c.abs().ln()))
}

/// `a`-range holding the tropical vertices of `max(log|F_ij| + i a + j b)`, widened by a margin.
fn tropical_window(f: &TernaryForm<f64>) -> (f64, f64) {
    let n = f.degree();
    let terms: Vec<(f64, f64, f64)> = f.iter().filter(|(_, c)| **c != 0.0).map(|(t, c)| (t.i as f64, t.j as f64, c.abs().ln())).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (p, &(i1, j1, v1)) in terms.iter().enumerate() {
        for (q, &(i2, j2, v2)) in terms.iter().enumerate().skip(p + 1) {
            for &(i3, j3, v3) in terms.iter().skip(q + 1) {
                // (i2−i1) a + (j2−j1) b = v1 − v2, likewise for the third term
                let det = (i2 - i1) * (j3 - j1) - (i3 - i1) * (j2 - j1);
                if det == 0.0 {
                    continue;
                }
                let (r2, r3) = (v1 - v2, v1 - v3);
                let a = (r2 * (j3 - j1) - r3 * (j2 - j1)) / det;
                let b = ((i2 - i1) * r3 - (i3 - i1) * r2) / det;
                let top = v1 + i1 * a + j1 * b;
                if terms.iter().all(|&(i, j, v)| v + i * a + j * b <= top + 1e-9 * (1.0 + top.abs())) {
                    lo = lo.min(a);
                    hi = hi.max(a);
                }
            }
        }
    }
    if !lo.is_finite() {
        lo = 0.0;
        hi = 0.0;
    }
    let margin = 2.0 + 2.0 * (terms.len().max(2) as f64).ln() + n as f64;
    (lo - margin, hi + margin)
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const COARSE: usize = 33;

/// `u_ijk(F) = min_{a,b} N(a,b) − i a − j b`: exact in `b`, coarse grid then golden section in `a`.
pub fn ronkin_coefficient(f: &TernaryForm<f64>, idx: TriangleIndex, spec: &RonkinSpec) -> Result<f64> {
    spec.validate()?;
    if idx.degree() != f.degree() {
        return Err(Error::DimensionMismatch(format!("index of degree {} for a form of degree {}", idx.degree(), f.degree())));
    }
    if let Some((t, logc)) = monomial(f) {
        if t == idx {
            return Ok(logc);
        }
    }
    corner_check(f)?;
    let slice = Slice::new(f)?;
    let m = spec.resolution;
    let phi = |a: f64| inner_min(&slice.samples(a, m), idx.j) - idx.i as f64 * a;
    let (mut lo, mut hi) = spec.window.unwrap_or_else(|| tropical_window(f));
    for _ in 0..12 {
        let step = (hi - lo) / (COARSE - 1) as f64;
        let grid: Vec<f64> = (0..COARSE).into_par_iter().map(|s| phi(lo + s as f64 * step)).collect();
        let best = (0..COARSE).min_by(|&p, &q| grid[p].total_cmp(&grid[q])).expect("grid");
        // The objective is convex; a minimum on the rim means the window is too small.
        if best == 0 && spec.window.is_none() {
            lo -= hi - lo;
            continue;
        }
        if best == COARSE - 1 && spec.window.is_none() {
            hi += hi - lo;
            continue;
        }
        let (mut l, mut r) = (lo + best.saturating_sub(1) as f64 * step, lo + (best + 1).min(COARSE - 1) as f64 * step);
        let mut c = r - GOLDEN * (r - l);
        let mut d = l + GOLDEN * (r - l);
        let (mut fc, mut fd) = (phi(c), phi(d));
        while r - l > spec.tolerance {
            if fc <= fd {
                r = d;
                d = c;
                fd = fc;
                c = r - GOLDEN * (r - l);
                fc = phi(c);
            } else {
                l = c;
                c = d;
                fc = fd;
                d = l + GOLDEN * (r - l);
                fd = phi(d);
            }
        }
        return Ok(fc.min(fd).min(grid[best]));
    }
    Err(Error::Numeric("ronkin minimization did not settle inside any window".into()))
}

/// `u` on every index, in canonical order.
pub fn ronkin_coefficients(f: &TernaryForm<f64>, spec: &RonkinSpec) -> Result<Vec<f64>> {
    crate::hive::index_set(f.degree()).into_iter().map(|t| ronkin_coefficient(f, t, spec)).collect()
}

/// `u` on the three sides from the one-variable restrictions alone.
///
/// For `g(w) = Σ g_j w^j` with root logs `ρ`, Jensen gives `N_g(s) = log|g_d| + Σ max(s, ρ)`,
/// so `min_s N_g(s) − j s` sits at the `j`-th smallest `ρ`.
pub fn edge_coefficients_1d(f: &TernaryForm<f64>) -> Result<BTreeMap<TriangleIndex, f64>> {
    corner_check(f)?;
    let n = f.degree();
    let mut out = BTreeMap::new();
    for edge in [Edge::Xy, Edge::Yz, Edge::Zx] {
        let at = |d: usize| match edge {
            Edge::Xy => TriangleIndex::new(n - d, d, 0),
            Edge::Yz => TriangleIndex::new(0, n - d, d),
            Edge::Zx => TriangleIndex::new(d, 0, n - d),
        };
        let g: Vec<Complex64> = (0..=n).map(|d| Complex64::new(*f.get(at(d)), 0.0)).collect();
        let mut rho: Vec<f64> = complex_roots(&g).into_iter().map(|r| r.norm().ln()).collect();
        rho.sort_by(f64::total_cmp);
        let lead = g[n].norm().ln();
        for j in 0..=n {
            let s = if j == 0 { f64::NEG_INFINITY } else { rho[j - 1] };
            let tail: f64 = rho.iter().map(|r| if j == 0 { *r } else { s.max(*r) }).sum();
            let u = lead + tail - if j == 0 { 0.0 } else { j as f64 * s };
            out.insert(at(j), u);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RonkinBoundary {
    pub log_boundary: [Vec<f64>; 3],
    pub half_d0_u: [Vec<f64>; 3],
    pub max_residual: f64,
}

/// `log ∂(F)` against `½ ∂₀ u(F)`, with `u` from the two-dimensional minimization.
pub fn ronkin_boundary_check(f: &TernaryForm<f64>, spec: &RonkinSpec) -> Result<RonkinBoundary> {
    let n = f.degree();
    let lb = log_boundary(&curve_boundary(f)?);
    let mut sides: Vec<TriangleIndex> = Vec::new();
    for d in 0..=n {
        sides.extend([TriangleIndex::new(n - d, d, 0), TriangleIndex::new(0, n - d, d), TriangleIndex::new(d, 0, n - d)]);
    }
    sides.sort();
    sides.dedup();
    let u: BTreeMap<TriangleIndex, f64> = sides.par_iter().map(|&t| Ok((t, ronkin_coefficient(f, t, spec)?))).collect::<Result<_>>()?;
    let half = boundary_of(n, |t| u[&t]).map(|s| s.into_iter().map(|x| 0.5 * x).collect::<Vec<f64>>());
    let max_residual = (0..3).flat_map(|s| lb[s].iter().zip(&half[s]).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()).fold(0.0, f64::max);
    Ok(RonkinBoundary { log_boundary: lb, half_d0_u: half, max_residual })
}
