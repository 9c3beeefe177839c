//! Regular subdivisions of Δ_n, their dual tropical curves, honeycomb rays and amoeba samples.
//!
//! Plane coordinates on ℝ³/ℝ(1,1,1) are `(X−Z, Y−Z)` throughout.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::integer::Integer;
use num::{BigInt, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Edge, Error, Result};
use crate::form::{Scalar, TernaryForm};
use crate::hive::{index_set, position, BoundarySpec, Hive, TriangleIndex};
use crate::poly::complex_roots;
use crate::rational::{format_q, q, q_to_f64, Q};
use crate::SCHEMA;

/// Exponent table over Δ_n. Same data as a hive; hive-ness is not assumed.
pub type Lifting = Hive;

/// One cell of a regular subdivision: the projection of an upper face of the lifted hull.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    /// Every lattice point lying on the face, in canonical order.
    pub points: Vec<TriangleIndex>,
    /// Polygon corners, counterclockwise in the `(i,j)` plane.
    pub corners: Vec<TriangleIndex>,
    /// `(a,b,c)` with `a·i+b·j+c·k` equal to the lifting on the cell and larger off it.
    pub functional: [Q; 3],
}

impl Cell {
    pub fn eval(&self, p: TriangleIndex) -> Q {
        let [a, b, c] = &self.functional;
        a * q(p.i as i64) + b * q(p.j as i64) + c * q(p.k as i64)
    }

    /// A triangle of the standard triangulation: area one and every side a unit edge. Area alone
    /// would admit triangles like (1,1,0),(1,0,1),(0,0,2).
    pub fn is_unit_triangle(&self) -> bool {
        let c = &self.corners;
        self.points.len() == 3
            && c.len() == 3
            && doubled_area(c) == 1
            && (0..3).all(|a| delta(c[a], c[(a + 1) % 3]).iter().all(|d| d.abs() <= 1))
    }
}

/// A corner-to-corner edge of the subdivision.
#[derive(Clone, Debug, PartialEq)]
pub struct SubEdge {
    pub ends: [TriangleIndex; 2],
    /// Cells containing the edge: one on the boundary of Δ, two inside.
    pub cells: Vec<usize>,
    /// The side of Δ this edge lies on, if any.
    pub side: Option<Edge>,
}

impl SubEdge {
    pub fn lattice_length(&self) -> u64 {
        let d = delta(self.ends[0], self.ends[1]);
        d[0].unsigned_abs().gcd(&d[1].unsigned_abs())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Subdivision {
    pub n: usize,
    pub cells: Vec<Cell>,
    pub edges: Vec<SubEdge>,
    /// Lattice points on the upper hull, in canonical order.
    pub marked: Vec<TriangleIndex>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubdivisionClass {
    Standard,
    CoarseningOfStandard,
    Other,
}

impl SubdivisionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SubdivisionClass::Standard => "standard",
            SubdivisionClass::CoarseningOfStandard => "coarsening_of_standard",
            SubdivisionClass::Other => "other",
        }
    }
}

fn delta(a: TriangleIndex, b: TriangleIndex) -> [i64; 3] {
    [b.i as i64 - a.i as i64, b.j as i64 - a.j as i64, b.k as i64 - a.k as i64]
}

fn cross(o: TriangleIndex, a: TriangleIndex, b: TriangleIndex) -> i64 {
    let (u, v) = (delta(o, a), delta(o, b));
    u[0] * v[1] - u[1] * v[0]
}

fn doubled_area(poly: &[TriangleIndex]) -> i64 {
    (1..poly.len().saturating_sub(1)).map(|t| cross(poly[0], poly[t], poly[t + 1])).sum::<i64>().abs()
}

/// Corners of the convex hull, counterclockwise in `(i,j)`, collinear points dropped.
fn hull_corners(pts: &[TriangleIndex]) -> Vec<TriangleIndex> {
    let mut p = pts.to_vec();
    p.sort_by_key(|t| (t.i, t.j));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<TriangleIndex> = Vec::new();
    for &x in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], x) <= 0 {
            lower.pop();
        }
        lower.push(x);
    }
    let mut upper: Vec<TriangleIndex> = Vec::new();
    for &x in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], x) <= 0 {
            upper.pop();
        }
        upper.push(x);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Point sets of the upper faces, by brute force over triples.
fn upper_faces<T: Scalar>(pts: &[TriangleIndex], h: &[T]) -> Vec<Vec<usize>> {
    let m = pts.len();
    let int = |x: i64| T::from_i64(x).expect("small integer");
    let mut faces: Vec<Vec<bool>> = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let nz = cross(pts[a], pts[b], pts[c]);
                if nz == 0 || faces.iter().any(|f| f[a] && f[b] && f[c]) {
                    continue;
                }
                // Normal of the lifted plane through a, b, c.
                let (u, v) = (delta(pts[a], pts[b]), delta(pts[a], pts[c]));
                let (hu, hv) = (h[b].clone() - h[a].clone(), h[c].clone() - h[a].clone());
                let nx = int(u[1]) * hv.clone() - hu.clone() * int(v[1]);
                let ny = hu * int(v[0]) - int(u[0]) * hv;
                let nz = int(nz);
                let positive = nz > T::zero();
                // s(p) = nz·(plane(p) − h_p); upper face iff s/nz ≥ 0 everywhere.
                let mut on = vec![false; m];
                let mut upper = true;
                for p in 0..m {
                    let d = delta(pts[a], pts[p]);
                    let s = nz.clone() * (h[a].clone() - h[p].clone()) - nx.clone() * int(d[0]) - ny.clone() * int(d[1]);
                    if s.is_zero() {
                        on[p] = true;
                    } else if (s > T::zero()) != positive {
                        upper = false;
                        break;
                    }
                }
                if upper {
                    faces.push(on);
                }
            }
        }
    }
    faces.into_iter().map(|f| (0..m).filter(|&p| f[p]).collect()).collect()
}

fn functional(n: usize, pts: &[TriangleIndex], h: &[Q]) -> [Q; 3] {
    let a = pts[0];
    let (b, c) = pts[1..]
        .iter()
        .flat_map(|&b| pts[1..].iter().map(move |&c| (b, c)))
        .find(|&(b, c)| cross(a, b, c) != 0)
        .expect("two-dimensional cell");
    let pa = position(a);
    let (u, v) = (delta(a, b), delta(a, c));
    let (hu, hv) = (&h[position(b)] - &h[pa], &h[position(c)] - &h[pa]);
    let det = q(u[0] * v[1] - u[1] * v[0]);
    // h = A·i + B·j + C on the cell.
    let big_a = (&hu * q(v[1]) - &hv * q(u[1])) / &det;
    let big_b = (&hv * q(u[0]) - &hu * q(v[0])) / &det;
    let big_c = &h[pa] - &big_a * q(a.i as i64) - &big_b * q(a.j as i64);
    let c0 = big_c / q(n as i64);
    [big_a + &c0, big_b + &c0, c0]
}

/// Common-denominator integer image of the lifting, as `i128` when that cannot overflow.
fn integer_lifting(l: &Lifting) -> std::result::Result<Vec<i128>, Vec<BigInt>> {
    let den = l.values().iter().fold(BigInt::from(1), |d, v| d.lcm(v.denom()));
    let ints: Vec<BigInt> = l.values().iter().map(|v| (v * Q::from_integer(den.clone())).to_integer()).collect();
    let small: Option<Vec<i128>> =
        ints.iter().map(|x| i64::try_from(x).ok().filter(|v| v.unsigned_abs() < 1 << 40).map(i128::from)).collect();
    small.ok_or(ints)
}

fn side_of(a: TriangleIndex, b: TriangleIndex) -> Option<Edge> {
    if a.k == 0 && b.k == 0 {
        Some(Edge::Xy)
    } else if a.i == 0 && b.i == 0 {
        Some(Edge::Yz)
    } else if a.j == 0 && b.j == 0 {
        Some(Edge::Zx)
    } else {
        None
    }
}

/// Projection of the upper faces of `{(i,j,k,L_ijk)}`. Ties stay as larger cells.
pub fn regular_subdivision(l: &Lifting) -> Subdivision {
    let n = l.degree();
    let pts = index_set(n);
    if n == 0 {
        return Subdivision { n, cells: vec![], edges: vec![], marked: pts };
    }
    let faces = match integer_lifting(l) {
        Ok(small) => upper_faces(&pts, &small),
        Err(big) => upper_faces(&pts, &big),
    };
    let mut cells: Vec<Cell> = faces
        .into_iter()
        .map(|f| {
            let points: Vec<TriangleIndex> = f.iter().map(|&p| pts[p]).collect();
            let functional = functional(n, &points, l.values());
            Cell { corners: hull_corners(&points), points, functional }
        })
        .collect();
    cells.sort_by_key(|c| c.points.iter().map(|&p| position(p)).collect::<Vec<_>>());

    let mut edges: BTreeMap<(usize, usize), SubEdge> = BTreeMap::new();
    for (ci, c) in cells.iter().enumerate() {
        for t in 0..c.corners.len() {
            let (a, b) = (c.corners[t], c.corners[(t + 1) % c.corners.len()]);
            let (a, b) = if position(a) < position(b) { (a, b) } else { (b, a) };
            edges
                .entry((position(a), position(b)))
                .or_insert_with(|| SubEdge { ends: [a, b], cells: vec![], side: side_of(a, b) })
                .cells
                .push(ci);
        }
    }
    let mut marked: Vec<TriangleIndex> = cells.iter().flat_map(|c| c.points.iter().copied()).collect();
    marked.sort_by_key(|&p| position(p));
    marked.dedup();
    Subdivision { n, cells, edges: edges.into_values().collect(), marked }
}

impl Subdivision {
    pub fn is_marked(&self, p: TriangleIndex) -> bool {
        self.marked.binary_search_by_key(&position(p), |&m| position(m)).is_ok()
    }

    /// Marked lattice points on an edge, from `ends[0]` to `ends[1]`.
    pub fn points_on(&self, e: &SubEdge) -> Vec<TriangleIndex> {
        let d = delta(e.ends[0], e.ends[1]);
        let len = e.lattice_length() as i64;
        (0..=len)
            .map(|s| {
                let c = |x: usize, dx: i64| (x as i64 + dx * s / len) as usize;
                TriangleIndex::new(c(e.ends[0].i, d[0]), c(e.ends[0].j, d[1]), c(e.ends[0].k, d[2]))
            })
            .filter(|&p| self.is_marked(p))
            .collect()
    }

    /// Edges split at marked points: consecutive marked points along each corner-to-corner edge.
    pub fn segments(&self) -> Vec<[TriangleIndex; 2]> {
        self.edges.iter().flat_map(|e| self.points_on(e).windows(2).map(|w| [w[0], w[1]]).collect::<Vec<_>>()).collect()
    }

    pub fn is_triangulation(&self) -> bool {
        self.cells.iter().all(|c| c.corners.len() == 3 && c.points.len() == 3)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pt = |p: &TriangleIndex| serde_json::json!([p.i, p.j, p.k]);
        serde_json::json!({
            "schema": SCHEMA,
            "n": self.n,
            "cells": self.cells.iter().map(|c| serde_json::json!({
                "points": c.points.iter().map(pt).collect::<Vec<_>>(),
                "corners": c.corners.iter().map(pt).collect::<Vec<_>>(),
                "functional": c.functional.iter().map(format_q).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| serde_json::json!({
                "ends": e.ends.iter().map(pt).collect::<Vec<_>>(),
                "cells": e.cells,
                "side": e.side,
            })).collect::<Vec<_>>(),
            "marked": self.marked.iter().map(pt).collect::<Vec<_>>(),
            "class": classify_subdivision(self).as_str(),
        })
    }
}

/// Standard iff exactly the n² unit triangles. Coarsening iff every lattice point is marked and
/// every segment between consecutive marked points is a unit edge of the standard triangulation.
pub fn classify_subdivision(s: &Subdivision) -> SubdivisionClass {
    if s.cells.len() == s.n * s.n && s.cells.iter().all(Cell::is_unit_triangle) {
        return SubdivisionClass::Standard;
    }
    let all_marked = s.marked.len() == index_set(s.n).len();
    let unit = s.segments().iter().all(|[a, b]| delta(*a, *b).iter().all(|d| d.abs() <= 1));
    if all_marked && unit {
        SubdivisionClass::CoarseningOfStandard
    } else {
        SubdivisionClass::Other
    }
}

/// A point of ℝ³/ℝ(1,1,1) in the `(X−Z, Y−Z)` chart.
pub type PlanePoint = [Q; 2];

#[derive(Clone, Debug, PartialEq)]
pub struct TropVertex {
    /// Index of the dual cell.
    pub cell: usize,
    pub coords: PlanePoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TropEdge {
    pub from: usize,
    pub to: usize,
    /// Primitive lattice direction from `from` to `to`.
    pub direction: [i64; 2],
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ray {
    pub vertex: usize,
    pub side: Edge,
    pub direction: [i64; 2],
    pub multiplicity: u64,
    /// Value of `x−y`, `y−z` or `z−x` along the ray, by side.
    pub position: Q,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TropicalCurve {
    pub n: usize,
    pub vertices: Vec<TropVertex>,
    pub edges: Vec<TropEdge>,
    pub rays: Vec<Ray>,
}

/// Direction perpendicular to `e`, pointing away from the cell (toward where the edge's terms win).
fn outward(cell: &Cell, e: &SubEdge) -> ([i64; 2], u64) {
    let d = delta(e.ends[0], e.ends[1]);
    let g = d[0].unsigned_abs().gcd(&d[1].unsigned_abs());
    let mut w = [d[1] / g as i64, -d[0] / g as i64];
    let p = *cell.corners.iter().find(|&&p| cross(e.ends[0], e.ends[1], p) != 0).expect("two-dimensional cell");
    let dp = delta(e.ends[0], p);
    if w[0] * dp[0] + w[1] * dp[1] > 0 {
        w = [-w[0], -w[1]];
    }
    (w, g)
}

fn ray_position(side: Edge, v: &PlanePoint) -> Q {
    // With Z = 0: x = v0, y = v1.
    match side {
        Edge::Xy => &v[0] - &v[1],
        Edge::Yz => v[1].clone(),
        Edge::Zx => -v[0].clone(),
    }
}

/// The nonsmooth locus of `max(L_ijk + ix + jy + kz)`, built as the dual graph of the subdivision.
pub fn tropical_curve(l: &Lifting) -> TropicalCurve {
    tropical_curve_of(&regular_subdivision(l))
}

pub fn tropical_curve_of(s: &Subdivision) -> TropicalCurve {
    let vertices: Vec<TropVertex> = s
        .cells
        .iter()
        .enumerate()
        .map(|(cell, c)| {
            let [a, b, cc] = &c.functional;
            TropVertex { cell, coords: [cc - a, cc - b] }
        })
        .collect();
    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for e in &s.edges {
        let (dir, mult) = outward(&s.cells[e.cells[0]], e);
        match (e.side, e.cells.as_slice()) {
            (Some(side), [c]) => {
                rays.push(Ray { vertex: *c, side, direction: dir, multiplicity: mult, position: ray_position(side, &vertices[*c].coords) })
            }
            (_, [a, b]) => edges.push(TropEdge { from: *a, to: *b, direction: dir, multiplicity: mult }),
            _ => unreachable!("edge in {} cells", e.cells.len()),
        }
    }
    TropicalCurve { n: s.n, vertices, edges, rays }
}

impl TropicalCurve {
    /// Multiplicity-weighted sum of outgoing primitive directions at each vertex.
    pub fn imbalance(&self) -> Vec<[i64; 2]> {
        let mut sums = vec![[0i64; 2]; self.vertices.len()];
        for e in &self.edges {
            let m = e.multiplicity as i64;
            for t in 0..2 {
                sums[e.from][t] += m * e.direction[t];
                sums[e.to][t] -= m * e.direction[t];
            }
        }
        for r in &self.rays {
            for t in 0..2 {
                sums[r.vertex][t] += r.multiplicity as i64 * r.direction[t];
            }
        }
        sums
    }

    pub fn is_balanced(&self) -> bool {
        self.imbalance().iter().all(|s| s == &[0, 0])
    }

    pub fn ray_count(&self) -> u64 {
        self.rays.iter().map(|r| r.multiplicity).sum()
    }

    /// Shortest distance in the quotient metric from a chart point to the curve.
    pub fn distance(&self, p: [f64; 2]) -> f64 {
        let vf: Vec<[f64; 2]> = self.vertices.iter().map(|v| [q_to_f64(&v.coords[0]), q_to_f64(&v.coords[1])]).collect();
        let seg = self.edges.iter().map(|e| segment_distance(p, vf[e.from], vf[e.to], false));
        let ray = self.rays.iter().map(|r| {
            let v = vf[r.vertex];
            segment_distance(p, v, [v[0] + r.direction[0] as f64, v[1] + r.direction[1] as f64], true)
        });
        let pts = vf.iter().map(|&v| quotient_norm([p[0] - v[0], p[1] - v[1]]));
        seg.chain(ray).chain(pts).fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pp = |c: &PlanePoint| serde_json::json!([format_q(&c[0]), format_q(&c[1])]);
        serde_json::json!({
            "schema": SCHEMA,
            "n": self.n,
            "chart": "(x-z, y-z)",
            "vertices": self.vertices.iter().map(|v| pp(&v.coords)).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| serde_json::json!({
                "from": e.from, "to": e.to, "direction": e.direction, "multiplicity": e.multiplicity,
            })).collect::<Vec<_>>(),
            "rays": self.rays.iter().map(|r| serde_json::json!({
                "vertex": r.vertex, "side": r.side, "direction": r.direction,
                "multiplicity": r.multiplicity, "position": format_q(&r.position),
            })).collect::<Vec<_>>(),
            "balanced": self.is_balanced(),
        })
    }
}

/// Chart `(u,v)` is the class of `(u,v,0)`; its norm is that of the projection onto `x+y+z=0`.
fn quotient_norm(d: [f64; 2]) -> f64 {
    let s = (d[0] + d[1]) / 3.0;
    ((d[0] - s).powi(2) + (d[1] - s).powi(2) + s * s).sqrt()
}

fn quotient_dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    let (sa, sb) = ((a[0] + a[1]) / 3.0, (b[0] + b[1]) / 3.0);
    (a[0] - sa) * (b[0] - sb) + (a[1] - sa) * (b[1] - sb) + sa * sb
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2], ray: bool) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = quotient_dot(ab, ab);
    let mut t = if len2 > 0.0 { quotient_dot(ap, ab) / len2 } else { 0.0 };
    t = if ray { t.max(0.0) } else { t.clamp(0.0, 1.0) };
    quotient_norm([p[0] - a[0] - t * ab[0], p[1] - a[1] - t * ab[1]])
}

/// The three sides of ray positions, each sorted decreasingly with multiplicity.
pub fn honeycomb_boundary(t: &TropicalCurve) -> Result<BoundarySpec> {
    let mut sides: [Vec<Q>; 3] = Default::default();
    for r in &t.rays {
        let (slot, want) = match r.side {
            Edge::Xy => (0, [1, 1]),
            Edge::Yz => (1, [-1, 0]),
            Edge::Zx => (2, [0, -1]),
        };
        if r.direction != want {
            return Err(Error::NotHiveDual(format!("ray on side {} has direction {:?}", r.side, r.direction)));
        }
        sides[slot].extend(std::iter::repeat_n(r.position.clone(), r.multiplicity as usize));
    }
    for (s, name) in sides.iter_mut().zip(["xy", "yz", "zx"]) {
        if s.len() != t.n {
            return Err(Error::NotHiveDual(format!("side {name} carries {} rays, expected {}", s.len(), t.n)));
        }
        s.sort_by(|a, b| b.cmp(a));
    }
    let [alpha, beta, gamma] = sides;
    Ok(BoundarySpec { alpha, beta, gamma })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmoebaSpec {
    /// Number of moduli `|x|` sampled on a log-uniform grid.
    pub moduli: usize,
    /// Phases per modulus.
    pub phases: usize,
    /// Range of `log|x|`.
    pub log_min: f64,
    pub log_max: f64,
}

impl Default for AmoebaSpec {
    fn default() -> Self {
        AmoebaSpec { moduli: 64, phases: 32, log_min: -8.0, log_max: 8.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmoebaCloud {
    pub spec: AmoebaSpec,
    /// Chart coordinates `(log|x|−log|z|, log|y|−log|z|)`.
    pub points: Vec<[f64; 2]>,
}

impl AmoebaCloud {
    pub fn scaled(&self, s: f64) -> Vec<[f64; 2]> {
        self.points.iter().map(|p| [p[0] * s, p[1] * s]).collect()
    }
}

/// Zeros with `y = 1` and `x = e^{s+iθ}` on the grid, solved for `z`.
pub fn amoeba_sample(f: &TernaryForm<f64>, spec: &AmoebaSpec) -> AmoebaCloud {
    let n = f.degree();
    let steps = spec.moduli.max(1);
    let rows: Vec<Vec<[f64; 2]>> = (0..steps)
        .into_par_iter()
        .map(|a| {
            let s = if steps == 1 { spec.log_min } else { spec.log_min + (spec.log_max - spec.log_min) * a as f64 / (steps - 1) as f64 };
            let mut out = Vec::new();
            for b in 0..spec.phases.max(1) {
                let theta = std::f64::consts::TAU * (b as f64 + 0.5) / spec.phases.max(1) as f64;
                let x = Complex64::from_polar(s.exp(), theta);
                // Coefficient of z^k is Σ_i F_{i,n−i−k,k} x^i.
                let coeffs: Vec<Complex64> =
                    (0..=n).map(|k| (0..=n - k).map(|i| x.powu(i as u32) * f.get(TriangleIndex::new(i, n - i - k, k))).sum()).collect();
                if coeffs.iter().filter(|c| !c.is_zero()).count() < 2 {
                    continue;
                }
                for z in complex_roots(&coeffs) {
                    let m = z.norm();
                    if m > 0.0 && m.is_finite() {
                        out.push([s - m.ln(), -m.ln()]);
                    }
                }
            }
            out
        })
        .collect();
    AmoebaCloud { spec: *spec, points: rows.concat() }
}

/// Largest distance from a scaled cloud point inside `window` (sup-norm in the chart) to the curve.
pub fn one_sided_distance(cloud: &[[f64; 2]], t: &TropicalCurve, center: [f64; 2], window: f64) -> f64 {
    cloud
        .par_iter()
        .filter(|p| (p[0] - center[0]).abs() <= window && (p[1] - center[1]).abs() <= window)
        .map(|&p| t.distance(p))
        .reduce(|| 0.0, f64::max)
}

/// Certifies that every cell's functional agrees with `l` on the cell and exceeds it elsewhere.
pub fn certify(s: &Subdivision, l: &Lifting) -> bool {
    s.cells.iter().all(|c| {
        index_set(s.n).into_iter().all(|p| {
            let on = c.points.contains(&p);
            let ord = c.eval(p).cmp(l.get(p));
            if on {
                ord.is_eq()
            } else {
                ord.is_gt()
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hive::{boundary, classify_hive, HiveClass};
    use crate::rational::qf;

    fn lift(n: usize, f: impl Fn(usize, usize, usize) -> i64) -> Lifting {
        Hive::from_fn(n, |t| q(f(t.i, t.j, t.k)))
    }

    #[test]
    fn constant_lifting_is_one_cell() {
        let s = regular_subdivision(&Hive::constant(3, q(2)));
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.cells[0].corners.len(), 3);
        assert_eq!(s.cells[0].points.len(), 10);
        assert_eq!(classify_subdivision(&s), SubdivisionClass::CoarseningOfStandard);
    }

    #[test]
    fn quadratic_gives_standard() {
        for n in 1..=5 {
            let l = Hive::quadratic(n);
            let s = regular_subdivision(&l);
            assert_eq!(s.cells.len(), n * n);
            assert_eq!(classify_subdivision(&s), SubdivisionClass::Standard);
            assert!(certify(&s, &l));
        }
    }

    #[test]
    fn long_edge_example() {
        let l = lift(2, |i, j, _| if i == 1 && j == 1 { -1 } else { 0 });
        let s = regular_subdivision(&l);
        let long = [TriangleIndex::new(2, 0, 0), TriangleIndex::new(0, 2, 0)];
        assert!(s.segments().iter().any(|sg| sg == &long || sg == &[long[1], long[0]]));
        assert_eq!(classify_subdivision(&s), SubdivisionClass::Other);
        assert_eq!(classify_hive(&l).class, HiveClass::NotHive);
    }

    #[test]
    fn unit_area_is_not_enough() {
        // four area-one triangles, two of them across the (1,1,0)-(0,0,2) diagonal
        let l = Hive::new(2, vec![qf(-3, 2), q(4), q(2), q(-1), q(-1), q(-2)]).unwrap();
        let s = regular_subdivision(&l);
        assert!(s.is_triangulation());
        assert_eq!(classify_subdivision(&s), SubdivisionClass::Other);
        assert_eq!(classify_hive(&l).class, HiveClass::NotHive);
    }

    #[test]
    fn honeycomb_of_quadratic() {
        for n in 1..=4 {
            let l = Hive::quadratic(n);
            let t = tropical_curve(&l);
            assert_eq!(t.vertices.len(), n * n);
            assert_eq!(t.ray_count(), 3 * n as u64);
            assert!(t.is_balanced());
            assert_eq!(honeycomb_boundary(&t).unwrap(), boundary(&l));
        }
        let b = honeycomb_boundary(&tropical_curve(&Hive::quadratic(2))).unwrap();
        assert_eq!(b.alpha, vec![q(1), q(-1)]);
    }

    #[test]
    fn order_one_rays() {
        let l = Hive::new(1, vec![q(5), q(2), q(-1)]).unwrap();
        let t = tropical_curve(&l);
        assert_eq!(t.vertices.len(), 1);
        assert_eq!(t.rays.len(), 3);
        assert_eq!(honeycomb_boundary(&t).unwrap(), boundary(&l));
    }

    #[test]
    fn constant_hive_rays_at_zero() {
        let t = tropical_curve(&Hive::constant(3, q(0)));
        let b = honeycomb_boundary(&t).unwrap();
        assert!(b.sides().iter().all(|s| s.iter().all(Zero::is_zero)));
        assert!(t.is_balanced());
    }

    #[test]
    fn linear_shift_translates() {
        let l = Hive::quadratic(3);
        let (a, b, c) = (q(2), q(-1), q(5));
        let t0 = tropical_curve(&l);
        let t1 = tropical_curve(&l.shift_linear(&a, &b, &c));
        // Vertex moves by −(a,b,c), i.e. by (c−a, c−b) in the chart.
        for (v0, v1) in t0.vertices.iter().zip(&t1.vertices) {
            assert_eq!(&v1.coords[0] - &v0.coords[0], &c - &a);
            assert_eq!(&v1.coords[1] - &v0.coords[1], &c - &b);
        }
    }

    #[test]
    fn line_amoeba_membership() {
        let f = TernaryForm::linear(1.0, 1.0, 1.0);
        let spec = AmoebaSpec { moduli: 40, phases: 16, log_min: -3.0, log_max: 3.0 };
        let cloud = amoeba_sample(&f, &spec);
        assert!(!cloud.points.is_empty());
        for p in &cloud.points {
            // |x|,|y|,|z| with z = 1 after rescaling: each at most the sum of the other two.
            let (x, y) = (p[0].exp(), p[1].exp());
            let tol = 1e-9 * (1.0 + x + y);
            assert!(x <= y + 1.0 + tol && y <= x + 1.0 + tol && 1.0 <= x + y + tol);
        }
    }

    #[test]
    fn monomial_amoeba_is_empty() {
        let f = TernaryForm::from_fn(3, |t| if t == TriangleIndex::new(1, 1, 1) { 2.0 } else { 0.0 });
        assert!(amoeba_sample(&f, &AmoebaSpec { moduli: 8, phases: 4, ..Default::default() }).points.is_empty());
    }
}
