//! Viro patchworking over the four sign quadrants of the real projective plane.
//!
//! Charts are glued on the octahedron `|x|+|y|+|z| = n`, the double cover of ℝP²: octant
//! `(s₁,s₂,s₃)` holds the point `(s₁i, s₂j, s₃k)`, and a chart for quadrant ε fills both octants
//! ε and −ε. A component of the real curve is a pseudoline exactly when its lift is a single
//! antipodally invariant cycle; an oval lifts to two disjoint antipodal cycles.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hive::{index_set, position, TriangleIndex};
use crate::poly::descartes_sign_changes;
use crate::tropical::{regular_subdivision, Lifting, Subdivision};
use crate::SCHEMA;

pub type Quadrant = [i8; 3];

/// One representative per class `T_ε = T_{−ε}`.
pub const QUADRANTS: [Quadrant; 4] = [[1, 1, 1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]];

#[derive(Clone, Debug, PartialEq)]
pub struct SignedLifting {
    pub lifting: Lifting,
    /// `±1` per point, in canonical order.
    pub signs: Vec<i8>,
}

impl SignedLifting {
    pub fn new(lifting: Lifting, signs: Vec<i8>) -> Result<Self> {
        let want = index_set(lifting.degree()).len();
        if signs.len() != want {
            return Err(Error::DimensionMismatch(format!("{} signs for {want} points", signs.len())));
        }
        if signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::Schema("signs must be +1 or -1".into()));
        }
        Ok(SignedLifting { lifting, signs })
    }

    pub fn all_plus(lifting: Lifting) -> Self {
        let signs = vec![1; index_set(lifting.degree()).len()];
        SignedLifting { lifting, signs }
    }

    pub fn degree(&self) -> usize {
        self.lifting.degree()
    }

    pub fn sign(&self, p: TriangleIndex) -> i8 {
        self.signs[position(p)]
    }

    /// `sign(f)·ε₁^i ε₂^j ε₃^k`.
    pub fn effective_sign(&self, p: TriangleIndex, eps: Quadrant) -> i8 {
        let pow = |e: i8, m: usize| if e < 0 && m % 2 == 1 { -1 } else { 1 };
        self.sign(p) * pow(eps[0], p.i) * pow(eps[1], p.j) * pow(eps[2], p.k)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut doc = serde_json::to_value(&self.lifting).expect("hive serializes");
        doc["signs"] = serde_json::json!(self.signs);
        doc
    }

    /// A hive document, optionally with a `"signs"` array in canonical order (default all plus).
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let lifting: Lifting = serde_json::from_value(v.clone()).map_err(|e| Error::Schema(e.to_string()))?;
        match v.get("signs") {
            None => Ok(SignedLifting::all_plus(lifting)),
            Some(s) => {
                let signs: Vec<i8> = serde_json::from_value(s.clone()).map_err(|e| Error::Schema(e.to_string()))?;
                SignedLifting::new(lifting, signs)
            }
        }
    }
}

/// A curve segment joining the midpoints of two triangle edges.
pub type Segment = [[TriangleIndex; 2]; 2];

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub n: usize,
    pub quadrant: Quadrant,
    /// Effective sign per point, canonical order.
    pub signs: Vec<i8>,
    pub triangles: Vec<[TriangleIndex; 3]>,
    pub segments: Vec<Segment>,
}

fn midpoint(e: &[TriangleIndex; 2]) -> [f64; 3] {
    let (a, b) = (e[0].as_array(), e[1].as_array());
    [0, 1, 2].map(|t| (a[t] + b[t]) as f64 / 2.0)
}

impl Chart {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "quadrant": self.quadrant,
            "signs": self.signs,
            "segments": self.segments.iter().map(|s| [midpoint(&s[0]), midpoint(&s[1])]).collect::<Vec<_>>(),
        })
    }
}

/// Signs and midpoint segments of one quadrant. Needs a triangulation.
pub fn build_chart(sl: &SignedLifting, eps: Quadrant) -> Result<Chart> {
    build_chart_on(sl, &regular_subdivision(&sl.lifting), eps)
}

pub fn build_chart_on(sl: &SignedLifting, sub: &Subdivision, eps: Quadrant) -> Result<Chart> {
    if !sub.is_triangulation() {
        return Err(Error::NotATriangulation);
    }
    let n = sl.degree();
    let signs: Vec<i8> = index_set(n).into_iter().map(|p| sl.effective_sign(p, eps)).collect();
    let triangles: Vec<[TriangleIndex; 3]> = sub.cells.iter().map(|c| [c.corners[0], c.corners[1], c.corners[2]]).collect();
    let mut segments = Vec::new();
    for t in &triangles {
        let s = t.map(|p| signs[position(p)]);
        // The vertex whose sign differs from the other two, if any.
        let odd = (0..3).find(|&v| s[v] != s[(v + 1) % 3] && s[v] != s[(v + 2) % 3]);
        if let Some(o) = odd {
            let (a, b) = (t[(o + 1) % 3], t[(o + 2) % 3]);
            segments.push([[t[o], a], [t[o], b]]);
        }
    }
    Ok(Chart { n, quadrant: eps, signs, triangles, segments })
}

pub fn build_charts(sl: &SignedLifting) -> Result<Vec<Chart>> {
    let sub = regular_subdivision(&sl.lifting);
    QUADRANTS.iter().map(|&e| build_chart_on(sl, &sub, e)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentClass {
    Oval,
    Pseudoline,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub class: ComponentClass,
    /// Number of curve segments in one lift.
    pub segments: usize,
    /// Whether the positive triangle lies inside (ovals only).
    pub encloses_positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyReport {
    #[serde(default = "schema")]
    pub schema: String,
    pub n: usize,
    pub components: Vec<Component>,
    pub ovals: usize,
    pub pseudoline: bool,
    /// Number of ovals enclosing the positive triangle.
    pub nesting: usize,
    pub vinnikov: bool,
}

fn schema() -> String {
    SCHEMA.to_string()
}

type Key = [i64; 3];

fn lift(p: TriangleIndex, s: Quadrant) -> Key {
    let a = p.as_array();
    [0, 1, 2].map(|t| s[t] as i64 * a[t] as i64)
}

fn mid_key(e: &[TriangleIndex; 2], s: Quadrant) -> Key {
    let (a, b) = (lift(e[0], s), lift(e[1], s));
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn neg(k: Key) -> Key {
    k.map(|x| -x)
}

/// Components, their classes and the nesting of the positive triangle.
pub fn glue_and_classify(charts: &[Chart]) -> Result<TopologyReport> {
    let quads: BTreeSet<Quadrant> = charts.iter().map(|c| canonical(c.quadrant)).collect();
    if charts.len() != 4 || quads.len() != 4 {
        return Err(Error::DimensionMismatch("need one chart per quadrant class".into()));
    }
    let n = charts[0].n;
    if charts.iter().any(|c| c.n != n || c.triangles != charts[0].triangles) {
        return Err(Error::DimensionMismatch("charts come from different triangulations".into()));
    }
    let octants = |c: &Chart| [c.quadrant, c.quadrant.map(|x| -x)];

    // Curve graph on doubled midpoint coordinates.
    let mut adj: BTreeMap<Key, Vec<Key>> = BTreeMap::new();
    for c in charts {
        for s in octants(c) {
            for seg in &c.segments {
                let (a, b) = (mid_key(&seg[0], s), mid_key(&seg[1], s));
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            }
        }
    }
    if let Some((k, v)) = adj.iter().find(|(_, v)| v.len() != 2) {
        return Err(Error::DanglingSegment(format!("midpoint {:?}/2 meets {} segments", k, v.len())));
    }
    let mut seen: BTreeSet<Key> = BTreeSet::new();
    let mut cycles: Vec<BTreeSet<Key>> = Vec::new();
    for &start in adj.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut cyc = BTreeSet::new();
        let (mut prev, mut cur) = (start, start);
        loop {
            cyc.insert(cur);
            seen.insert(cur);
            let nb = &adj[&cur];
            let next = if nb[0] != prev || cur == start && cyc.len() == 1 { nb[0] } else { nb[1] };
            prev = cur;
            cur = next;
            if cur == start {
                break;
            }
        }
        cycles.push(cyc);
    }

    // Lattice graph on the sphere for the separation test.
    let mut vid: BTreeMap<Key, usize> = BTreeMap::new();
    let mut ledges: Vec<(usize, usize, Key)> = Vec::new();
    for c in charts {
        for s in octants(c) {
            for t in &c.triangles {
                for e in 0..3 {
                    let (a, b) = (t[e], t[(e + 1) % 3]);
                    let ids = [a, b].map(|p| {
                        let len = vid.len();
                        *vid.entry(lift(p, s)).or_insert(len)
                    });
                    ledges.push((ids[0], ids[1], mid_key(&[a, b], s)));
                }
            }
        }
    }
    let p0 = lift(TriangleIndex::new(n, 0, 0), [1, 1, 1]);
    let separates = |cut: &BTreeSet<Key>| {
        let mut g = vec![Vec::new(); vid.len()];
        for (a, b, m) in &ledges {
            if !cut.contains(m) {
                g[*a].push(*b);
                g[*b].push(*a);
            }
        }
        let (src, dst) = (vid[&p0], vid[&neg(p0)]);
        let mut vis = vec![false; g.len()];
        let mut queue = VecDeque::from([src]);
        vis[src] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &g[u] {
                if !vis[w] {
                    vis[w] = true;
                    queue.push_back(w);
                }
            }
        }
        !vis[dst]
    };

    let mut components = Vec::new();
    let mut paired: BTreeSet<usize> = BTreeSet::new();
    for (ci, cyc) in cycles.iter().enumerate() {
        if paired.contains(&ci) {
            continue;
        }
        let first = *cyc.iter().next().expect("nonempty cycle");
        if cyc.contains(&neg(first)) {
            components.push(Component { class: ComponentClass::Pseudoline, segments: cyc.len(), encloses_positive: false });
            continue;
        }
        let twin = cycles.iter().position(|c| c.contains(&neg(first))).expect("antipodal lift");
        paired.insert(twin);
        components.push(Component { class: ComponentClass::Oval, segments: cyc.len(), encloses_positive: separates(cyc) });
    }
    let ovals = components.iter().filter(|c| c.class == ComponentClass::Oval).count();
    let pseudolines = components.len() - ovals;
    if pseudolines > 1 {
        return Err(Error::DanglingSegment(format!("{pseudolines} disjoint pseudolines")));
    }
    let nesting = components.iter().filter(|c| c.encloses_positive).count();
    let mut report = TopologyReport { schema: schema(), n, components, ovals, pseudoline: pseudolines == 1, nesting, vinnikov: false };
    report.vinnikov = is_vinnikov_topology(&report, n);
    Ok(report)
}

fn canonical(q: Quadrant) -> Quadrant {
    if q[2] < 0 {
        q.map(|x| -x)
    } else {
        q
    }
}

/// ⌊n/2⌋ ovals all enclosing the positive triangle, plus a pseudoline when `n` is odd.
pub fn is_vinnikov_topology(r: &TopologyReport, n: usize) -> bool {
    r.ovals == n / 2 && r.pseudoline == (n % 2 == 1) && r.nesting == n / 2
}

pub fn classify_topology(sl: &SignedLifting) -> Result<TopologyReport> {
    glue_and_classify(&build_charts(sl)?)
}

/// Sign flips in a list of nonzero signs.
pub fn sign_changes(signs: &[i8]) -> usize {
    descartes_sign_changes(&signs.iter().map(|&s| s as i64).collect::<Vec<_>>())
}

/// Flips of the effective sign in quadrant `eps` along a path of subdivision edges.
pub fn sign_changes_along_path(path: &[TriangleIndex], sl: &SignedLifting, eps: Quadrant) -> Result<usize> {
    let sub = regular_subdivision(&sl.lifting);
    let segs: BTreeSet<(usize, usize)> =
        sub.segments().iter().flat_map(|[a, b]| [(position(*a), position(*b)), (position(*b), position(*a))]).collect();
    for w in path.windows(2) {
        if !segs.contains(&(position(w[0]), position(w[1]))) {
            return Err(Error::NotAPath(w[0].to_string(), w[1].to_string()));
        }
    }
    Ok(sign_changes(&path.iter().map(|&p| sl.effective_sign(p, eps)).collect::<Vec<_>>()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationPath {
    /// Coordinate with the gap: the path runs from that corner to the opposite side.
    pub axis: usize,
    pub vertices: Vec<TriangleIndex>,
}

impl ViolationPath {
    pub fn edges(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// The quadrant flipping the sign of the path's axis.
    pub fn quadrant(&self) -> Quadrant {
        let mut q = [1, 1, 1];
        q[self.axis] = -1;
        q
    }
}

fn bfs(adj: &BTreeMap<usize, Vec<usize>>, from: usize, goal: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let mut prev: BTreeMap<usize, usize> = BTreeMap::from([(from, from)]);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if goal(u) {
            let mut path = vec![u];
            let mut x = u;
            while x != from {
                x = prev[&x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for &w in adj.get(&u).into_iter().flatten() {
            if let std::collections::btree_map::Entry::Vacant(e) = prev.entry(w) {
                e.insert(u);
                queue.push_back(w);
            }
        }
    }
    None
}

/// A short edge path from a corner to the opposite side through an edge with a coordinate gap
/// above one. `None` when no such edge exists.
pub fn find_violation_path(s: &Subdivision) -> Option<ViolationPath> {
    let n = s.n;
    let pts = index_set(n);
    let segs = s.segments();
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for [a, b] in &segs {
        adj.entry(position(*a)).or_default().push(position(*b));
        adj.entry(position(*b)).or_default().push(position(*a));
    }
    let mut best: Option<ViolationPath> = None;
    for [a, b] in &segs {
        for axis in 0..3 {
            let (ca, cb) = (a.as_array()[axis], b.as_array()[axis]);
            if ca.abs_diff(cb) <= 1 {
                continue;
            }
            let (hi, lo) = if ca > cb { (*a, *b) } else { (*b, *a) };
            let mut corner = [0; 3];
            corner[axis] = n;
            let Some(up) = bfs(&adj, position(TriangleIndex::from_array(corner)), |u| u == position(hi)) else {
                continue;
            };
            let Some(down) = bfs(&adj, position(lo), |u| pts[u].as_array()[axis] == 0) else {
                continue;
            };
            let vertices: Vec<TriangleIndex> = up.into_iter().chain(down).map(|u| pts[u]).collect();
            if best.as_ref().is_none_or(|b| vertices.len() < b.vertices.len()) {
                best = Some(ViolationPath { axis, vertices });
            }
        }
    }
    best
}

/// Sign changes along the pseudoline made of the path in its flipped quadrant and its copy in
/// the positive quadrant.
pub fn glued_path_sign_changes(sl: &SignedLifting, path: &ViolationPath) -> Result<usize> {
    Ok(sign_changes_along_path(&path.vertices, sl, path.quadrant())? + sign_changes_along_path(&path.vertices, sl, [1, 1, 1])?)
}
