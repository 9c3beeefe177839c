//! Hives on the triangular grid, their boundary, Horn feasibility and max-plus convolution.

mod simplex;

use std::ops::{Add, Sub};

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_q, q, q_from_json, serde_q_vec, Q};
use crate::SCHEMA;

/// A lattice point `(i,j,k)` of the triangle `i+j+k = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriangleIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl TriangleIndex {
    pub const fn new(i: usize, j: usize, k: usize) -> Self {
        TriangleIndex { i, j, k }
    }

    pub fn degree(&self) -> usize {
        self.i + self.j + self.k
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.i, self.j, self.k]
    }

    pub fn from_array(a: [usize; 3]) -> Self {
        TriangleIndex::new(a[0], a[1], a[2])
    }

    /// Index with signed offsets, `None` if any coordinate would go negative.
    pub fn offset(&self, di: isize, dj: isize, dk: isize) -> Option<Self> {
        let f = |x: usize, d: isize| x.checked_add_signed(d);
        Some(TriangleIndex::new(f(self.i, di)?, f(self.j, dj)?, f(self.k, dk)?))
    }
}

impl std::fmt::Display for TriangleIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

pub fn index_count(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// All of Δ_n in canonical order: `i` descending, then `j` descending.
///
/// So `n=1` gives `(1,0,0), (0,1,0), (0,0,1)`.
pub fn index_set(n: usize) -> Vec<TriangleIndex> {
    let mut out = Vec::with_capacity(index_count(n));
    for i in (0..=n).rev() {
        for j in (0..=n - i).rev() {
            out.push(TriangleIndex::new(i, j, n - i - j));
        }
    }
    out
}

/// Position of `idx` inside [`index_set`].
pub fn position(idx: TriangleIndex) -> usize {
    let m = idx.j + idx.k;
    m * (m + 1) / 2 + (m - idx.j)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RhombusFamily {
    #[serde(rename = "k")]
    K,
    #[serde(rename = "j")]
    J,
    #[serde(rename = "i")]
    I,
}

/// One unit rhombus: `plus[0] + plus[1] >= minus[0] + minus[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RhombusInequality {
    pub family: RhombusFamily,
    pub plus: [TriangleIndex; 2],
    /// `minus[0]` is the anchor `(i,j,k)`.
    pub minus: [TriangleIndex; 2],
}

impl RhombusInequality {
    pub fn anchor(&self) -> TriangleIndex {
        self.minus[0]
    }

    pub fn slack<T, F>(&self, value: F) -> T
    where
        T: Add<Output = T> + Sub<Output = T>,
        F: Fn(TriangleIndex) -> T,
    {
        value(self.plus[0]) + value(self.plus[1]) - value(self.minus[0]) - value(self.minus[1])
    }

    /// The coordinate that must be at least 2 at the anchor, as a 0-based axis.
    pub fn axis(&self) -> usize {
        match self.family {
            RhombusFamily::I => 0,
            RhombusFamily::J => 1,
            RhombusFamily::K => 2,
        }
    }
}

/// Every unit rhombus of Δ_n, `3n(n-1)/2` in total, grouped by family.
pub fn rhombus_inequalities(n: usize) -> Vec<RhombusInequality> {
    let mut out = Vec::with_capacity(3 * n * n.saturating_sub(1) / 2);
    let pts = index_set(n);
    for (family, d) in [
        (RhombusFamily::K, [[1, 0, -1], [0, 1, -1], [1, 1, -2]]),
        (RhombusFamily::J, [[1, -1, 0], [0, -1, 1], [1, -2, 1]]),
        (RhombusFamily::I, [[-1, 1, 0], [-1, 0, 1], [-2, 1, 1]]),
    ] {
        for &a in &pts {
            let at = |v: [isize; 3]| a.offset(v[0], v[1], v[2]);
            if let (Some(p0), Some(p1), Some(m1)) = (at(d[0]), at(d[1]), at(d[2])) {
                out.push(RhombusInequality { family, plus: [p0, p1], minus: [a, m1] });
            }
        }
    }
    out
}

/// Exact rational values on Δ_n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "HiveDoc", try_from = "HiveDoc")]
pub struct Hive {
    n: usize,
    values: Vec<Q>,
}

impl Hive {
    /// `values` in the order of [`index_set`].
    pub fn new(n: usize, values: Vec<Q>) -> Result<Self> {
        if values.len() != index_count(n) {
            return Err(Error::DimensionMismatch(format!("degree {n} needs {} values, got {}", index_count(n), values.len())));
        }
        Ok(Hive { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(TriangleIndex) -> Q) -> Self {
        Hive { n, values: index_set(n).into_iter().map(&mut f).collect() }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        Hive { n, values: vec![c; index_count(n)] }
    }

    /// `h = ij + jk + ki`, the basic strict hive.
    pub fn quadratic(n: usize) -> Self {
        Hive::from_fn(n, |t| q((t.i * t.j + t.j * t.k + t.k * t.i) as i64))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn get(&self, idx: TriangleIndex) -> &Q {
        debug_assert_eq!(idx.degree(), self.n);
        &self.values[position(idx)]
    }

    pub fn set(&mut self, idx: TriangleIndex, v: Q) {
        let p = position(idx);
        self.values[p] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (TriangleIndex, &Q)> {
        index_set(self.n).into_iter().zip(self.values.iter())
    }

    /// Adds the linear functional `ai + bj + ck`.
    pub fn shift_linear(&self, a: &Q, b: &Q, c: &Q) -> Hive {
        Hive::from_fn(self.n, |t| self.get(t).clone() + a * q(t.i as i64) + b * q(t.j as i64) + c * q(t.k as i64))
    }

    pub fn add(&self, other: &Hive) -> Result<Hive> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("degrees {} and {}", self.n, other.n)));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Hive { n: self.n, values })
    }

    pub fn scale(&self, s: &Q) -> Hive {
        Hive { n: self.n, values: self.values.iter().map(|v| v * s).collect() }
    }

    /// Shift so that `h_{n00} = 0`.
    pub fn normalized(&self) -> Hive {
        let c = self.get(TriangleIndex::new(self.n, 0, 0)).clone();
        Hive { n: self.n, values: self.values.iter().map(|v| v - &c).collect() }
    }

    pub fn slack(&self, r: &RhombusInequality) -> Q {
        r.slack(|t| self.get(t).clone())
    }

    pub fn classify(&self) -> HiveClassification {
        classify_hive(self)
    }

    pub fn boundary(&self) -> BoundarySpec {
        boundary(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HiveClass {
    StrictHive,
    Hive,
    NotHive,
}

impl HiveClass {
    pub fn is_hive(&self) -> bool {
        !matches!(self, HiveClass::NotHive)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            HiveClass::StrictHive => "strict_hive",
            HiveClass::Hive => "hive",
            HiveClass::NotHive => "not_hive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HiveClassification {
    pub class: HiveClass,
    pub violated: Vec<RhombusInequality>,
    pub tight: Vec<RhombusInequality>,
}

impl HiveClassification {
    fn from_signs(items: impl Iterator<Item = (RhombusInequality, std::cmp::Ordering)>) -> Self {
        use std::cmp::Ordering::*;
        let mut violated = Vec::new();
        let mut tight = Vec::new();
        for (r, s) in items {
            match s {
                Less => violated.push(r),
                Equal => tight.push(r),
                Greater => {}
            }
        }
        let class = if !violated.is_empty() {
            HiveClass::NotHive
        } else if !tight.is_empty() {
            HiveClass::Hive
        } else {
            HiveClass::StrictHive
        };
        HiveClassification { class, violated, tight }
    }
}

/// Exact classification; the degree 0 and 1 cases have no rhombi and are strict.
pub fn classify_hive(h: &Hive) -> HiveClassification {
    let rs = rhombus_inequalities(h.n);
    HiveClassification::from_signs(rs.into_iter().map(|r| {
        let s = h.slack(&r);
        (r, s.cmp(&Q::zero()))
    }))
}

/// Float classification: a slack below `-tol` is a violation, within `tol` of zero is tight.
pub fn classify_values_f64(n: usize, values: &[f64], tol: f64) -> HiveClassification {
    assert_eq!(values.len(), index_count(n));
    let rs = rhombus_inequalities(n);
    HiveClassification::from_signs(rs.into_iter().map(|r| {
        let s = r.slack(|t| values[position(t)]);
        let ord = if s < -tol {
            std::cmp::Ordering::Less
        } else if s <= tol {
            std::cmp::Ordering::Equal
        } else {
            std::cmp::Ordering::Greater
        };
        (r, ord)
    }))
}

/// Three length-`n` difference sequences along the sides of Δ_n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BoundaryDoc", try_from = "BoundaryDoc")]
pub struct BoundarySpec {
    pub alpha: Vec<Q>,
    pub beta: Vec<Q>,
    pub gamma: Vec<Q>,
}

impl BoundarySpec {
    pub fn degree(&self) -> Result<usize> {
        let n = self.alpha.len();
        if self.beta.len() != n || self.gamma.len() != n {
            return Err(Error::DimensionMismatch(format!("boundary lengths {}, {}, {}", n, self.beta.len(), self.gamma.len())));
        }
        Ok(n)
    }

    pub fn total(&self) -> Q {
        self.alpha.iter().chain(&self.beta).chain(&self.gamma).sum()
    }

    pub fn sides(&self) -> [&Vec<Q>; 3] {
        [&self.alpha, &self.beta, &self.gamma]
    }
}

/// The boundary differences for any value type; `f` is read on the sides of Δ_n only.
///
/// `alpha_m = h(n-m,m,0) - h(n-m+1,m-1,0)`, and cyclically for `beta`, `gamma`.
pub fn boundary_of<T, F>(n: usize, f: F) -> [Vec<T>; 3]
where
    T: Sub<Output = T>,
    F: Fn(TriangleIndex) -> T,
{
    let t = TriangleIndex::new;
    let alpha = (1..=n).map(|m| f(t(n - m, m, 0)) - f(t(n - m + 1, m - 1, 0))).collect();
    let beta = (1..=n).map(|m| f(t(0, n - m, m)) - f(t(0, n - m + 1, m - 1))).collect();
    let gamma = (1..=n).map(|m| f(t(m, 0, n - m)) - f(t(m - 1, 0, n - m + 1))).collect();
    [alpha, beta, gamma]
}

pub fn boundary(h: &Hive) -> BoundarySpec {
    let [alpha, beta, gamma] = boundary_of(h.n, |t| h.get(t).clone());
    BoundarySpec { alpha, beta, gamma }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HornResult {
    pub feasible: bool,
    pub witness: Option<Hive>,
}

/// Decides whether `b` is the boundary of a hive by exact phase-one simplex.
///
/// The witness is pinned at `h_{n00} = 0`.
pub fn horn_feasible(b: &BoundarySpec) -> Result<HornResult> {
    let n = b.degree()?;
    for (name, side) in [("alpha", &b.alpha), ("beta", &b.beta), ("gamma", &b.gamma)] {
        if side.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDecreasing(name));
        }
    }
    if !b.total().is_zero() {
        return Ok(HornResult { feasible: false, witness: None });
    }
    let m = index_count(n);
    let mut lp = simplex::Feasibility::new(m);
    lp.equal(vec![(position(TriangleIndex::new(n, 0, 0)), q(1))], q(0));
    let t = TriangleIndex::new;
    for mm in 1..=n {
        let rows = [
            (t(n - mm, mm, 0), t(n - mm + 1, mm - 1, 0), &b.alpha[mm - 1]),
            (t(0, n - mm, mm), t(0, n - mm + 1, mm - 1), &b.beta[mm - 1]),
            (t(mm, 0, n - mm), t(mm - 1, 0, n - mm + 1), &b.gamma[mm - 1]),
        ];
        for (hi, lo, v) in rows {
            lp.equal(vec![(position(hi), q(1)), (position(lo), q(-1))], v.clone());
        }
    }
    for r in rhombus_inequalities(n) {
        let row =
            vec![(position(r.plus[0]), q(1)), (position(r.plus[1]), q(1)), (position(r.minus[0]), q(-1)), (position(r.minus[1]), q(-1))];
        lp.at_least(row, q(0));
    }
    match lp.solve() {
        Some(x) => {
            let witness = Hive::new(n, x)?;
            Ok(HornResult { feasible: true, witness: Some(witness) })
        }
        None => Ok(HornResult { feasible: false, witness: None }),
    }
}

/// Max-plus convolution, of degree `n + n2`.
pub fn convolve(h: &Hive, h2: &Hive) -> Result<Hive> {
    for x in [h, h2] {
        let c = classify_hive(x);
        if !c.class.is_hive() {
            return Err(Error::NotAHive { violated: c.violated.len() });
        }
    }
    Ok(convolve_unchecked(h, h2))
}

/// Max-plus convolution without the hive check; used for arbitrary exponent tables.
pub fn convolve_unchecked(h: &Hive, h2: &Hive) -> Hive {
    let (n, n2) = (h.n, h2.n);
    Hive::from_fn(n + n2, |big| {
        let mut best: Option<Q> = None;
        for a in index_set(n) {
            if a.i > big.i || a.j > big.j || a.k > big.k {
                continue;
            }
            let b = TriangleIndex::new(big.i - a.i, big.j - a.j, big.k - a.k);
            let v = h.get(a) + h2.get(b);
            if best.as_ref().is_none_or(|x| &v > x) {
                best = Some(v);
            }
        }
        best.expect("some split always exists")
    })
}

/// Weakly decreasing rearrangement of a concatenation; the boundary of a convolution.
pub fn merge_decreasing(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut v: Vec<Q> = a.iter().chain(b).cloned().collect();
    v.sort_by(|x, y| y.cmp(x));
    v
}

#[derive(Serialize, Deserialize)]
struct HiveEntry {
    i: usize,
    j: usize,
    k: usize,
    v: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct HiveDoc {
    #[serde(default = "schema_default")]
    schema: String,
    n: usize,
    values: Vec<HiveEntry>,
}

fn schema_default() -> String {
    SCHEMA.to_string()
}

pub(crate) fn check_schema(s: &str) -> Result<()> {
    if s != SCHEMA {
        return Err(Error::Schema(format!("unsupported schema {s:?}")));
    }
    Ok(())
}

impl From<Hive> for HiveDoc {
    fn from(h: Hive) -> Self {
        let values = h.iter().map(|(t, v)| HiveEntry { i: t.i, j: t.j, k: t.k, v: format_q(v).into() }).collect();
        HiveDoc { schema: SCHEMA.into(), n: h.n, values }
    }
}

impl TryFrom<HiveDoc> for Hive {
    type Error = Error;
    fn try_from(d: HiveDoc) -> Result<Self> {
        check_schema(&d.schema)?;
        let n = d.n;
        let mut slots: Vec<Option<Q>> = vec![None; index_count(n)];
        for e in d.values {
            if e.i + e.j + e.k != n {
                return Err(Error::Schema(format!("index ({},{},{}) not in degree {n}", e.i, e.j, e.k)));
            }
            let p = position(TriangleIndex::new(e.i, e.j, e.k));
            if slots[p].replace(q_from_json(&e.v)?).is_some() {
                return Err(Error::Schema(format!("duplicate index ({},{},{})", e.i, e.j, e.k)));
            }
        }
        let values = slots
            .into_iter()
            .zip(index_set(n))
            .map(|(v, t)| v.ok_or_else(|| Error::Schema(format!("missing index {t}"))))
            .collect::<Result<Vec<_>>>()?;
        Hive::new(n, values)
    }
}

#[derive(Serialize, Deserialize)]
struct BoundaryDoc {
    #[serde(default = "schema_default")]
    schema: String,
    #[serde(with = "serde_q_vec")]
    alpha: Vec<Q>,
    #[serde(with = "serde_q_vec")]
    beta: Vec<Q>,
    #[serde(with = "serde_q_vec")]
    gamma: Vec<Q>,
}

impl From<BoundarySpec> for BoundaryDoc {
    fn from(b: BoundarySpec) -> Self {
        BoundaryDoc { schema: SCHEMA.into(), alpha: b.alpha, beta: b.beta, gamma: b.gamma }
    }
}

impl TryFrom<BoundaryDoc> for BoundarySpec {
    type Error = Error;
    fn try_from(d: BoundaryDoc) -> Result<Self> {
        check_schema(&d.schema)?;
        Ok(BoundarySpec { alpha: d.alpha, beta: d.beta, gamma: d.gamma })
    }
}

/// Largest absolute value, handy for scaling tolerances.
pub fn max_abs(h: &Hive) -> Q {
    h.values.iter().map(|v| v.abs()).max().unwrap_or_else(Q::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn index_set_order_and_counts() {
        let t = TriangleIndex::new;
        assert_eq!(index_set(1), vec![t(1, 0, 0), t(0, 1, 0), t(0, 0, 1)]);
        assert_eq!(index_set(2).len(), 6);
        assert_eq!(index_set(4).len(), 15);
        for n in 0..7 {
            for (p, idx) in index_set(n).into_iter().enumerate() {
                assert_eq!(position(idx), p);
            }
        }
    }

    #[test]
    fn rhombus_counts() {
        assert!(rhombus_inequalities(1).is_empty());
        let r2 = rhombus_inequalities(2);
        assert_eq!(r2.len(), 3);
        let fams: Vec<_> = r2.iter().map(|r| r.family).collect();
        assert_eq!(fams, vec![RhombusFamily::K, RhombusFamily::J, RhombusFamily::I]);
        assert_eq!(rhombus_inequalities(3).len(), 9);
        for n in 0..8 {
            assert_eq!(rhombus_inequalities(n).len(), 3 * n * n.saturating_sub(1) / 2);
        }
    }

    #[test]
    fn constant_is_hive_not_strict() {
        for n in 2..6 {
            assert_eq!(Hive::constant(n, q(5)).classify().class, HiveClass::Hive);
        }
    }

    #[test]
    fn quadratic_is_strict_with_unit_slack() {
        for n in 2..7 {
            let h = Hive::quadratic(n);
            assert_eq!(h.classify().class, HiveClass::StrictHive);
            for r in rhombus_inequalities(n) {
                assert_eq!(h.slack(&r), q(1));
            }
        }
    }

    #[test]
    fn dent_at_110_violates_i_and_j_families() {
        let mut h = Hive::constant(2, q(0));
        h.set(TriangleIndex::new(1, 1, 0), q(-1));
        let c = h.classify();
        assert_eq!(c.class, HiveClass::NotHive);
        let mut v: Vec<_> = c.violated.iter().map(|r| (r.family, r.anchor())).collect();
        v.sort_by_key(|x| x.1);
        assert_eq!(v, vec![(RhombusFamily::J, TriangleIndex::new(0, 2, 0)), (RhombusFamily::I, TriangleIndex::new(2, 0, 0)),]);
    }

    #[test]
    fn quadratic_boundary() {
        let b = boundary(&Hive::quadratic(2));
        assert_eq!(b.alpha, vec![q(1), q(-1)]);
        assert_eq!(b.beta, b.alpha);
        assert_eq!(b.gamma, b.alpha);
        for n in 1..7 {
            let b = boundary(&Hive::quadratic(n));
            let want: Vec<Q> = (1..=n).map(|k| q(n as i64 - 2 * k as i64 + 1)).collect();
            assert_eq!(b.alpha, want);
            assert_eq!(b.beta, want);
            assert_eq!(b.gamma, want);
            assert!(b.total().is_zero());
        }
    }

    #[test]
    fn horn_examples() {
        let b = boundary(&Hive::quadratic(2));
        let r = horn_feasible(&b).unwrap();
        assert!(r.feasible);
        assert_eq!(boundary(r.witness.as_ref().unwrap()), b);

        let bad_trace = BoundarySpec { alpha: vec![q(1), q(0)], beta: vec![q(0), q(0)], gamma: vec![q(0), q(0)] };
        assert!(!horn_feasible(&bad_trace).unwrap().feasible);

        let hand = BoundarySpec { alpha: vec![q(0), q(0)], beta: vec![q(0), q(0)], gamma: vec![q(1), q(-1)] };
        assert!(!horn_feasible(&hand).unwrap().feasible);

        let unsorted = BoundarySpec { alpha: vec![q(-1), q(1)], beta: vec![q(0), q(0)], gamma: vec![q(0), q(0)] };
        assert!(matches!(horn_feasible(&unsorted), Err(Error::NotDecreasing("alpha"))));

        let ragged = BoundarySpec { alpha: vec![q(0)], beta: vec![q(0), q(0)], gamma: vec![q(0), q(0)] };
        assert!(matches!(horn_feasible(&ragged), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn horn_degree_zero_and_one() {
        let b0 = BoundarySpec { alpha: vec![], beta: vec![], gamma: vec![] };
        assert!(horn_feasible(&b0).unwrap().feasible);
        let b1 = BoundarySpec { alpha: vec![q(2)], beta: vec![qf(-1, 2)], gamma: vec![qf(-3, 2)] };
        let r = horn_feasible(&b1).unwrap();
        assert!(r.feasible);
        assert_eq!(boundary(&r.witness.unwrap()), b1);
    }

    #[test]
    fn convolve_examples() {
        let h = Hive::quadratic(2);
        let c = Hive::constant(0, q(7));
        let out = convolve(&h, &c).unwrap();
        assert_eq!(out, h.add(&Hive::constant(2, q(7))).unwrap());

        let a = Hive::constant(3, q(2));
        let b = Hive::constant(2, q(-5));
        assert_eq!(convolve(&a, &b).unwrap(), Hive::constant(5, q(-3)));

        let o1 = Hive::new(1, vec![q(1), q(4), q(-2)]).unwrap();
        let o2 = Hive::new(1, vec![q(3), q(0), q(5)]).unwrap();
        let r = convolve(&o1, &o2).unwrap();
        let t = TriangleIndex::new;
        assert_eq!(r.get(t(1, 1, 0)), &q(7)); // max(1+0, 4+3)
        assert_eq!(r.get(t(2, 0, 0)), &q(4));
        assert_eq!(r.get(t(0, 2, 0)), &q(4));
        assert_eq!(r.get(t(0, 0, 2)), &q(3));

        let mut bad = Hive::constant(2, q(0));
        bad.set(t(1, 1, 0), q(-1));
        assert!(matches!(convolve(&bad, &o1), Err(Error::NotAHive { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let h = Hive::quadratic(3).scale(&qf(1, 3));
        let s = serde_json::to_string(&h).unwrap();
        assert!(s.contains("\"schema\":\"hivecurve/1\""));
        assert!(s.contains("\"2/3\""));
        let back: Hive = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);

        let b = boundary(&h);
        let bs = serde_json::to_string(&b).unwrap();
        let back: BoundarySpec = serde_json::from_str(&bs).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn json_rejects_incomplete_and_wrong_schema() {
        let doc = r#"{"n":1,"values":[{"i":1,"j":0,"k":0,"v":"0/1"}]}"#;
        assert!(serde_json::from_str::<Hive>(doc).is_err());
        let doc = r#"{"schema":"other/2","n":0,"values":[{"i":0,"j":0,"k":0,"v":1}]}"#;
        assert!(serde_json::from_str::<Hive>(doc).is_err());
        let doc = r#"{"n":0,"values":[{"i":0,"j":0,"k":0,"v":1}]}"#;
        assert_eq!(serde_json::from_str::<Hive>(doc).unwrap(), Hive::constant(0, q(1)));
    }
}
