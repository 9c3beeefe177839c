//! Homogeneous ternary forms `F = sum F_ijk x^i y^j z^k` stored over Δ_n.

use std::ops::Neg;

use num::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

use crate::error::{Edge, Error, Result};
use crate::hive::{index_count, index_set, position, TriangleIndex};
use crate::poly::Poly;
use crate::rational::{f64_to_q, format_q, q_from_json, q_to_f64, Q};
use crate::SCHEMA;

/// Scalar bound shared by the exact and float paths.
pub trait Scalar: Num + Clone + Neg<Output = Self> + FromPrimitive + PartialOrd + std::fmt::Debug {}
impl<T: Num + Clone + Neg<Output = T> + FromPrimitive + PartialOrd + std::fmt::Debug> Scalar for T {}

#[derive(Clone, Debug, PartialEq)]
pub struct TernaryForm<T> {
    n: usize,
    coeffs: Vec<T>,
}

fn from_usize<T: Scalar>(x: usize) -> T {
    T::from_usize(x).expect("small integer")
}

impl<T: Scalar> TernaryForm<T> {
    /// `coeffs` in the order of [`index_set`].
    pub fn new(n: usize, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != index_count(n) {
            return Err(Error::DimensionMismatch(format!("degree {n} form needs {} coefficients, got {}", index_count(n), coeffs.len())));
        }
        Ok(TernaryForm { n, coeffs })
    }

    pub fn from_fn(n: usize, f: impl FnMut(TriangleIndex) -> T) -> Self {
        TernaryForm { n, coeffs: index_set(n).into_iter().map(f).collect() }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn get(&self, t: TriangleIndex) -> &T {
        &self.coeffs[position(t)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (TriangleIndex, &T)> {
        index_set(self.n).into_iter().zip(self.coeffs.iter())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TernaryForm<U> {
        TernaryForm { n: self.n, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// `(x + y + z)^n` style multinomial expansions and other products.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); index_count(self.n + other.n)];
        for (a, x) in self.iter() {
            for (b, y) in other.iter() {
                let t = TriangleIndex::new(a.i + b.i, a.j + b.j, a.k + b.k);
                let p = position(t);
                out[p] = out[p].clone() + x.clone() * y.clone();
            }
        }
        TernaryForm { n: self.n + other.n, coeffs: out }
    }

    pub fn linear(a: T, b: T, c: T) -> Self {
        TernaryForm { n: 1, coeffs: vec![a, b, c] }
    }

    pub fn eval(&self, x: &T, y: &T, z: &T) -> T {
        let pw = |v: &T| {
            let mut p = vec![T::one()];
            for _ in 0..self.n {
                let last = p.last().unwrap().clone();
                p.push(last * v.clone());
            }
            p
        };
        let (px, py, pz) = (pw(x), pw(y), pw(z));
        self.iter().fold(T::zero(), |acc, (t, c)| acc + c.clone() * px[t.i].clone() * py[t.j].clone() * pz[t.k].clone())
    }

    /// `F(-1,u,0)`, `F(0,-1,u)` or `F(u,0,-1)`.
    pub fn restrict_edge(&self, which: Edge) -> Poly<T> {
        let n = self.n;
        let sgn = |e: usize| if e.is_multiple_of(2) { T::one() } else { -T::one() };
        let c = (0..=n)
            .map(|d| {
                let (t, e) = match which {
                    Edge::Xy => (TriangleIndex::new(n - d, d, 0), n - d),
                    Edge::Yz => (TriangleIndex::new(0, n - d, d), n - d),
                    Edge::Zx => (TriangleIndex::new(d, 0, n - d), n - d),
                };
                self.get(t).clone() * sgn(e)
            })
            .collect();
        Poly::new(c)
    }

    /// `s -> F(base + s dir)` as a polynomial in `s`.
    pub fn restrict_line(&self, base: &[T; 3], dir: &[T; 3]) -> Poly<T> {
        let n = self.n;
        // powers[v][e] = (base_v + s dir_v)^e
        let powers: Vec<Vec<Vec<T>>> = (0..3)
            .map(|v| {
                let lin = [base[v].clone(), dir[v].clone()];
                let mut out = vec![vec![T::one()]];
                for _ in 0..n {
                    let prev = out.last().unwrap();
                    let mut next = vec![T::zero(); prev.len() + 1];
                    for (i, a) in prev.iter().enumerate() {
                        next[i] = next[i].clone() + a.clone() * lin[0].clone();
                        next[i + 1] = next[i + 1].clone() + a.clone() * lin[1].clone();
                    }
                    out.push(next);
                }
                out
            })
            .collect();
        let mut acc = vec![T::zero(); n + 1];
        for (t, c) in self.iter() {
            if c.is_zero() {
                continue;
            }
            let (a, b, d) = (&powers[0][t.i], &powers[1][t.j], &powers[2][t.k]);
            for (ia, xa) in a.iter().enumerate() {
                for (ib, xb) in b.iter().enumerate() {
                    let ab = c.clone() * xa.clone() * xb.clone();
                    for (id, xd) in d.iter().enumerate() {
                        acc[ia + ib + id] = acc[ia + ib + id].clone() + ab.clone() * xd.clone();
                    }
                }
            }
        }
        Poly::new(acc)
    }

    /// `x0 dF/dx + y0 dF/dy + z0 dF/dz`, of degree `n - 1`.
    pub fn directional_derivative(&self, dir: &[T; 3]) -> Result<Self> {
        if self.n == 0 {
            return Err(Error::DimensionMismatch("derivative of a degree 0 form".into()));
        }
        let m = self.n - 1;
        Ok(TernaryForm::from_fn(m, |t| {
            let f = |s: TriangleIndex, e: usize, d: &T| self.get(s).clone() * from_usize::<T>(e) * d.clone();
            f(TriangleIndex::new(t.i + 1, t.j, t.k), t.i + 1, &dir[0])
                + f(TriangleIndex::new(t.i, t.j + 1, t.k), t.j + 1, &dir[1])
                + f(TriangleIndex::new(t.i, t.j, t.k + 1), t.k + 1, &dir[2])
        }))
    }

    /// `None` when every coefficient is positive, else the first offending index.
    pub fn first_nonpositive(&self) -> Option<TriangleIndex> {
        self.iter().find(|(_, c)| **c <= T::zero()).map(|(t, _)| t)
    }
}

impl TernaryForm<f64> {
    pub fn to_exact(&self) -> Result<TernaryForm<Q>> {
        let c = self
            .coeffs
            .iter()
            .map(|&x| f64_to_q(x).ok_or_else(|| Error::Numeric(format!("non-finite coefficient {x}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(TernaryForm { n: self.n, coeffs: c })
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl TernaryForm<Q> {
    pub fn to_f64(&self) -> TernaryForm<f64> {
        self.map(q_to_f64)
    }
}

#[derive(Serialize, Deserialize)]
struct FormEntry {
    i: usize,
    j: usize,
    k: usize,
    v: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct FormDoc {
    #[serde(default = "default_schema")]
    schema: String,
    n: usize,
    values: Vec<FormEntry>,
}

fn default_schema() -> String {
    SCHEMA.into()
}

impl TernaryForm<Q> {
    pub fn to_json(&self) -> serde_json::Value {
        form_doc(self, |v| format_q(v).into())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: FormDoc = serde_json::from_value(v.clone()).map_err(|e| Error::Schema(e.to_string()))?;
        crate::hive::check_schema(&doc.schema)?;
        let n = doc.n;
        let mut slots: Vec<Option<Q>> = vec![None; index_count(n)];
        for e in doc.values {
            if e.i + e.j + e.k != n {
                return Err(Error::Schema(format!("index ({},{},{}) not in degree {n}", e.i, e.j, e.k)));
            }
            let p = position(TriangleIndex::new(e.i, e.j, e.k));
            if slots[p].replace(q_from_json(&e.v)?).is_some() {
                return Err(Error::Schema(format!("duplicate index ({},{},{})", e.i, e.j, e.k)));
            }
        }
        let coeffs = slots
            .into_iter()
            .zip(index_set(n))
            .map(|(v, t)| v.ok_or_else(|| Error::Schema(format!("missing index {t}"))))
            .collect::<Result<Vec<_>>>()?;
        TernaryForm::new(n, coeffs)
    }
}

impl TernaryForm<f64> {
    pub fn to_json(&self) -> serde_json::Value {
        form_doc(self, |v| serde_json::json!(v))
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        Ok(TernaryForm::<Q>::from_json(v)?.to_f64())
    }
}

fn form_doc<T: Scalar>(f: &TernaryForm<T>, v: impl Fn(&T) -> serde_json::Value) -> serde_json::Value {
    let doc =
        FormDoc { schema: SCHEMA.into(), n: f.n, values: f.iter().map(|(t, c)| FormEntry { i: t.i, j: t.j, k: t.k, v: v(c) }).collect() };
    serde_json::to_value(doc).expect("form document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn t(i: usize, j: usize, k: usize) -> TriangleIndex {
        TriangleIndex::new(i, j, k)
    }

    #[test]
    fn product_of_linear_forms() {
        let a = TernaryForm::linear(q(1), q(1), q(3));
        let b = TernaryForm::linear(q(1), q(2), q(1));
        let f = a.mul(&b);
        assert_eq!(f.get(t(1, 1, 0)), &q(3));
        assert_eq!(f.get(t(1, 0, 1)), &q(4));
        assert_eq!(f.get(t(0, 1, 1)), &q(7));
        assert_eq!(f.get(t(0, 2, 0)), &q(2));
        assert_eq!(f.get(t(0, 0, 2)), &q(3));
    }

    #[test]
    fn edge_restrictions() {
        let f = TernaryForm::linear(1.0, 1.0, 1.0);
        assert_eq!(f.restrict_edge(Edge::Xy).coeffs, vec![-1.0, 1.0]);
        // (4x + y)(x + y) from the diag(4,1), Id, diag(4,1) pencil
        let g = TernaryForm::linear(4.0, 1.0, 4.0).mul(&TernaryForm::linear(1.0, 1.0, 1.0));
        assert_eq!(g.restrict_edge(Edge::Xy).coeffs, vec![4.0, -5.0, 1.0]);
        assert_eq!(g.restrict_edge(Edge::Yz).coeffs, vec![1.0, -5.0, 4.0]);
    }

    #[test]
    fn derivative_rule() {
        let s = TernaryForm::linear(q(1), q(1), q(1));
        let sq = s.mul(&s);
        let d = sq.directional_derivative(&[q(1), q(0), q(0)]).unwrap();
        assert_eq!(d, TernaryForm::linear(q(2), q(2), q(2)));
    }

    #[test]
    fn line_restriction_matches_evaluation() {
        let f = TernaryForm::linear(1.0, 2.0, 3.0).mul(&TernaryForm::linear(2.0, 1.0, 5.0));
        let p = f.restrict_line(&[1.0, 1.0, 1.0], &[0.5, -1.0, 0.25]);
        for s in [-2.0, 0.0, 0.7, 3.0] {
            let direct = f.eval(&(1.0 + 0.5 * s), &(1.0 - s), &(1.0 + 0.25 * s));
            assert!((p.eval(s) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = TernaryForm::linear(q(1), q(2), q(3)).mul(&TernaryForm::linear(q(1), q(1), q(1)));
        let v = f.to_json();
        assert_eq!(TernaryForm::<Q>::from_json(&v).unwrap(), f);
        let g = f.to_f64();
        assert_eq!(TernaryForm::<f64>::from_json(&g.to_json()).unwrap(), g);
    }
}
