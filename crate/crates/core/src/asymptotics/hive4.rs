//! Exponent families of `det(Σ x_i X_i(t))` for four 2×2 positive definite families.

use std::collections::BTreeMap;

use num::complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::ls_slope;
use crate::error::{Error, Result};
use crate::pencil::{is_positive_definite, CMatrix};
use crate::rational::{format_q, q, q_from_json, q_to_f64, qf, Q};
use crate::SCHEMA;

/// Hermitian matrix family with entries `c_ab · t^{e_ab}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFamily {
    coeffs: CMatrix,
    exponents: Vec<Vec<Q>>,
}

impl MatrixFamily {
    pub fn new(coeffs: CMatrix, exponents: Vec<Vec<Q>>) -> Result<Self> {
        let n = coeffs.nrows();
        if coeffs.ncols() != n || exponents.len() != n || exponents.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix family must be square with a matching exponent table".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if (coeffs[(a, b)] - coeffs[(b, a)].conj()).norm() > 1e-12 * (1.0 + coeffs[(a, b)].norm())
                    || exponents[a][b] != exponents[b][a]
                {
                    return Err(Error::NotHermitian { deviation: (coeffs[(a, b)] - coeffs[(b, a)].conj()).norm() });
                }
            }
        }
        Ok(MatrixFamily { coeffs, exponents })
    }

    /// `t^{s} D C D` with `D = diag(t^{e_a/2})`: positive definite for every `t` when `C` is.
    pub fn scaled(c: CMatrix, e: &[Q], s: &Q) -> Result<Self> {
        let n = c.nrows();
        let exps = (0..n).map(|a| (0..n).map(|b| (&e[a] + &e[b]) / q(2) + s).collect()).collect();
        MatrixFamily::new(c, exps)
    }

    pub fn diagonal(e: &[Q]) -> Self {
        let n = e.len();
        let exps = (0..n).map(|a| (0..n).map(|b| if a == b { e[a].clone() } else { q(0) }).collect()).collect();
        MatrixFamily { coeffs: CMatrix::identity(n, n), exponents: exps }
    }

    pub fn order(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn at(&self, t: f64) -> CMatrix {
        let lt = t.ln();
        CMatrix::from_fn(self.order(), self.order(), |a, b| self.coeffs[(a, b)] * (q_to_f64(&self.exponents[a][b]) * lt).exp())
    }

    /// Definiteness at `t`, judged on `D^{-1} X D^{-1}` with `D = diag(√X_aa)` to stay in range.
    pub fn is_positive_definite_at(&self, t: f64) -> Result<bool> {
        let n = self.order();
        let lt = t.ln();
        if (0..n).any(|a| !(self.coeffs[(a, a)].re > 0.0)) {
            return Ok(false);
        }
        let m = CMatrix::from_fn(n, n, |a, b| {
            let rel = q_to_f64(&self.exponents[a][b]) - 0.5 * (q_to_f64(&self.exponents[a][a]) + q_to_f64(&self.exponents[b][b]));
            self.coeffs[(a, b)] * (rel * lt).exp() / (self.coeffs[(a, a)].re * self.coeffs[(b, b)].re).sqrt()
        });
        if m.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Ok(false);
        }
        is_positive_definite(&m)
    }

    fn entry(&self, a: usize, b: usize) -> (Complex64, Q) {
        (self.coeffs[(a, b)], self.exponents[a][b].clone())
    }

    pub fn to_json(&self) -> Value {
        let n = self.order();
        json!({
            "re": (0..n).map(|a| (0..n).map(|b| self.coeffs[(a, b)].re).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "im": (0..n).map(|a| (0..n).map(|b| self.coeffs[(a, b)].im).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "exp": self.exponents.iter().map(|r| r.iter().map(format_q).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let grid = |key: &str| -> Result<Vec<Vec<Value>>> {
            v.get(key)
                .and_then(|x| x.as_array())
                .ok_or_else(|| Error::Schema(format!("matrix family needs {key}")))?
                .iter()
                .map(|r| r.as_array().cloned().ok_or_else(|| Error::Schema(format!("{key} must be a list of rows"))))
                .collect()
        };
        let num = |x: &Value| x.as_f64().ok_or_else(|| Error::Schema("matrix entries must be numbers".into()));
        let re = grid("re")?;
        let n = re.len();
        let im = if v.get("im").is_some() { grid("im")? } else { vec![vec![json!(0.0); n]; n] };
        let exp = grid("exp")?;
        if im.len() != n || exp.len() != n || re.iter().chain(&im).chain(&exp).any(|r| r.len() != n) {
            return Err(Error::Schema("matrix family rows must be square".into()));
        }
        let mut c = CMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                c[(a, b)] = Complex64::new(num(&re[a][b])?, num(&im[a][b])?);
            }
        }
        let e = exp.iter().map(|r| r.iter().map(q_from_json).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        MatrixFamily::new(c, e)
    }
}

/// Four order-2 families; `F = det(Σ x_i X_i)` has ten coefficients indexed by `Δ^4_2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixFamily {
    pub matrices: Vec<MatrixFamily>,
}

/// Terms `c·t^e` of one coefficient of `F`.
type Terms = Vec<(Complex64, Q)>;

impl RMatrixFamily {
    pub fn new(matrices: Vec<MatrixFamily>) -> Result<Self> {
        if matrices.len() != 4 || matrices.iter().any(|m| m.order() != 2) {
            return Err(Error::DimensionMismatch("expected four families of 2×2 matrices".into()));
        }
        Ok(RMatrixFamily { matrices })
    }

    pub fn identity() -> Self {
        let id = MatrixFamily::diagonal(&[q(0), q(0)]);
        RMatrixFamily { matrices: vec![id; 4] }
    }

    /// Random positive definite `C_i`, exponents with denominators up to 3 in `[−1, 1]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let exp = |rng: &mut R| {
            let d = rng.random_range(1..=3i64);
            qf(rng.random_range(-d..=d), d)
        };
        let matrices = (0..4)
            .map(|_| {
                let c = crate::pencil::random_pd(2, 0.1, rng);
                let e = [exp(rng), exp(rng)];
                let s = exp(rng);
                MatrixFamily::scaled(crate::pencil::symmetrize(&c), &e, &s).expect("hermitian")
            })
            .collect();
        RMatrixFamily { matrices }
    }

    /// Symbolic terms of each coefficient, keyed by the exponent vector of `x`.
    ///
    /// `det M = m11 m22 − |m12|²`, so `x_i²` carries `det X_i` and `x_i x_j` carries
    /// `a11 b22 + a22 b11 − 2 Re(a12 conj b12)`.
    fn coefficient_terms(&self) -> BTreeMap<[usize; 4], Terms> {
        let mut out = BTreeMap::new();
        for i in 0..4 {
            for j in i..4 {
                let (a, b) = (&self.matrices[i], &self.matrices[j]);
                let mut label = [0; 4];
                label[i] += 1;
                label[j] += 1;
                let prod = |(c1, e1): (Complex64, Q), (c2, e2): (Complex64, Q)| (c1 * c2, e1 + e2);
                let mut terms = vec![prod(a.entry(0, 0), b.entry(1, 1)), prod(a.entry(1, 1), b.entry(0, 0))];
                let (c12, e12) = a.entry(0, 1);
                let (d12, f12) = b.entry(0, 1);
                terms.push((-(c12 * d12.conj() + c12.conj() * d12), e12 + f12));
                if i == j {
                    // the x_i² coefficient is det X_i: half of the symmetric expression
                    terms = terms.into_iter().map(|(c, e)| (c * 0.5, e)).collect();
                }
                out.insert(label, terms);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({"schema": SCHEMA, "matrices": self.matrices.iter().map(MatrixFamily::to_json).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        crate::hive::check_schema(v.get("schema").and_then(|s| s.as_str()).unwrap_or(SCHEMA))?;
        let ms = v.get("matrices").and_then(|m| m.as_array()).ok_or_else(|| Error::Schema("family needs matrices".into()))?;
        RMatrixFamily::new(ms.iter().map(MatrixFamily::from_json).collect::<Result<_>>()?)
    }
}

/// `log |Σ c t^e|` with the largest power factored out, so huge `t` stay in range.
fn log_abs(terms: &Terms, lt: f64) -> f64 {
    let top = terms.iter().map(|(_, e)| q_to_f64(e)).fold(f64::NEG_INFINITY, f64::max);
    let s: Complex64 = terms.iter().map(|(c, e)| c * ((q_to_f64(e) - top) * lt).exp()).sum();
    s.norm().ln() + top * lt
}

pub const HIVE4_TGRID: [f64; 3] = [1e50, 1e100, 1e200];
pub const HIVE4_TOL: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hive4Inequality {
    /// `symmetric` or `permuted`.
    pub kind: String,
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub tight: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hive4Report {
    pub schema: String,
    pub exponents: BTreeMap<String, f64>,
    pub inequalities: Vec<Hive4Inequality>,
    pub all_hold: bool,
}

fn key(l: [usize; 4]) -> String {
    l.iter().map(|d| d.to_string()).collect()
}

fn unit2(a: usize, b: usize) -> [usize; 4] {
    let mut l = [0; 4];
    l[a] += 1;
    l[b] += 1;
    l
}

/// Slopes of `log F_I` on `tgrid`, then the 3 symmetric and 12 permuted inequalities.
pub fn hive4_check(fam: &RMatrixFamily, tgrid: &[f64]) -> Result<Hive4Report> {
    super::check_grid(tgrid)?;
    for (i, m) in fam.matrices.iter().enumerate() {
        for &t in tgrid {
            if !m.is_positive_definite_at(t)? {
                return Err(Error::NotPositiveDefinite(format!("X{} at t={t:e}", i + 1)));
            }
        }
    }
    let xs: Vec<f64> = tgrid.iter().map(|t| t.ln()).collect();
    let h: BTreeMap<[usize; 4], f64> = fam
        .coefficient_terms()
        .into_iter()
        .map(|(l, terms)| (l, ls_slope(&xs, &xs.iter().map(|lt| log_abs(&terms, *lt)).collect::<Vec<_>>())))
        .collect();
    let mut inequalities = Vec::new();
    let mut push = |kind: &str, label: String, lhs: f64, rhs: f64| {
        inequalities.push(Hive4Inequality {
            kind: kind.into(),
            label,
            lhs,
            rhs,
            holds: lhs <= rhs + HIVE4_TOL,
            tight: (lhs - rhs).abs() <= HIVE4_TOL,
        });
    };
    // h_ab + h_cd <= max(h_ac + h_bd, h_ad + h_bc), one per pairing of {0,1,2,3}
    for b in 1..4 {
        let rest: Vec<usize> = (1..4).filter(|&x| x != b).collect();
        let (a, c, d) = (0, rest[0], rest[1]);
        let lhs = h[&unit2(a, b)] + h[&unit2(c, d)];
        let rhs = (h[&unit2(a, c)] + h[&unit2(b, d)]).max(h[&unit2(a, d)] + h[&unit2(b, c)]);
        push("symmetric", format!("{}+{}", key(unit2(a, b)), key(unit2(c, d))), lhs, rhs);
    }
    // h_aa + h_bc <= h_ab + h_ac
    for a in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&x| x != a).collect();
        for (p, &b) in others.iter().enumerate() {
            for &c in &others[p + 1..] {
                let lhs = h[&unit2(a, a)] + h[&unit2(b, c)];
                let rhs = h[&unit2(a, b)] + h[&unit2(a, c)];
                push("permuted", format!("{}+{}", key(unit2(a, a)), key(unit2(b, c))), lhs, rhs);
            }
        }
    }
    let all_hold = inequalities.iter().all(|i| i.holds);
    Ok(Hive4Report { schema: SCHEMA.into(), exponents: h.into_iter().map(|(l, v)| (key(l), v)).collect(), inequalities, all_hold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_tight() {
        let r = hive4_check(&RMatrixFamily::identity(), &HIVE4_TGRID).unwrap();
        assert_eq!(r.inequalities.len(), 15);
        assert!(r.all_hold && r.inequalities.iter().all(|i| i.tight));
        assert!(r.exponents.values().all(|h| h.abs() < 1e-12));
    }

    #[test]
    fn diagonal_by_hand() {
        // X1 = diag(t, 1), others identity: F = (t x1 + x2 + x3 + x4)(x1 + x2 + x3 + x4)
        let mut fam = RMatrixFamily::identity();
        fam.matrices[0] = MatrixFamily::diagonal(&[q(1), q(0)]);
        let r = hive4_check(&fam, &HIVE4_TGRID).unwrap();
        for (k, want) in [("2000", 1.0), ("1100", 1.0), ("0110", 0.0), ("0020", 0.0)] {
            assert!((r.exponents[k] - want).abs() < 1e-9, "{k}");
        }
        assert!(r.all_hold);
    }

    #[test]
    fn random_quadruples_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let fam = RMatrixFamily::random(&mut rng);
            let r = hive4_check(&fam, &HIVE4_TGRID).unwrap();
            assert!(r.all_hold, "{:?}", r.inequalities.iter().filter(|i| !i.holds).collect::<Vec<_>>());
            let back = RMatrixFamily::from_json(&fam.to_json()).unwrap();
            assert_eq!(back, fam);
        }
    }

    #[test]
    fn indefinite_rejected() {
        let mut fam = RMatrixFamily::identity();
        let c = CMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)],
        );
        fam.matrices[2] = MatrixFamily::new(c, vec![vec![q(0); 2]; 2]).unwrap();
        assert!(matches!(hive4_check(&fam, &HIVE4_TGRID), Err(Error::NotPositiveDefinite(_))));
    }
}
