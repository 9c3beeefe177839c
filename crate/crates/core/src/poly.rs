//! Univariate polynomials: exact Sturm counting and companion-matrix roots.

use nalgebra::DMatrix;
use num::bigint::BigInt;
use num::complex::Complex64;
use num::integer::Integer;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{f64_to_q, q, q_to_f64, Q};

/// Dense polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly<T> {
    pub coeffs: Vec<T>,
}

/// How root counts are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Sturm chains on the exact rational image of the coefficients.
    #[default]
    Exact,
    /// Companion-matrix eigenvalues with an imaginary-part tolerance.
    Float,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::Schema(format!("unknown mode {s:?}"))),
        }
    }
}

impl<T: Clone + Zero> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }
}

impl Poly<f64> {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn to_exact(&self) -> Result<Poly<Q>> {
        let c = self
            .coeffs
            .iter()
            .map(|&x| f64_to_q(x).ok_or_else(|| Error::Numeric(format!("non-finite coefficient {x}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(c))
    }

    /// Product of `(u - r)` over `roots`, times `lead`.
    pub fn from_roots(lead: f64, roots: &[f64]) -> Self {
        let mut c = vec![lead];
        for r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        Poly::new(c)
    }
}

impl Poly<Q> {
    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn to_f64(&self) -> Poly<f64> {
        Poly { coeffs: self.coeffs.iter().map(q_to_f64).collect() }
    }

    pub fn derivative(&self) -> Self {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::new(vec![]);
        }
        let mut c = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::new(vec![]), Poly::new(r));
        }
        let mut quot = vec![Q::zero(); r.len() - dd];
        for s in (0..quot.len()).rev() {
            let f = &r[s + dd] / &lead;
            if !f.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    r[s + i] -= &f * c;
                }
            }
            quot[s] = f;
        }
        r.truncate(dd);
        (Poly::new(quot), Poly::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let l = l.clone();
                Poly::new(self.coeffs.iter().map(|c| c / &l).collect())
            }
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Same roots, each simple.
    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    pub fn has_repeated_root(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) > 0
    }
}

/// Sturm chain of a squarefree polynomial.
fn sturm_chain(p: &Poly<Q>) -> Vec<Poly<Q>> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(Poly::new(r.coeffs.into_iter().map(|c| -c).collect()));
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn q_sign(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn changes_at(chain: &[Poly<Q>], x: &Q) -> usize {
    sign_changes(chain.iter().map(|p| q_sign(&p.eval(x))))
}

fn changes_at_infinity(chain: &[Poly<Q>], positive: bool) -> usize {
    sign_changes(chain.iter().map(|p| {
        let s = q_sign(p.leading().unwrap());
        let d = p.degree().unwrap();
        if positive || d % 2 == 0 {
            s
        } else {
            -s
        }
    }))
}

fn trim_int(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Pseudo-remainder `lc(b)^k a mod b`, with the exponent `k` actually used.
fn prem(a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, u32) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    let mut k = 0;
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[i + dr - db] -= &lr * c;
        }
        r.pop();
        trim_int(&mut r);
        k += 1;
    }
    (r, k)
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Distinct real roots and whether any root is repeated, from one Sturm sequence over the integers.
///
/// Remainders are pseudo-remainders with the sign of the true remainder restored and the
/// content divided out, so coefficient growth stays mild.
pub fn sturm_count_int(p: &[BigInt]) -> Result<(usize, bool)> {
    let mut a = p.to_vec();
    trim_int(&mut a);
    if a.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if a.len() == 1 {
        return Ok((0, false));
    }
    let mut b: Vec<BigInt> = a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    a = primitive(a);
    b = primitive(b);
    // (sign of leading coefficient, degree) for every chain member.
    let mut ends = vec![(a.last().unwrap().signum(), a.len() - 1), (b.last().unwrap().signum(), b.len() - 1)];
    loop {
        let (r, k) = prem(&a, &b);
        if r.is_empty() {
            break;
        }
        let flip = b.last().unwrap().is_negative() && k % 2 == 1;
        let mut r = primitive(r);
        if !flip {
            for x in r.iter_mut() {
                *x = -x.clone();
            }
        }
        ends.push((r.last().unwrap().signum(), r.len() - 1));
        a = b;
        b = r;
    }
    let repeated = b.len() > 1;
    let at = |neg: bool| {
        sign_changes(ends.iter().map(|(s, d)| {
            let s = if s.is_positive() { 1i8 } else { -1 };
            if neg && d % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    };
    Ok((at(true) - at(false), repeated))
}

/// Clears denominators.
pub fn integer_multiple(p: &Poly<Q>) -> Vec<BigInt> {
    let l = p.coeffs.iter().fold(BigInt::from(1), |l, c| l.lcm(c.denom()));
    p.coeffs.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect()
}

/// Distinct real roots, in the closed interval when one is given.
pub fn real_root_count_exact(p: &Poly<Q>, interval: Option<(&Q, &Q)>) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let Some((a, b)) = interval else {
        return Ok(sturm_count_int(&integer_multiple(p))?.0);
    };
    let sf = p.squarefree();
    let chain = sturm_chain(&sf);
    Ok({
        {
            if a > b {
                return Ok(0);
            }
            // Sturm counts (a, b]; add a itself.
            let open = changes_at(&chain, a) - changes_at(&chain, b);
            open + usize::from(sf.eval(a).is_zero())
        }
    })
}

/// Distinct roots in the open half-line `(0, inf)`.
pub fn positive_root_count_exact(p: &Poly<Q>) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = p.squarefree();
    let chain = sturm_chain(&sf);
    Ok(changes_at(&chain, &Q::zero()) - changes_at_infinity(&chain, true))
}

/// Sorted isolating intervals of the distinct real roots, each narrower than `width`.
pub fn isolate_real_roots(p: &Poly<Q>, width: &Q) -> Result<Vec<(Q, Q)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = p.squarefree();
    let chain = sturm_chain(&sf);
    // Cauchy bound.
    let lead = sf.leading().unwrap().abs();
    let bound = q(1) + sf.coeffs.iter().map(|c| c.abs() / &lead).max().unwrap_or_else(Q::zero);
    let count = |a: &Q, b: &Q| changes_at(&chain, a) - changes_at(&chain, b);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let c = count(&a, &b);
        if c == 0 {
            continue;
        }
        if c == 1 && &b - &a < *width {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / q(2);
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    out.sort();
    Ok(out)
}

/// Distinct real roots to about `1e-15` relative, ascending.
pub fn real_roots_exact(p: &Poly<Q>) -> Result<Vec<f64>> {
    let w = Q::new(1.into(), BigInt::from(1u64 << 52));
    let iv = isolate_real_roots(p, &w)?;
    Ok(iv.into_iter().map(|(a, b)| q_to_f64(&((a + b) / q(2)))).collect())
}

/// All complex roots, via the eigenvalues of a scaled companion matrix, Newton-polished.
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let mut zeros = 0;
    while c.len() > 1 && c[0].norm() == 0.0 {
        c.remove(0);
        zeros += 1;
    }
    let mut roots = vec![Complex64::zero(); zeros];
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return roots;
    }
    // u = s v so that the constant and leading coefficients have equal size.
    let s = (c[0].norm() / c[d].norm()).powf(1.0 / d as f64);
    let scaled: Vec<Complex64> = c.iter().enumerate().map(|(i, x)| x * s.powi(i as i32)).collect();
    let lead = scaled[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -scaled[i] / lead;
    }
    let schur = m.clone().try_schur(1e-15, 10_000).unwrap_or_else(|| m.schur());
    let eig: Vec<Complex64> = schur.eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default();
    for v in eig {
        roots.push(newton_polish(&c, v * s));
    }
    roots
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn newton_polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    let (mut best, _) = horner(c, z);
    for _ in 0..3 {
        let (p, dp) = horner(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let (pn, _) = horner(c, next);
        if pn.norm() < best.norm() {
            best = pn;
            z = next;
        } else {
            break;
        }
    }
    z
}

/// Roots of a real polynomial.
pub fn roots_f64(p: &Poly<f64>) -> Vec<Complex64> {
    let c: Vec<Complex64> = p.coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    complex_roots(&c)
}

/// Distinct real roots by companion eigenvalues.
///
/// A root counts as real when `|Im| <= imag_tol * max(1, |z|)`; real roots closer than
/// `cluster_tol * max(1, |x|)` are merged.
pub fn real_root_count_float(p: &Poly<f64>, interval: Option<(f64, f64)>, imag_tol: f64, cluster_tol: f64) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut reals: Vec<f64> = roots_f64(p)
        .into_iter()
        .filter(|z| z.im.abs() <= imag_tol * z.norm().max(1.0))
        .map(|z| z.re)
        .filter(|x| interval.is_none_or(|(a, b)| *x >= a && *x <= b))
        .collect();
    reals.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut last: Option<f64> = None;
    for x in reals {
        if last.is_none_or(|l| (x - l).abs() > cluster_tol * x.abs().max(1.0)) {
            count += 1;
        }
        last = Some(x);
    }
    Ok(count)
}

/// Default tolerances for the float path.
pub const IMAG_TOL: f64 = 1e-7;
pub const CLUSTER_TOL: f64 = 1e-9;

/// Number of distinct real roots in either mode.
pub fn real_root_count(p: &Poly<f64>, interval: Option<(f64, f64)>, mode: Mode) -> Result<usize> {
    match mode {
        Mode::Exact => {
            let e = p.to_exact()?;
            match interval {
                None => real_root_count_exact(&e, None),
                Some((a, b)) => {
                    let a = f64_to_q(a).ok_or_else(|| Error::Numeric("bad interval".into()))?;
                    let b = f64_to_q(b).ok_or_else(|| Error::Numeric("bad interval".into()))?;
                    real_root_count_exact(&e, Some((&a, &b)))
                }
            }
        }
        Mode::Float => real_root_count_float(p, interval, IMAG_TOL, CLUSTER_TOL),
    }
}

/// Sign changes in a coefficient sequence, zeros skipped (Descartes).
pub fn descartes_sign_changes<T: Signed>(coeffs: &[T]) -> usize {
    sign_changes(coeffs.iter().map(|c| {
        if c.is_zero() {
            0
        } else if c.is_positive() {
            1
        } else {
            -1
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn pq(c: &[i64]) -> Poly<Q> {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    fn pf(c: &[f64]) -> Poly<f64> {
        Poly::new(c.to_vec())
    }

    #[test]
    fn counts_match_examples_in_both_modes() {
        for (c, want) in [(vec![1.0, 0.0, 1.0], 0), (vec![2.0, -3.0, 1.0], 2), (vec![0.0, -1.0, 0.0, 1.0], 3)] {
            let p = pf(&c);
            assert_eq!(real_root_count(&p, None, Mode::Exact).unwrap(), want);
            assert_eq!(real_root_count(&p, None, Mode::Float).unwrap(), want);
        }
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert!(matches!(real_root_count(&pf(&[0.0]), None, Mode::Exact), Err(Error::ZeroPolynomial)));
        assert!(matches!(real_root_count(&pf(&[]), None, Mode::Float), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn repeated_roots_count_once() {
        // (u-1)^2 (u+2)
        let p = pq(&[2, -3, 0, 1]);
        assert_eq!(real_root_count_exact(&p, None).unwrap(), 2);
        assert!(p.has_repeated_root());
        assert_eq!(real_root_count_float(&p.to_f64(), None, IMAG_TOL, 1e-6).unwrap(), 2);
    }

    #[test]
    fn interval_counts_are_closed() {
        let p = pq(&[0, -1, 0, 1]);
        assert_eq!(real_root_count_exact(&p, Some((&q(0), &q(1)))).unwrap(), 2);
        assert_eq!(real_root_count_exact(&p, Some((&qf(1, 2), &q(5)))).unwrap(), 1);
        assert_eq!(real_root_count_exact(&p, Some((&q(-1), &q(-1)))).unwrap(), 1);
        assert_eq!(real_root_count(&p.to_f64(), Some((0.5, 5.0)), Mode::Float).unwrap(), 1);
    }

    #[test]
    fn isolation_finds_roots() {
        let p = pq(&[-6, 11, -6, 1]);
        let r = real_roots_exact(&p).unwrap();
        assert_eq!(r.len(), 3);
        for (x, w) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - w).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_roots_of_unity() {
        let c: Vec<Complex64> = [-1.0, 0.0, 0.0, 0.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let r = complex_roots(&c);
        assert_eq!(r.len(), 4);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(4) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        // u^2 (u - 3)
        let c: Vec<Complex64> = [0.0, 0.0, -3.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut r: Vec<f64> = complex_roots(&c).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert_eq!(r, vec![0.0, 0.0, 3.0]);
    }

    #[test]
    fn integer_sturm_matches_rational() {
        for c in [vec![2, -3, 0, 1], vec![1, 0, 1], vec![0, -1, 0, 1], vec![-6, 11, -6, 1], vec![1, 2, 1], vec![5]] {
            let p = pq(&c);
            let ints: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
            let (n, rep) = sturm_count_int(&ints).unwrap();
            assert_eq!(n, real_root_count_exact(&p, Some((&q(-100), &q(100)))).unwrap());
            assert_eq!(rep, p.has_repeated_root());
        }
        // leading coefficient negative: -(u-1)(u-2)(u-3)
        let neg: Vec<BigInt> = [6, -11, 6, -1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(sturm_count_int(&neg).unwrap(), (3, false));
    }

    #[test]
    fn descartes_oracle() {
        // (u-1)(u-2)(u-3) = u^3 - 6u^2 + 11u - 6
        assert_eq!(descartes_sign_changes(&[q(-6), q(11), q(-6), q(1)]), 3);
    }

    #[test]
    fn div_rem_and_gcd() {
        let a = pq(&[-1, 0, 1]);
        let b = pq(&[-1, 1]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(qq, pq(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&pq(&[1, 2, 1])), pq(&[1, 1]));
    }
}
