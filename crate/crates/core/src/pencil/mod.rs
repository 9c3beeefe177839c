//! Positive-definite Hermitian pencils and the forms `det(xX + yY + zZ)`.

mod eigen;

pub use eigen::{check_hermitian, hermitian_deviation, hermitian_eigenvalues, HERMITIAN_TOL, SWEEP_CAP};

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num::complex::{Complex, Complex64};
use num::{One, Signed, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};

use crate::error::{Edge, Error, Result};
use crate::form::TernaryForm;
use crate::hive::{index_count, index_set, position};
use crate::poly::{positive_root_count_exact, roots_f64, Poly};
use crate::rational::{f64_to_q, format_q, q, q_from_json, q_to_f64, Q};
use crate::SCHEMA;

pub type CMatrix = DMatrix<Complex64>;
/// Gaussian rational.
pub type GQ = Complex<Q>;
pub type QMatrix = DMatrix<GQ>;

/// Tolerance on `ABC = Id`, relative to `|A| |B| |C|`.
pub const ABC_TOL: f64 = 1e-10;

pub fn to_float(m: &QMatrix) -> CMatrix {
    m.map(|z| Complex64::new(q_to_f64(&z.re), q_to_f64(&z.im)))
}

/// Exact image of a float matrix.
pub fn to_exact(m: &CMatrix) -> Result<QMatrix> {
    let conv = |x: f64| f64_to_q(x).ok_or_else(|| Error::Numeric(format!("non-finite entry {x}")));
    let mut out = QMatrix::from_element(m.nrows(), m.ncols(), GQ::new(q(0), q(0)));
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(i, j)] = GQ::new(conv(m[(i, j)].re)?, conv(m[(i, j)].im)?);
        }
    }
    Ok(out)
}

pub fn is_hermitian_exact(m: &QMatrix) -> bool {
    m.is_square() && (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| m[(i, j)] == m[(j, i)].conj()))
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn det_exact(m: &QMatrix) -> GQ {
    let n = m.nrows();
    let zero = GQ::new(q(0), q(0));
    if n == 0 {
        return GQ::new(q(1), q(0));
    }
    let mut a: Vec<Vec<GQ>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)].clone()).collect()).collect();
    let mut prev = GQ::new(q(1), q(0));
    let mut negate = false;
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else { return zero };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = zero.clone();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// All leading principal minors positive.
pub fn is_positive_definite_exact(m: &QMatrix) -> Result<bool> {
    if !is_hermitian_exact(m) {
        return Err(Error::NotHermitian { deviation: f64::NAN });
    }
    for k in 1..=m.nrows() {
        let minor = det_exact(&m.view((0, 0), (k, k)).into_owned());
        if !minor.re.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cholesky of `D^{-1} M D^{-1}` with `D = diag(√m_ii)`, pivots above `1e-14`. The diagonal
/// scaling makes the test blind to badly scaled but well-conditioned matrices.
pub fn is_positive_definite(m: &CMatrix) -> Result<bool> {
    check_hermitian(m)?;
    let n = m.nrows();
    if (0..n).any(|i| !(m[(i, i)].re > 0.0)) {
        return Ok(false);
    }
    let d: Vec<f64> = (0..n).map(|i| m[(i, i)].re.sqrt()).collect();
    let s = symmetrize(&CMatrix::from_fn(n, n, |i, j| m[(i, j)] / (d[i] * d[j])));
    match s.cholesky() {
        None => Ok(false),
        Some(ch) => {
            let l = ch.l();
            Ok((0..n).all(|i| l[(i, i)].re * l[(i, i)].re > 1e-14))
        }
    }
}

/// `(M + M*) / 2`, exactly Hermitian in floating point.
pub fn symmetrize(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

/// Square roots of the eigenvalues of `A* A`, decreasing.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let g = a.adjoint() * a;
    Ok(hermitian_eigenvalues(&g)?.into_iter().map(|x| x.max(0.0).sqrt()).collect())
}

/// Three positive-definite Hermitian matrices of equal order.
#[derive(Clone, Debug)]
pub struct PencilTriple {
    pub x: CMatrix,
    pub y: CMatrix,
    pub z: CMatrix,
}

impl PencilTriple {
    pub fn new(x: CMatrix, y: CMatrix, z: CMatrix) -> Result<Self> {
        let n = x.nrows();
        for (name, m) in [("X", &x), ("Y", &y), ("Z", &z)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch(format!("{name} is {}x{}, expected {n}x{n}", m.nrows(), m.ncols())));
            }
            if !is_positive_definite(m)? {
                return Err(Error::NotPositiveDefinite(name.into()));
            }
        }
        Ok(PencilTriple { x: symmetrize(&x), y: symmetrize(&y), z: symmetrize(&z) })
    }

    pub fn order(&self) -> usize {
        self.x.nrows()
    }

    pub fn at(&self, x: Complex64, y: Complex64, z: Complex64) -> CMatrix {
        &self.x * x + &self.y * y + &self.z * z
    }

    /// `(G* X G, G* Y G, G* Z G)`.
    pub fn gauge(&self, g: &CMatrix) -> Result<Self> {
        let gh = g.adjoint();
        PencilTriple::new(&gh * &self.x * g, &gh * &self.y * g, &gh * &self.z * g)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let blk = |a: &CMatrix, b: &CMatrix| {
            let (n, m) = (a.nrows(), b.nrows());
            let mut out = CMatrix::zeros(n + m, n + m);
            out.view_mut((0, 0), (n, n)).copy_from(a);
            out.view_mut((n, n), (m, m)).copy_from(b);
            out
        };
        PencilTriple::new(blk(&self.x, &other.x), blk(&self.y, &other.y), blk(&self.z, &other.z))
    }

    pub fn to_exact(&self) -> Result<ExactPencil> {
        ExactPencil::new(to_exact(&self.x)?, to_exact(&self.y)?, to_exact(&self.z)?)
    }

    pub fn to_json(&self) -> Value {
        json!({"schema": SCHEMA, "X": matrix_json_f64(&self.x), "Y": matrix_json_f64(&self.y), "Z": matrix_json_f64(&self.z)})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        crate::hive::check_schema(v.get("schema").and_then(Value::as_str).unwrap_or(SCHEMA))?;
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Schema(format!("missing {k}")));
        PencilTriple::new(
            to_float(&matrix_from_json(get("X")?)?),
            to_float(&matrix_from_json(get("Y")?)?),
            to_float(&matrix_from_json(get("Z")?)?),
        )
    }
}

/// A pencil with Gaussian-rational entries.
#[derive(Clone, Debug)]
pub struct ExactPencil {
    pub x: QMatrix,
    pub y: QMatrix,
    pub z: QMatrix,
}

impl ExactPencil {
    pub fn new(x: QMatrix, y: QMatrix, z: QMatrix) -> Result<Self> {
        let n = x.nrows();
        for (name, m) in [("X", &x), ("Y", &y), ("Z", &z)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch(format!("{name} is {}x{}, expected {n}x{n}", m.nrows(), m.ncols())));
            }
            if !is_positive_definite_exact(m)? {
                return Err(Error::NotPositiveDefinite(name.into()));
            }
        }
        Ok(ExactPencil { x, y, z })
    }

    pub fn order(&self) -> usize {
        self.x.nrows()
    }

    pub fn to_float(&self) -> PencilTriple {
        PencilTriple { x: to_float(&self.x), y: to_float(&self.y), z: to_float(&self.z) }
    }
}

/// `det(xX + yY + zZ)` in float arithmetic.
///
/// The form is sampled at `(w^p, w^q, 1)` for `(n+1)`-th roots of unity `w`, and the
/// coefficients are read off by a two-dimensional inverse DFT.
pub fn pencil_det(p: &PencilTriple) -> Result<TernaryForm<f64>> {
    let n = p.order();
    let m = n + 1;
    let w = |e: usize| Complex64::from_polar(1.0, 2.0 * PI * (e % m) as f64 / m as f64);
    let mut vals = vec![Complex64::zero(); m * m];
    for a in 0..m {
        for b in 0..m {
            vals[a * m + b] = p.at(w(a), w(b), Complex64::one()).determinant();
        }
    }
    let mut coeffs = vec![0.0; index_count(n)];
    let mut scale: f64 = 0.0;
    for t in index_set(n) {
        let mut s = Complex64::zero();
        for a in 0..m {
            for b in 0..m {
                s += vals[a * m + b] * w(t.i * a + t.j * b).conj();
            }
        }
        let c = s.re / (m * m) as f64;
        scale = scale.max(c.abs());
        coeffs[position(t)] = c;
    }
    for (t, c) in index_set(n).into_iter().zip(&coeffs) {
        if *c <= -1e-9 * scale {
            return Err(Error::Numeric(format!("determinant coefficient at {t} is {c:e}, expected positive")));
        }
    }
    TernaryForm::new(n, coeffs)
}

/// `det(xX + yY + zZ)` exactly, by interpolation on `{(a,b,1) : a + b <= n}`.
pub fn pencil_det_exact(p: &ExactPencil) -> Result<TernaryForm<Q>> {
    let n = p.order();
    let pts = index_set(n);
    let size = pts.len();
    let gq = |v: i64| GQ::new(q(v), q(0));
    // Rows: grid points (a, b) taken as (t.i, t.j); columns: monomials x^i y^j.
    let mut sys: Vec<Vec<Q>> = Vec::with_capacity(size);
    for g in &pts {
        let (a, b) = (g.i as i64, g.j as i64);
        let m = p.x.map(|e| e * gq(a)) + p.y.map(|e| e * gq(b)) + &p.z;
        let d = det_exact(&m);
        if !d.im.is_zero() {
            return Err(Error::Numeric("Hermitian pencil gave a non-real determinant".into()));
        }
        let mut row: Vec<Q> = pts.iter().map(|t| q(a.pow(t.i as u32) * b.pow(t.j as u32))).collect();
        row.push(d.re);
        sys.push(row);
    }
    let sol = solve_exact(sys, size)?;
    TernaryForm::new(n, sol)
}

/// Gauss-Jordan on an augmented system `[A | b]`.
fn solve_exact(mut a: Vec<Vec<Q>>, size: usize) -> Result<Vec<Q>> {
    for c in 0..size {
        let p = (c..size).find(|&r| !a[r][c].is_zero()).ok_or_else(|| Error::Numeric("singular interpolation grid".into()))?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        let prow = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    Ok(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Invertible `(A, B, C)` with `ABC = Id`.
#[derive(Clone, Debug)]
pub struct GLTriple {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
}

impl GLTriple {
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix) -> Result<Self> {
        let n = a.nrows();
        for (name, m) in [("A", &a), ("B", &b), ("C", &c)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch(format!("{name} is {}x{}, expected {n}x{n}", m.nrows(), m.ncols())));
            }
            let sv = singular_values(m)?;
            if sv.last().is_some_and(|s| *s <= 1e-14 * sv[0]) {
                return Err(Error::NotInvertible(name.into()));
            }
        }
        let scale = a.norm() * b.norm() * c.norm();
        let dev = (&a * &b * &c - CMatrix::identity(n, n)).norm();
        if dev > ABC_TOL * scale.max(1.0) {
            return Err(Error::ProductNotIdentity { deviation: dev });
        }
        Ok(GLTriple { a, b, c })
    }

    /// Completes `(A, B)` with `C = (AB)^{-1}`.
    pub fn from_ab(a: CMatrix, b: CMatrix) -> Result<Self> {
        let c = (&a * &b).try_inverse().ok_or_else(|| Error::NotInvertible("AB".into()))?;
        GLTriple::new(a, b, c)
    }

    pub fn singular_values(&self) -> Result<[Vec<f64>; 3]> {
        Ok([singular_values(&self.a)?, singular_values(&self.b)?, singular_values(&self.c)?])
    }

    pub fn to_json(&self) -> Value {
        json!({"schema": SCHEMA, "A": matrix_json_f64(&self.a), "B": matrix_json_f64(&self.b), "C": matrix_json_f64(&self.c)})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        crate::hive::check_schema(v.get("schema").and_then(Value::as_str).unwrap_or(SCHEMA))?;
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Schema(format!("missing {k}")));
        let a = to_float(&matrix_from_json(get("A")?)?);
        let b = to_float(&matrix_from_json(get("B")?)?);
        match v.get("C") {
            Some(c) => GLTriple::new(a, b, to_float(&matrix_from_json(c)?)),
            None => GLTriple::from_ab(a, b),
        }
    }
}

/// `(A* A, Id, R* R)` with `R = B^{-1}`.
pub fn beta_map(g: &GLTriple) -> Result<PencilTriple> {
    let n = g.a.nrows();
    let r = g.b.clone().try_inverse().ok_or_else(|| Error::NotInvertible("B".into()))?;
    PencilTriple::new(g.a.adjoint() * &g.a, CMatrix::identity(n, n), r.adjoint() * r)
}

/// Roots of an edge restriction, with multiplicity, decreasing; all must be real and positive.
///
/// Realness and positivity are certified by exact Sturm counts on each squarefree factor;
/// the values come from companion eigenvalues of the correctly rounded factor.
pub fn edge_roots(f: &TernaryForm<Q>, edge: Edge) -> Result<Vec<f64>> {
    let n = f.degree();
    let p = f.restrict_edge(edge);
    if p.degree() != Some(n) {
        return Err(Error::NonRealEdgeRoots { edge, real: 0, expected: n });
    }
    let mut roots = Vec::with_capacity(n);
    let mut certified = 0;
    for (mult, factor) in squarefree_factors(&p).into_iter().enumerate() {
        let d = factor.degree().unwrap_or(0);
        if d == 0 {
            continue;
        }
        let pos = positive_root_count_exact(&factor)?;
        certified += pos * (mult + 1);
        if pos != d {
            continue;
        }
        for z in roots_f64(&factor.to_f64()) {
            roots.extend(std::iter::repeat_n(z.re.max(0.0), mult + 1));
        }
    }
    if certified != n {
        return Err(Error::NonRealEdgeRoots { edge, real: certified, expected: n });
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(roots)
}

/// Yun's decomposition: `out[m]` holds the roots of multiplicity `m + 1`.
pub fn squarefree_factors(p: &Poly<Q>) -> Vec<Poly<Q>> {
    let mut out = Vec::new();
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_rem(&a0).0;
    let mut c = dp.div_rem(&a0).0;
    let mut d = sub(&c, &b.derivative());
    loop {
        let a = b.gcd(&d);
        out.push(a.clone());
        b = b.div_rem(&a).0;
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        c = d.div_rem(&a).0;
        d = sub(&c, &b.derivative());
    }
    out
}

fn sub(a: &Poly<Q>, b: &Poly<Q>) -> Poly<Q> {
    let len = a.coeffs.len().max(b.coeffs.len());
    let z = q(0);
    Poly::new((0..len).map(|i| a.coeffs.get(i).unwrap_or(&z) - b.coeffs.get(i).unwrap_or(&z)).collect())
}

/// `∂F`: square roots of the edge roots, each side decreasing.
pub fn curve_boundary_exact(f: &TernaryForm<Q>) -> Result<[Vec<f64>; 3]> {
    let side = |e| Ok::<_, Error>(edge_roots(f, e)?.into_iter().map(f64::sqrt).collect());
    Ok([side(Edge::Xy)?, side(Edge::Yz)?, side(Edge::Zx)?])
}

/// Float coefficients are converted exactly, so root isolation stays rigorous.
pub fn curve_boundary(f: &TernaryForm<f64>) -> Result<[Vec<f64>; 3]> {
    curve_boundary_exact(&f.to_exact()?)
}

pub fn matrix_json_f64(m: &CMatrix) -> Value {
    let rows = |g: &dyn Fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| g(&m[(i, j)])).collect()).collect()
    };
    json!({"n": m.nrows(), "re": rows(&|z| z.re), "im": rows(&|z| z.im)})
}

pub fn matrix_json_exact(m: &QMatrix) -> Value {
    let rows = |g: &dyn Fn(&GQ) -> String| -> Vec<Vec<String>> {
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| g(&m[(i, j)])).collect()).collect()
    };
    json!({"n": m.nrows(), "re": rows(&|z| format_q(&z.re)), "im": rows(&|z| format_q(&z.im))})
}

/// `{"n", "re": [[..]], "im": [[..]]}`; `im` may be omitted.
pub fn matrix_from_json(v: &Value) -> Result<QMatrix> {
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Schema("matrix needs integer n".into()))? as usize;
    let grid = |key: &str| -> Result<Option<Vec<Vec<Q>>>> {
        let Some(rows) = v.get(key) else { return Ok(None) };
        let rows = rows.as_array().ok_or_else(|| Error::Schema(format!("{key} must be an array")))?;
        if rows.len() != n {
            return Err(Error::Schema(format!("{key} has {} rows, expected {n}", rows.len())));
        }
        rows.iter()
            .map(|r| {
                let r = r.as_array().ok_or_else(|| Error::Schema(format!("{key} rows must be arrays")))?;
                if r.len() != n {
                    return Err(Error::Schema(format!("{key} row has {} entries, expected {n}", r.len())));
                }
                r.iter().map(q_from_json).collect()
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    };
    let re = grid("re")?.ok_or_else(|| Error::Schema("matrix needs re".into()))?;
    let im = grid("im")?;
    Ok(QMatrix::from_fn(n, n, |i, j| GQ::new(re[i][j].clone(), im.as_ref().map_or_else(|| q(0), |m| m[i][j].clone()))))
}

pub fn random_complex_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// `G* G + shift Id` with Gaussian `G`.
pub fn random_pd<R: Rng + ?Sized>(n: usize, shift: f64, rng: &mut R) -> CMatrix {
    let g = random_complex_matrix(n, rng);
    symmetrize(&(g.adjoint() * &g + CMatrix::identity(n, n) * Complex64::new(shift, 0.0)))
}

pub fn random_pencil<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PencilTriple {
    let x = random_pd(n, 0.5, rng);
    let y = random_pd(n, 0.5, rng);
    let z = random_pd(n, 0.5, rng);
    PencilTriple::new(x, y, z).expect("shifted Gram matrices are positive definite")
}

/// Haar-like unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    random_complex_matrix(n, rng).qr().q()
}

/// `U diag(s) V` with `log10 s` uniform in `[-spread, spread]`.
pub fn random_conditioned<R: Rng + ?Sized>(n: usize, spread: f64, rng: &mut R) -> CMatrix {
    let u = random_unitary(n, rng);
    let v = random_unitary(n, rng);
    let s =
        CMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| Complex64::new(10f64.powf(rng.random_range(-spread..=spread)), 0.0)));
    u * s * v
}

/// `(A, B, (AB)^{-1})` with every condition number at most `10^{4 spread}`.
pub fn random_gl_triple<R: Rng + ?Sized>(n: usize, spread: f64, rng: &mut R) -> GLTriple {
    let a = random_conditioned(n, spread, rng);
    let b = random_conditioned(n, spread, rng);
    GLTriple::from_ab(a, b).expect("well-conditioned factors")
}

pub fn condition_number(m: &CMatrix) -> Result<f64> {
    let s = singular_values(m)?;
    Ok(s[0] / s[s.len() - 1])
}

pub fn diag(d: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d.len(), d.iter().map(|&x| Complex64::new(x, 0.0))))
}

pub fn diag_exact(d: &[Q]) -> QMatrix {
    let n = d.len();
    QMatrix::from_fn(n, n, |i, j| if i == j { GQ::new(d[i].clone(), q(0)) } else { GQ::new(q(0), q(0)) })
}
