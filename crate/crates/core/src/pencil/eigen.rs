//! Cyclic Jacobi for complex Hermitian matrices.

use nalgebra::DMatrix;
use num::complex::Complex64;

use crate::error::{Error, Result};

pub const SWEEP_CAP: usize = 100;
pub const HERMITIAN_TOL: f64 = 1e-12;

fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Largest `|m_ij - conj(m_ji)|`, relative to the Frobenius norm.
pub fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst / frobenius(m).max(f64::MIN_POSITIVE)
}

pub fn check_hermitian(m: &DMatrix<Complex64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("non-finite matrix entry".into()));
    }
    let d = hermitian_deviation(m);
    if d > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: d });
    }
    Ok(())
}

/// Eigenvalues in decreasing order.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let n = m.nrows();
    // Symmetrize so rotations act on an exactly Hermitian matrix.
    let mut a = DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let norm = frobenius(&a);
    let mut sweeps = 0;
    while off_diagonal(&a) > 1e-15 * norm {
        if sweeps == SWEEP_CAP {
            if off_diagonal(&a) < 1e-12 * norm {
                break;
            }
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

/// Zero `a[p][q]` with a phase change on `q` followed by a real rotation.
fn rotate(a: &mut DMatrix<Complex64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{i phi}
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // U = V G, V = diag(.., e^{-i phi} at q, ..), G real rotation on (p,q).
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;
    let n = a.nrows();
    for r in 0..n {
        let (xp, xq) = (a[(r, p)], a[(r, q)]);
        a[(r, p)] = xp * upp + xq * uqp;
        a[(r, q)] = xp * upq + xq * uqq;
    }
    for col in 0..n {
        let (xp, xq) = (a[(p, col)], a[(q, col)]);
        a[(p, col)] = upp.conj() * xp + uqp.conj() * xq;
        a[(q, col)] = upq.conj() * xp + uqq.conj() * xq;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}
