use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{FuzzError, Result};
use crate::scalar::Real;

/// Eigenpairs of a Hermitian matrix, values ascending, vectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V diag(f) V†`
    pub fn reconstruct_with(&self, f: &[T]) -> ComplexMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            if f[k] == T::zero() {
                continue;
            }
            for i in 0..n {
                let a = v[(i, k)] * f[k];
                for j in 0..n {
                    out[(i, j)] += a * v[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Hermitian eigensolver: Householder reduction to a tridiagonal, a diagonal
/// phase change making it real, then implicit QL.
pub fn eigh<T: Real>(a: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    if !a.is_square() {
        return Err(FuzzError::ShapeMismatch {
            left: a.shape(),
            right: a.shape(),
        });
    }
    let n = a.rows();
    let zero = Complex::new(T::zero(), T::zero());
    if n == 0 {
        return Ok(HermitianEigen {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let mut w: Vec<Vec<Complex<T>>> = (0..n)
        .map(|i| (0..n).map(|j| (a[(i, j)] + a[(j, i)].conj()) * T::lit(0.5)).collect())
        .collect();
    // Q stored row-major; A = Q T Q†
    let mut q: Vec<Vec<Complex<T>>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Complex::new(T::one(), T::zero()) } else { zero }).collect())
        .collect();
    let mut off = vec![zero; n];
    let two = T::lit(2.0);

    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let x: Vec<Complex<T>> = (k + 1..n).map(|i| w[i][k]).collect();
        let tail = x[1..].iter().fold(T::zero(), |s, z| s + z.norm_sqr());
        if tail == T::zero() {
            off[k + 1] = x[0];
            continue;
        }
        let xnorm = (tail + x[0].norm_sqr()).sqrt();
        let alpha = x[0];
        let phase = if alpha.norm() == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            alpha / alpha.norm()
        };
        let beta = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= beta;
        let vn = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        for z in v.iter_mut() {
            *z = *z / vn;
        }
        // trailing block B ← H B H with p = Bv, K = v†p, w = p − Kv, B −= 2(vw† + wv†)
        let mut p = vec![zero; m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &w[k + 1 + i][k + 1..];
            *pi = row.iter().zip(&v).fold(zero, |s, (b, vj)| s + b * vj);
        }
        let kk = v.iter().zip(&p).fold(zero, |s, (vi, pi)| s + vi.conj() * pi);
        let ww: Vec<Complex<T>> = p.iter().zip(&v).map(|(pi, vi)| pi - kk * vi).collect();
        for i in 0..m {
            let (vi, wi) = (v[i], ww[i]);
            let row = &mut w[k + 1 + i][k + 1..];
            for j in 0..m {
                row[j] -= (vi * ww[j].conj() + wi * v[j].conj()) * two;
            }
        }
        for i in k + 1..n {
            w[i][k] = zero;
            w[k][i] = zero;
        }
        w[k + 1][k] = beta;
        w[k][k + 1] = beta.conj();
        off[k + 1] = beta;
        // Q ← Q H
        for row in q.iter_mut() {
            let qv = row[k + 1..].iter().zip(&v).fold(zero, |s, (a, b)| s + a * b) * two;
            for (qj, vj) in row[k + 1..].iter_mut().zip(&v) {
                *qj -= qv * vj.conj();
            }
        }
    }

    let mut d: Vec<T> = (0..n).map(|i| w[i][i].re).collect();
    let mut e = vec![T::zero(); n];
    let mut phases = vec![Complex::new(T::one(), T::zero()); n];
    for k in 1..n {
        let z = off[k];
        let r = z.norm();
        e[k] = r;
        let u = if r == T::zero() { Complex::new(T::one(), T::zero()) } else { z / r };
        phases[k] = phases[k - 1] * u;
    }
    // zt[i] is the i-th eigenvector of the real tridiagonal
    let mut zt: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    tql2(&mut d, &mut e, &mut zt)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<T> = order.iter().map(|&i| d[i]).collect();
    // eigenvectors = Q · D · Z
    let qd: Vec<Vec<Complex<T>>> = q
        .iter()
        .map(|row| row.iter().zip(&phases).map(|(a, p)| a * p).collect())
        .collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let z = &zt[src];
        for i in 0..n {
            let s = qd[i].iter().zip(z).fold(zero, |s, (a, &b)| s + a * b);
            vectors[(i, col)] = s;
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Symmetric tridiagonal QL with implicit shifts. `e[i]` holds the subdiagonal
/// entry coupling i−1 and i; `zt` rows are rotated alongside.
fn tql2<T: Real>(d: &mut [T], e: &mut [T], zt: &mut [Vec<T>]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let eps = T::epsilon();
    let two = T::lit(2.0);
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 200 {
                    return Err(FuzzError::NoConvergence);
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;
                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = zt.split_at_mut(i + 1);
                    let (ri, ri1) = (&mut lo[i], &mut hi[0]);
                    for (a, b) in ri.iter_mut().zip(ri1.iter_mut()) {
                        let hb = *b;
                        *b = s * *a + c * hb;
                        *a = c * *a - s * hb;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}
