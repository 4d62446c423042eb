use num_complex::Complex;

use super::ComplexMatrix;
use crate::scalar::Real;

/// Thin SVD `A = U diag(s) V†`, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: ComplexMatrix<T>,
    pub s: Vec<T>,
    pub v: ComplexMatrix<T>,
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Svd<T> {
    if a.rows() < a.cols() {
        let t = svd(&a.dagger());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let (m, n) = a.shape();
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut u: Vec<Vec<Complex<T>>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { one } else { zero }).collect())
        .collect();
    let eps = T::epsilon();
    let norm2 = |x: &[Complex<T>]| x.iter().fold(T::zero(), |s, z| s + z.norm_sqr());

    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm2(&u[p]);
                let beta = norm2(&u[q]);
                let gamma = u[p].iter().zip(&u[q]).fold(zero, |s, (x, y)| s + x.conj() * y);
                let g = gamma.norm();
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let ph = (gamma / g).conj();
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                let (lo, hi) = u.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], ph, cs, sn);
                let (lo, hi) = v.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], ph, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }

    let sig: Vec<T> = u.iter().map(|col| norm2(col).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sig[j].partial_cmp(&sig[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut uu = ComplexMatrix::zeros(m, n);
    let mut vv = ComplexMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        s.push(sig[j]);
        if sig[j] > T::zero() {
            let inv = T::one() / sig[j];
            for i in 0..m {
                uu[(i, k)] = u[j][i] * inv;
            }
        }
        for i in 0..n {
            vv[(i, k)] = v[j][i];
        }
    }
    Svd { u: uu, s, v: vv }
}

fn rotate<T: Real>(xp: &mut [Complex<T>], xq: &mut [Complex<T>], ph: Complex<T>, cs: T, sn: T) {
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = *b * ph;
        let ap = *a;
        *a = ap * cs - bq * sn;
        *b = ap * sn + bq * cs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::frobenius_distance;

    type M = ComplexMatrix<f64>;

    #[test]
    fn reconstructs_rectangular() {
        let a = M::from_fn(4, 3, |i, j| Complex::new((i * 3 + j) as f64 * 0.3 - 1.0, (i as f64 - j as f64) * 0.2));
        for mat in [a.clone(), a.dagger()] {
            let d = svd(&mat);
            let sig = M::from_real_diag(&d.s);
            let back = &(&d.u * &sig) * &d.v.dagger();
            assert!(frobenius_distance(&back, &mat).unwrap() < 1e-12);
            assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_deficient_values() {
        let a = M::from_real_diag(&[0.0, 5.0, 2.0]);
        let d = svd(&a);
        assert!((d.s[0] - 5.0).abs() < 1e-15 && (d.s[1] - 2.0).abs() < 1e-15 && d.s[2] == 0.0);
    }
}
