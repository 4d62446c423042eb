//! Seeded random matrices for gauge dressings and property checks.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matcore::{inner, vec_norm, ComplexMatrix};
use crate::scalar::Real;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Entries with independent standard normal real and imaginary parts.
pub fn gaussian_matrix<T: Real, R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex::new(T::lit(gaussian(rng)), T::lit(gaussian(rng))))
}

pub fn hermitian<T: Real, R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let a = gaussian_matrix::<T, R>(n, n, rng);
    (&a + &a.dagger()).scale(T::lit(0.5))
}

/// Haar-ish unitary from Gram–Schmidt on a Gaussian matrix.
pub fn unitary<T: Real, R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let a = gaussian_matrix::<T, R>(n, n, rng);
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = a.column(j);
        for _ in 0..2 {
            for q in &cols {
                let p = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let nv = vec_norm(&v);
        for vi in v.iter_mut() {
            *vi = *vi / nv;
        }
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Random matrix of the given rank (product of Gaussian factors).
pub fn with_rank<T: Real, R: Rng>(rows: usize, cols: usize, rank: usize, rng: &mut R) -> ComplexMatrix<T> {
    let a = gaussian_matrix::<T, R>(rows, rank, rng);
    let b = gaussian_matrix::<T, R>(rank, cols, rng);
    &a * &b
}
