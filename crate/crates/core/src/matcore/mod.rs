//! Dense complex matrices and the decompositions the rest of the crate leans on.

mod eigen;
mod serde_impl;
mod svd;

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;

use crate::error::{FuzzError, Result};
use crate::scalar::Real;

pub use eigen::{eigh, HermitianEigen};
pub use svd::{svd, Svd};

/// Relative and absolute thresholds used by comparisons and rank decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub relative: T,
    pub absolute: T,
}

impl<T: Real> Tolerance<T> {
    pub fn new(relative: T, absolute: T) -> Result<Self> {
        if relative > T::zero() && absolute > T::zero() {
            Ok(Self { relative, absolute })
        } else {
            Err(FuzzError::InvalidTolerance)
        }
    }

    /// `|a - b| <= absolute + relative * scale`
    pub fn accepts(&self, residual: T, scale: T) -> bool {
        residual <= self.absolute + self.relative * scale
    }
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            relative: T::lit(1e-10),
            absolute: T::lit(1e-12),
        }
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

#[cfg(test)]
pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(FuzzError::DataLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(FuzzError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let d: Vec<_> = diag.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::from_diag(&d)
    }

    /// Builds a matrix from real rows; ragged input is rejected.
    pub fn from_real_rows(rows: &[&[T]]) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(FuzzError::DataLength {
                    rows: r,
                    cols,
                    len: row.len(),
                });
            }
            data.extend(row.iter().map(|&x| Complex::new(x, T::zero())));
        }
        Self::new(r, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(FuzzError::ShapeMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.cols, "matvec shape");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// `‖A − A†‖_F`
    pub fn hermitian_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        (self - &self.dagger()).frobenius_norm()
    }

    /// `‖A†A − I‖_F`
    pub fn unitary_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        (&(&self.dagger() * self) - &Self::identity(self.rows)).frobenius_norm()
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex<T>]) {
        for (i, z) in v.iter().enumerate() {
            self[(i, j)] = *z;
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// `[[a, b], [c, d]]`
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(FuzzError::ShapeMismatch {
                left: a.shape(),
                right: d.shape(),
            });
        }
        let mut out = Self::zeros(a.rows + c.rows, a.cols + b.cols);
        out.set_block(0, 0, a);
        out.set_block(0, a.cols, b);
        out.set_block(a.rows, 0, c);
        out.set_block(a.rows, a.cols, d);
        Ok(out)
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)] * rhs[(i % rhs.rows, j % rhs.cols)]
        })
    }

    pub fn to_f64(&self) -> ComplexMatrix<f64> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy()))
                .collect(),
        }
    }

    /// Row-major flattening used when matrices become vectors of a superoperator.
    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.try_matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<T: Real> Mul for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        &self * &rhs
    }
}

impl<T: Real> Mul<Complex<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Complex<T>) -> ComplexMatrix<T> {
        self.scale_c(rhs)
    }
}

impl<T: Real> Mul<Complex<T>> for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Complex<T>) -> ComplexMatrix<T> {
        self.scale_c(rhs)
    }
}

macro_rules! elementwise {
    ($tr:ident, $f:ident, $atr:ident, $af:ident, $op:tt) => {
        impl<T: Real> $tr for &ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;
            fn $f(self, rhs: Self) -> ComplexMatrix<T> {
                assert_eq!(self.shape(), rhs.shape(), "elementwise shape mismatch");
                ComplexMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }

        impl<T: Real> $tr for ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;
            fn $f(self, rhs: Self) -> ComplexMatrix<T> {
                &self $op &rhs
            }
        }

        impl<T: Real> $atr<&ComplexMatrix<T>> for ComplexMatrix<T> {
            fn $af(&mut self, rhs: &ComplexMatrix<T>) {
                assert_eq!(self.shape(), rhs.shape(), "elementwise shape mismatch");
                for (a, b) in self.data.iter_mut().zip(&rhs.data) {
                    *a = *a $op b;
                }
            }
        }
    };
}

elementwise!(Add, add, AddAssign, add_assign, +);
elementwise!(Sub, sub, SubAssign, sub_assign, -);

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> Neg for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        -&self
    }
}

pub fn dagger<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.dagger()
}

/// `AB − BA`
pub fn commutator<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    &(a * b) - &(b * a)
}

/// `AB + BA`
pub fn anticommutator<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    &(a * b) + &(b * a)
}

pub fn frobenius_distance<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T> {
    if a.shape() != b.shape() {
        return Err(FuzzError::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(a.data
        .iter()
        .zip(&b.data)
        .fold(T::zero(), |acc, (x, y)| acc + (x - y).norm_sqr())
        .sqrt())
}

/// Moore–Penrose inverse; singular values below `tol.absolute * σ_max` count as zero.
pub fn pseudo_inverse<T: Real>(a: &ComplexMatrix<T>, tol: Tolerance<T>) -> ComplexMatrix<T> {
    let dec = svd(a);
    let smax = dec.s.first().copied().unwrap_or_else(T::zero);
    let cutoff = tol.absolute * smax;
    let mut out = ComplexMatrix::zeros(a.cols, a.rows);
    for (k, &s) in dec.s.iter().enumerate() {
        if s <= cutoff || s == T::zero() {
            continue;
        }
        let inv = T::one() / s;
        for i in 0..a.cols {
            let vi = dec.v[(i, k)] * inv;
            for j in 0..a.rows {
                out[(i, j)] += vi * dec.u[(j, k)].conj();
            }
        }
    }
    out
}

/// Square root of a Hermitian positive semidefinite matrix via its eigendecomposition.
pub fn hermitian_sqrt<T: Real>(a: &ComplexMatrix<T>, tol: Tolerance<T>) -> Result<ComplexMatrix<T>> {
    if !a.is_square() {
        return Err(FuzzError::ShapeMismatch {
            left: a.shape(),
            right: a.shape(),
        });
    }
    let sym = (a + &a.dagger()).scale(T::lit(0.5));
    let eig = eigh(&sym)?;
    let scale = eig.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let floor = tol.absolute + tol.relative * scale.max(T::one());
    let mut roots = Vec::with_capacity(eig.values.len());
    for &v in &eig.values {
        if v < -floor {
            return Err(FuzzError::NegativeEigenvalue(v.to_f64_lossy()));
        }
        roots.push(v.max(T::zero()).sqrt());
    }
    Ok(eig.reconstruct_with(&roots))
}

/// Largest singular value, from the top eigenvalue of `A†A`.
pub fn spectral_norm<T: Real>(a: &ComplexMatrix<T>) -> Result<T> {
    if a.rows == 0 || a.cols == 0 {
        return Ok(T::zero());
    }
    let gram = if a.rows >= a.cols { &a.dagger() * a } else { a * &a.dagger() };
    let eig = eigh(&gram)?;
    Ok(eig.values.last().copied().unwrap_or_else(T::zero).max(T::zero()).sqrt())
}

/// Numerical rank from singular values relative to the largest.
pub fn rank<T: Real>(a: &ComplexMatrix<T>, relative: T) -> usize {
    let s = svd(a).s;
    let smax = s.first().copied().unwrap_or_else(T::zero);
    s.iter().filter(|&&x| x > relative * smax && x > T::zero()).count()
}

/// Orthonormal basis of the column space, as columns.
pub fn column_space<T: Real>(a: &ComplexMatrix<T>, relative: T) -> ComplexMatrix<T> {
    let dec = svd(a);
    let smax = dec.s.first().copied().unwrap_or_else(T::zero);
    let keep: Vec<usize> = (0..dec.s.len())
        .filter(|&k| dec.s[k] > relative * smax && dec.s[k] > T::zero())
        .collect();
    ComplexMatrix::from_fn(a.rows, keep.len(), |i, j| dec.u[(i, keep[j])])
}

pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

pub fn vec_norm<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}
