//! Spectral diagnostics: the fuzzy Laplacian, the scalar kinetic operator,
//! commutator decay and the coherent-state symbol of `Y_lm(J_i)`.
//!
//! Superoperators act on row-major `vec(A)`, so `vec(XAY) = (X ⊗ Yᵀ) vec(A)`.

mod classical;
pub mod jet;

use num_complex::Complex64 as C;
use serde::Serialize;

pub use classical::{
    dirac, dirac_square_check, gauss_legendre, spherical_spinor, spinorial_harmonic, vector_harmonics, Chirality,
    DiracCheck, SphereQuadrature,
};

use crate::equivalence::canonicalize;
use crate::error::{FuzzError, Result};
use crate::harmonics::{build_basis_to, classical_ylm};
use crate::matcore::{commutator, eigh, pseudo_inverse, spectral_norm, vec_norm};
use crate::su2rep::{irrep, levi_civita};
use crate::{Matrix, Su2, Tol};

pub const LAPLACIAN_LIMIT: usize = 64;
pub const KINETIC_LIMIT: usize = 16;
pub const SYMBOL_LIMIT: usize = 128;
pub const DECAY_LIMIT: usize = 512;

fn check_size(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(FuzzError::TooLarge { n, limit });
    }
    Ok(())
}

fn require_irreducible(rep: &Su2) -> Result<()> {
    if !rep.is_irreducible() {
        return Err(FuzzError::Reducible(rep.partition.clone()));
    }
    Ok(())
}

/// `ad(J) = J ⊗ 1 − 1 ⊗ Jᵀ`
pub fn adjoint_superoperator(j: &Matrix) -> Matrix {
    let id = Matrix::identity(j.rows());
    &j.kron(&id) - &id.kron(&j.transpose())
}

/// Dense `A ↦ Σ_i [J_i, [J_i, A]]`.
pub fn laplacian_superoperator(rep: &Su2) -> Matrix {
    let n = rep.dim();
    let mut out = Matrix::zeros(n * n, n * n);
    for j in rep.generators() {
        let ad = adjoint_superoperator(j);
        out += &(&ad * &ad);
    }
    out
}

/// Eigenvalues of the fuzzy Laplacian, ascending.
///
/// The representation is first rotated to canonical form; there the operator
/// preserves each diagonal `a − b = const` of the matrix units and is tridiagonal on it.
pub fn fuzzy_laplacian_spectrum(rep: &Su2) -> Result<Vec<f64>> {
    require_irreducible(rep)?;
    let n = rep.dim();
    check_size(n, LAPLACIAN_LIMIT)?;
    canonicalize(rep, Tol::default())?;
    let nf = n as f64;
    let j3 = |a: usize| 2.0 * a as f64 - (nf - 1.0);
    let p = |a: usize| 2.0 * (((a + 1) * (n - a - 1)) as f64).sqrt();
    let cas = nf * nf - 1.0;
    let mut values = Vec::with_capacity(n * n);
    for d in -(n as i64 - 1)..=(n as i64 - 1) {
        let len = n - d.unsigned_abs() as usize;
        let a0 = d.max(0) as usize;
        let b0 = (-d).max(0) as usize;
        let block = Matrix::from_fn(len, len, |r, s| {
            let (a, b) = (a0 + r, b0 + r);
            let v = if r == s {
                2.0 * cas - 2.0 * j3(a) * j3(b)
            } else if s + 1 == r {
                -p(a - 1) * p(b - 1)
            } else if r + 1 == s {
                -p(a) * p(b)
            } else {
                0.0
            };
            C::new(v, 0.0)
        });
        values.extend(eigh(&block)?.values);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Analytic Laplacian spectrum `4l(l+1)` with multiplicity `2l + 1`.
pub fn laplacian_levels(n: usize) -> Vec<Level> {
    (0..n)
        .map(|l| Level { value: (4 * l * (l + 1)) as f64, multiplicity: 2 * l + 1 })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub value: f64,
    pub multiplicity: usize,
}

/// Groups a sorted spectrum into levels whose members differ by at most `gap`.
pub fn group_levels(values: &[f64], gap: f64) -> Vec<Level> {
    let mut out: Vec<Level> = vec![];
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > gap {
            let mean = values[start..k].iter().sum::<f64>() / (k - start) as f64;
            out.push(Level { value: mean, multiplicity: k - start });
            start = k;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: usize,
    /// `‖[x₁, x₂]‖₂` with `x_i = J_i/√(N²−1)`
    pub norm: f64,
    pub closed_form: f64,
}

pub fn commutator_decay(n_list: &[usize]) -> Result<Vec<DecayRow>> {
    n_list
        .iter()
        .map(|&n| {
            check_size(n, DECAY_LIMIT)?;
            let rep = irrep::<f64>(n)?;
            let norm = if n == 1 {
                0.0
            } else {
                let s = 1.0 / ((n * n - 1) as f64).sqrt();
                spectral_norm(&commutator(&rep.j1.scale(s), &rep.j2.scale(s)))?
            };
            let closed_form = if n == 1 { 0.0 } else { 2.0 / (n as f64 + 1.0) };
            Ok(DecayRow { n, norm, closed_form })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionMode {
    Adjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// inside the span of `([J_1, A], [J_2, A], [J_3, A])`
    Vector,
    /// orthogonal to it
    Spinor,
    Mixed,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Vector => "vector",
            Family::Spinor => "spinor",
            Family::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KineticLevel {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub family: Family,
    /// largest and smallest overlap singular value with the vector family
    pub overlap: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct KineticSpectrum {
    pub n: usize,
    pub mode: ActionMode,
    pub eigenvalues: Vec<f64>,
    pub levels: Vec<KineticLevel>,
    pub hermitian_residual: f64,
    /// `‖K(J₁, J₂, J₃) − 5(J₁, J₂, J₃)‖`
    pub triple_residual: f64,
}

/// `(KΦ)_i = (1 + Σ_k ad(J_k)²)Φ_i − iε_{ijk} ad(J_k)Φ_j` on triples of `N×N` matrices.
pub fn kinetic_operator(rep: &Su2, mode: ActionMode) -> Matrix {
    let ActionMode::Adjoint = mode;
    let n2 = rep.dim() * rep.dim();
    let ad: Vec<Matrix> = rep.generators().iter().map(|j| adjoint_superoperator(j)).collect();
    let mut diag = Matrix::identity(n2);
    for a in &ad {
        diag += &(a * a);
    }
    let mut k = Matrix::zeros(3 * n2, 3 * n2);
    for i in 0..3 {
        k.set_block(i * n2, i * n2, &diag);
        for j in 0..3 {
            for (kk, a) in ad.iter().enumerate() {
                let e = levi_civita(i, j, kk);
                if e != 0 {
                    let cur = k.submatrix(i * n2, j * n2, n2, n2);
                    k.set_block(i * n2, j * n2, &(&cur + &a.scale_c(C::new(0.0, -(e as f64)))));
                }
            }
        }
    }
    k
}

/// Closed-form kinetic eigenvalues for total `k = l+1, l, l−1`, ascending.
pub fn predicted_kinetic_spectrum(n: usize) -> Vec<f64> {
    let mut v = vec![];
    for l in 0..n {
        let lf = l as f64;
        v.extend(std::iter::repeat(4.0 * lf * lf + 6.0 * lf + 1.0).take(2 * l + 3));
        if l > 0 {
            v.extend(std::iter::repeat(4.0 * lf * lf + 4.0 * lf - 1.0).take(2 * l + 1));
            v.extend(std::iter::repeat(4.0 * lf * lf + 2.0 * lf - 1.0).take(2 * l - 1));
        }
    }
    v.sort_by(f64::total_cmp);
    v
}

pub fn scalar_kinetic_spectrum(rep: &Su2, mode: ActionMode) -> Result<KineticSpectrum> {
    require_irreducible(rep)?;
    let n = rep.dim();
    check_size(n, KINETIC_LIMIT)?;
    let n2 = n * n;
    let k = kinetic_operator(rep, mode);
    let eig = eigh(&k)?;

    // projector onto the family: S(S†S)⁺S† with S†S the Laplacian
    let mut stack = Matrix::zeros(3 * n2, n2);
    for (i, j) in rep.generators().iter().enumerate() {
        stack.set_block(i * n2, 0, &adjoint_superoperator(j));
    }
    let lap = eigh(&(&stack.dagger() * &stack))?;
    let cutoff = 1e-9 * lap.values.last().copied().unwrap_or(0.0).max(1.0);
    let inv: Vec<f64> = lap.values.iter().map(|&v| if v > cutoff { 1.0 / v } else { 0.0 }).collect();
    let lap_pinv = lap.reconstruct_with(&inv);
    let projected = &stack.dagger() * &eig.vectors;

    let mut levels = vec![];
    let mut start = 0;
    let vals = &eig.values;
    for end in 1..=vals.len() {
        if end < vals.len() && vals[end] - vals[end - 1] <= 1e-8 * vals[end].abs().max(1.0) {
            continue;
        }
        let block = projected.submatrix(0, start, n2, end - start);
        let cos2 = eigh(&(&(&block.dagger() * &lap_pinv) * &block))?.values;
        let overlap = (
            cos2.last().copied().unwrap_or(0.0).max(0.0).sqrt(),
            cos2.first().copied().unwrap_or(0.0).max(0.0).sqrt(),
        );
        let family = if overlap.1 > 1.0 - 1e-8 {
            Family::Vector
        } else if overlap.0 < 1e-8 {
            Family::Spinor
        } else {
            Family::Mixed
        };
        let eigenvalue = vals[start..end].iter().sum::<f64>() / (end - start) as f64;
        levels.push(KineticLevel { eigenvalue, multiplicity: end - start, family, overlap });
        start = end;
    }

    let mut triple = Matrix::zeros(3 * n2, 1);
    for (i, j) in rep.generators().iter().enumerate() {
        for (r, z) in j.data().iter().enumerate() {
            triple[(i * n2 + r, 0)] = *z;
        }
    }
    let triple_residual = (&(&k * &triple) - &triple.scale(5.0)).frobenius_norm();
    Ok(KineticSpectrum {
        n,
        mode,
        eigenvalues: eig.values,
        levels,
        hermitian_residual: k.hermitian_residual(),
        triple_residual,
    })
}

/// Relative distance of a stacked triple `(Φ₁, Φ₂, Φ₃)` from the span of `{(J₁A, J₂A, J₃A)}`.
pub fn multiplication_family_distance(rep: &Su2, v: &[C]) -> Result<f64> {
    let n2 = rep.dim() * rep.dim();
    if v.len() != 3 * n2 {
        return Err(FuzzError::DataLength { rows: 3 * n2, cols: 1, len: v.len() });
    }
    let id = Matrix::identity(rep.dim());
    let mut stack = Matrix::zeros(3 * n2, n2);
    for (i, j) in rep.generators().iter().enumerate() {
        stack.set_block(i * n2, 0, &j.kron(&id));
    }
    let norm = vec_norm(v);
    if norm == 0.0 {
        return Ok(0.0);
    }
    let coeffs = pseudo_inverse(&stack, Tol::default()).matvec(v);
    let fit = stack.matvec(&coeffs);
    let diff: Vec<C> = v.iter().zip(&fit).map(|(a, b)| a - b).collect();
    Ok(vec_norm(&diff) / norm)
}

/// SU(2) coherent state at `(θ, φ)`; the north pole is the highest `J₃` weight.
pub fn coherent_state(n: usize, theta: f64, phi: f64) -> Vec<C> {
    let j = (n as f64 - 1.0) / 2.0;
    let (s, c) = (theta / 2.0).sin_cos();
    (0..n)
        .map(|k| {
            let mp = k as f64 - j;
            let binom: f64 = (1..=k).map(|i| (n - k + i - 1) as f64 / i as f64).product();
            let amp = binom.sqrt() * c.powf(j + mp) * s.powf(j - mp);
            C::from_polar(amp, -mp * phi)
        })
        .collect()
}

/// `⟨θφ| A |θφ⟩`
pub fn symbol(a: &Matrix, theta: f64, phi: f64) -> C {
    let c = coherent_state(a.rows(), theta, phi);
    let ac = a.matvec(&c);
    c.iter().zip(&ac).map(|(x, y)| x.conj() * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l: usize,
    pub m: i64,
    pub sup_error: f64,
}

/// Sup-distance between the symbol of `Y_lm(J_i)` (normalized `Tr Y†Y = N`) and
/// `(−1)^l √(4π) Y_lm(θ, φ)` over an interior `n_theta × n_phi` grid.
pub fn mode_convergence(n_list: &[usize], l: usize, m: i64, n_theta: usize, n_phi: usize) -> Result<Vec<ConvergenceRow>> {
    if m.unsigned_abs() as usize > l {
        return Err(FuzzError::QuantumNumbers(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    let grid = crate::geometry::SphereGrid::interior(n_theta, n_phi)?;
    let sign = if l % 2 == 1 { -1.0 } else { 1.0 };
    let scale = sign * (4.0 * std::f64::consts::PI).sqrt();
    n_list
        .iter()
        .map(|&n| {
            if n == 0 || l + 1 > n {
                return Err(FuzzError::QuantumNumbers(format!("l = {l} needs N > {l}, got {n}")));
            }
            check_size(n, SYMBOL_LIMIT)?;
            let rep = irrep::<f64>(n)?;
            let basis = build_basis_to(&rep, l)?;
            let y = basis.get(l, m).expect("l within lmax");
            let sup_error = grid
                .points()
                .map(|(t, p)| (symbol(y, t, p) - classical_ylm::<f64>(l, m, t, p) * scale).norm())
                .fold(0.0, f64::max);
            Ok(ConvergenceRow { n, l, m, sup_error })
        })
        .collect()
}
