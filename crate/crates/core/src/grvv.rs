//! GRVV ground states, block solutions, gauge dressing and the defining residuals.
//!
//! Formulas are quoted with 1-based indices; storage is 0-based, so
//! `(G¹)_{mm} = √(m−1)` lands at `[(m−1, m−1)]`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{FuzzError, Result};
use crate::matcore::{ComplexMatrix, Tolerance};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct GrvvSolution<T> {
    pub partition: Vec<usize>,
    pub g1: ComplexMatrix<T>,
    pub g2: ComplexMatrix<T>,
    pub dressed: bool,
}

impl<T: Real> GrvvSolution<T> {
    pub fn g(&self, alpha: usize) -> &ComplexMatrix<T> {
        match alpha {
            0 => &self.g1,
            _ => &self.g2,
        }
    }

    pub fn doublet(&self) -> [&ComplexMatrix<T>; 2] {
        [&self.g1, &self.g2]
    }

    pub fn dim(&self) -> usize {
        self.g1.rows()
    }

    pub fn is_irreducible(&self) -> bool {
        self.partition.len() == 1
    }

    /// Checks the stored shapes and partition agree.
    pub fn validate(&self) -> Result<()> {
        if self.g1.shape() != self.g2.shape() {
            return Err(FuzzError::ShapeMismatch {
                left: self.g1.shape(),
                right: self.g2.shape(),
            });
        }
        if self.partition.is_empty() {
            return Err(FuzzError::EmptyPartition);
        }
        let total: usize = self.partition.iter().sum();
        if total != self.g1.rows() || !self.g1.is_square() {
            return Err(FuzzError::Invalid(format!(
                "partition {:?} does not match a {}x{} doublet",
                self.partition,
                self.g1.rows(),
                self.g1.cols()
            )));
        }
        Ok(())
    }
}

pub fn ground_state<T: Real>(n: usize) -> Result<GrvvSolution<T>> {
    if n == 0 {
        return Err(FuzzError::ZeroDimension);
    }
    let mut g1 = ComplexMatrix::zeros(n, n);
    let mut g2 = ComplexMatrix::zeros(n, n);
    for m in 1..=n {
        g1[(m - 1, m - 1)] = Complex::new(T::from_usize_lossy(m - 1).sqrt(), T::zero());
        if m < n {
            g2[(m - 1, m)] = Complex::new(T::from_usize_lossy(n - m).sqrt(), T::zero());
        }
    }
    Ok(GrvvSolution {
        partition: vec![n],
        g1,
        g2,
        dressed: false,
    })
}

pub fn block_solution<T: Real>(partition: &[usize]) -> Result<GrvvSolution<T>> {
    if partition.is_empty() {
        return Err(FuzzError::EmptyPartition);
    }
    let blocks = partition
        .iter()
        .map(|&n| ground_state::<T>(n))
        .collect::<Result<Vec<_>>>()?;
    let g1: Vec<_> = blocks.iter().map(|b| &b.g1).collect();
    let g2: Vec<_> = blocks.iter().map(|b| &b.g2).collect();
    Ok(GrvvSolution {
        partition: partition.to_vec(),
        g1: ComplexMatrix::block_diag(&g1),
        g2: ComplexMatrix::block_diag(&g2),
        dressed: false,
    })
}

/// `G^α → U G^α Û†`
pub fn gauge_dress<T: Real>(
    sol: &GrvvSolution<T>,
    u: &ComplexMatrix<T>,
    u_hat: &ComplexMatrix<T>,
    tol: Tolerance<T>,
) -> Result<GrvvSolution<T>> {
    let n = sol.g1.rows();
    let nb = sol.g1.cols();
    if u.shape() != (n, n) {
        return Err(FuzzError::ShapeMismatch { left: u.shape(), right: (n, n) });
    }
    if u_hat.shape() != (nb, nb) {
        return Err(FuzzError::ShapeMismatch { left: u_hat.shape(), right: (nb, nb) });
    }
    for (what, m) in [("U", u), ("Û", u_hat)] {
        let r = m.unitary_residual();
        if !tol.accepts(r, T::from_usize_lossy(m.rows()).sqrt()) {
            return Err(FuzzError::NotUnitary { what, residual: r.to_f64_lossy() });
        }
    }
    let uh = u_hat.dagger();
    Ok(GrvvSolution {
        partition: sol.partition.clone(),
        g1: &(u * &sol.g1) * &uh,
        g2: &(u * &sol.g2) * &uh,
        dressed: true,
    })
}

/// `G^α G†_β G^β − G^β G†_β G^α`, summed over β.
pub fn grvv_rhs<T: Real>(g: [&ComplexMatrix<T>; 2], alpha: usize) -> ComplexMatrix<T> {
    let ga = g[alpha];
    let mut out = ComplexMatrix::zeros(ga.rows(), ga.cols());
    for gb in g {
        let gbd = gb.dagger();
        out += &(&(ga * &gbd) * gb);
        out -= &(&(gb * &gbd) * ga);
    }
    out
}

/// max over α of `‖G^α − (G^α G†_β G^β − G^β G†_β G^α)‖_F`
pub fn grvv_residual<T: Real>(sol: &GrvvSolution<T>) -> T {
    doublet_residual([&sol.g1, &sol.g2])
}

pub fn doublet_residual<T: Real>(g: [&ComplexMatrix<T>; 2]) -> T {
    (0..2)
        .map(|a| (g[a] - &grvv_rhs(g, a)).frobenius_norm())
        .fold(T::zero(), T::max)
}

/// `(‖G^αG†_α − (N−1)I‖_F, ‖G†_αG^α − N(I − Ē₁₁)‖_F)` for an irreducible solution.
///
/// `Ē₁₁` is the projector onto the kernel of `G†_αG^α`, which for a dressed
/// solution is no longer the first basis vector.
pub fn sphere_constraints<T: Real>(sol: &GrvvSolution<T>) -> Result<(T, T)> {
    if !sol.is_irreducible() {
        return Err(FuzzError::Reducible(sol.partition.clone()));
    }
    let n = sol.dim();
    let nf = T::from_usize_lossy(n);
    let j = &(&sol.g1 * &sol.g1.dagger()) + &(&sol.g2 * &sol.g2.dagger());
    let jbar = &(&sol.g1.dagger() * &sol.g1) + &(&sol.g2.dagger() * &sol.g2);
    let first = (&j - &ComplexMatrix::identity(n).scale(nf - T::one())).frobenius_norm();
    let e11 = kernel_projector(sol);
    let target = (&ComplexMatrix::identity(n) - &e11).scale(nf);
    let second = (&jbar - &target).frobenius_norm();
    Ok((first, second))
}

/// Projector onto the lowest-weight state annihilated by every `G^α`
/// (`Ē₁₁` in the undressed basis).
pub fn kernel_projector<T: Real>(sol: &GrvvSolution<T>) -> ComplexMatrix<T> {
    let n = sol.dim();
    if sol.dressed {
        let e = crate::matcore::eigh(&(&(&sol.g1.dagger() * &sol.g1) + &(&sol.g2.dagger() * &sol.g2)))
            .expect("square Hermitian input");
        let v = e.vectors.column(0);
        ComplexMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
    } else {
        let mut p = ComplexMatrix::zeros(n, n);
        p[(0, 0)] = Complex::new(T::one(), T::zero());
        p
    }
}

/// `G¹ = X₁ + iX₂`, `G² = X₃ + iX₄` with Hermitian `X_p`.
pub fn real_coordinates<T: Real>(sol: &GrvvSolution<T>) -> [ComplexMatrix<T>; 4] {
    let half = T::lit(0.5);
    let split = |g: &ComplexMatrix<T>| {
        let gd = g.dagger();
        let re = (g + &gd).scale(half);
        let im = (g - &gd).scale_c(Complex::new(T::zero(), -half));
        (re, im)
    };
    let (x1, x2) = split(&sol.g1);
    let (x3, x4) = split(&sol.g2);
    [x1, x2, x3, x4]
}

/// `Σ_p X_pX^p` read as `G^αG†_α = Σ_p X_p² + i([X₂,X₁] + [X₄,X₃])`.
pub fn coordinate_radius<T: Real>(x: &[ComplexMatrix<T>; 4]) -> ComplexMatrix<T> {
    let i = Complex::new(T::zero(), T::one());
    let mut out = ComplexMatrix::zeros(x[0].rows(), x[0].cols());
    for xp in x {
        out += &(xp * xp);
    }
    let comm = &crate::matcore::commutator(&x[1], &x[0]) + &crate::matcore::commutator(&x[3], &x[2]);
    out += &comm.scale_c(i);
    out
}
