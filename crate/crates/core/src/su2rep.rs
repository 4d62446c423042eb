//! SU(2) generators in the doubled normalization `[J_i, J_j] = 2iε_{ijk}J_k`,
//! and the bilinears of a GRVV doublet.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{FuzzError, Result};
use crate::grvv::GrvvSolution;
use crate::matcore::{commutator, ComplexMatrix};
use crate::scalar::Real;

/// Transposed Pauli matrices `σ̃_i = σ_iᵀ`.
pub fn sigma_tilde<T: Real>(i: usize) -> [[Complex<T>; 2]; 2] {
    let z = Complex::new(T::zero(), T::zero());
    let o = Complex::new(T::one(), T::zero());
    let im = Complex::new(T::zero(), T::one());
    match i {
        0 => [[z, o], [o, z]],
        1 => [[z, im], [-im, z]],
        _ => [[o, z], [z, -o]],
    }
}

/// Standard Pauli matrices.
pub fn sigma<T: Real>(i: usize) -> [[Complex<T>; 2]; 2] {
    let s = sigma_tilde::<T>(i);
    [[s[0][0], s[1][0]], [s[0][1], s[1][1]]]
}

/// `ε = iσ̃₂ = [[0, −1], [1, 0]]`
pub fn epsilon<T: Real>() -> [[Complex<T>; 2]; 2] {
    let z = Complex::new(T::zero(), T::zero());
    let o = Complex::new(T::one(), T::zero());
    [[z, -o], [o, z]]
}

/// Levi-Civita symbol on {0,1,2}.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i32 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Su2Representation<T> {
    pub j1: ComplexMatrix<T>,
    pub j2: ComplexMatrix<T>,
    pub j3: ComplexMatrix<T>,
    pub partition: Vec<usize>,
}

impl<T: Real> Su2Representation<T> {
    pub fn new(j: [ComplexMatrix<T>; 3], partition: Vec<usize>) -> Result<Self> {
        let [j1, j2, j3] = j;
        for m in [&j2, &j3] {
            if m.shape() != j1.shape() {
                return Err(FuzzError::ShapeMismatch { left: j1.shape(), right: m.shape() });
            }
        }
        if !j1.is_square() {
            return Err(FuzzError::ShapeMismatch { left: j1.shape(), right: j1.shape() });
        }
        if partition.is_empty() {
            return Err(FuzzError::EmptyPartition);
        }
        if partition.iter().sum::<usize>() != j1.rows() {
            return Err(FuzzError::Invalid(format!(
                "partition {partition:?} does not cover dimension {}",
                j1.rows()
            )));
        }
        Ok(Self { j1, j2, j3, partition })
    }

    pub fn generators(&self) -> [&ComplexMatrix<T>; 3] {
        [&self.j1, &self.j2, &self.j3]
    }

    pub fn dim(&self) -> usize {
        self.j1.rows()
    }

    pub fn is_irreducible(&self) -> bool {
        self.partition.len() == 1
    }

    pub fn casimir(&self) -> ComplexMatrix<T> {
        casimir(self.generators())
    }

    /// `J₊ = J₁ + iJ₂`, raising the ascending index.
    pub fn raising(&self) -> ComplexMatrix<T> {
        &self.j1 + &self.j2.scale_c(Complex::new(T::zero(), T::one()))
    }

    /// `J₋ = J₁ − iJ₂`
    pub fn lowering(&self) -> ComplexMatrix<T> {
        &self.j1 - &self.j2.scale_c(Complex::new(T::zero(), T::one()))
    }

    pub fn closure_residual(&self) -> T {
        closure_residual(self.generators())
    }

    /// `U J_i U†`
    pub fn conjugate(&self, u: &ComplexMatrix<T>) -> Self {
        let ud = u.dagger();
        let f = |m: &ComplexMatrix<T>| &(u * m) * &ud;
        Self {
            j1: f(&self.j1),
            j2: f(&self.j2),
            j3: f(&self.j3),
            partition: self.partition.clone(),
        }
    }
}

pub fn casimir<T: Real>(j: [&ComplexMatrix<T>; 3]) -> ComplexMatrix<T> {
    let mut c = ComplexMatrix::zeros(j[0].rows(), j[0].cols());
    for ji in j {
        c += &(ji * ji);
    }
    c
}

/// max over (i, j) of `‖[J_i, J_j] − 2iε_{ijk}J_k‖_F`
pub fn closure_residual<T: Real>(j: [&ComplexMatrix<T>; 3]) -> T {
    let two_i = Complex::new(T::zero(), T::lit(2.0));
    let mut worst = T::zero();
    for a in 0..3 {
        for b in a + 1..3 {
            let k = 3 - a - b;
            let sign = T::lit(levi_civita(a, b, k) as f64);
            let r = &commutator(j[a], j[b]) - &j[k].scale_c(two_i * sign);
            worst = worst.max(r.frobenius_norm());
        }
    }
    worst
}

/// Spin-(N−1)/2 irrep with `J₃` ascending along the diagonal.
pub fn irrep<T: Real>(n: usize) -> Result<Su2Representation<T>> {
    if n == 0 {
        return Err(FuzzError::ZeroDimension);
    }
    let nf = T::from_usize_lossy(n);
    let half = T::lit(0.5);
    let mut jp = ComplexMatrix::zeros(n, n);
    let mut j3 = ComplexMatrix::zeros(n, n);
    for m in 1..=n {
        let mm = T::from_usize_lossy(m) - (nf + T::one()) * half;
        j3[(m - 1, m - 1)] = Complex::new(mm * T::lit(2.0), T::zero());
        if m > 1 {
            // 2α_{j,m'} with (j+m')(j−m'+1) = (m−1)(N−m+1)
            let a = (T::from_usize_lossy(m - 1) * T::from_usize_lossy(n - m + 1)).sqrt();
            jp[(m - 1, m - 2)] = Complex::new(a * T::lit(2.0), T::zero());
        }
    }
    let jm = jp.dagger();
    let j1 = (&jp + &jm).scale(half);
    let j2 = (&jp - &jm).scale_c(Complex::new(T::zero(), -half));
    Su2Representation::new([j1, j2, j3], vec![n])
}

pub fn direct_sum<T: Real>(reps: &[Su2Representation<T>]) -> Result<Su2Representation<T>> {
    if reps.is_empty() {
        return Err(FuzzError::EmptyPartition);
    }
    let pick = |f: fn(&Su2Representation<T>) -> &ComplexMatrix<T>| {
        let v: Vec<_> = reps.iter().map(f).collect();
        ComplexMatrix::block_diag(&v)
    };
    let partition = reps.iter().flat_map(|r| r.partition.iter().copied()).collect();
    Su2Representation::new([pick(|r| &r.j1), pick(|r| &r.j2), pick(|r| &r.j3)], partition)
}

/// Canonical block-diagonal representation for a partition.
pub fn canonical<T: Real>(partition: &[usize]) -> Result<Su2Representation<T>> {
    let reps = partition.iter().map(|&n| irrep::<T>(n)).collect::<Result<Vec<_>>>()?;
    direct_sum(&reps)
}

/// `Σ_{ab} s[a][b]·table[a][b]`, or `table[b][a]` when `transpose` is set.
pub fn contract<T: Real>(
    s: &[[Complex<T>; 2]; 2],
    table: &[[ComplexMatrix<T>; 2]; 2],
    transpose: bool,
) -> ComplexMatrix<T> {
    let mut out = ComplexMatrix::zeros(table[0][0].rows(), table[0][0].cols());
    for a in 0..2 {
        for b in 0..2 {
            let m = if transpose { &table[b][a] } else { &table[a][b] };
            out += &m.scale_c(s[a][b]);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct BilinearSet<T> {
    /// `jmat[α][β] = G^α G†_β`
    pub jmat: [[ComplexMatrix<T>; 2]; 2],
    /// `jbar[α][β] = G†_α G^β`
    pub jbar: [[ComplexMatrix<T>; 2]; 2],
    /// `J = G^α G†_α`
    pub trace_j: ComplexMatrix<T>,
    /// `J̄ = G†_α G^α`
    pub trace_jbar: ComplexMatrix<T>,
    /// `J_i = (σ̃_i)^α_β J^β_α`
    pub j: [ComplexMatrix<T>; 3],
    /// `J̄_i = (σ̃_i)^α_β G†_α G^β`
    pub jb: [ComplexMatrix<T>; 3],
}

impl<T: Real> BilinearSet<T> {
    pub fn j_refs(&self) -> [&ComplexMatrix<T>; 3] {
        [&self.j[0], &self.j[1], &self.j[2]]
    }

    pub fn jb_refs(&self) -> [&ComplexMatrix<T>; 3] {
        [&self.jb[0], &self.jb[1], &self.jb[2]]
    }

    /// `J̄^α_β = G†_β G^α`, the right-acting U(2) generators.
    pub fn jbar_updown(&self, alpha: usize, beta: usize) -> &ComplexMatrix<T> {
        &self.jbar[beta][alpha]
    }
}

pub fn bilinears<T: Real>(sol: &GrvvSolution<T>) -> BilinearSet<T> {
    let g = sol.doublet();
    let gd = [g[0].dagger(), g[1].dagger()];
    let jmat = [
        [g[0] * &gd[0], g[0] * &gd[1]],
        [g[1] * &gd[0], g[1] * &gd[1]],
    ];
    let jbar = [
        [&gd[0] * g[0], &gd[0] * g[1]],
        [&gd[1] * g[0], &gd[1] * g[1]],
    ];
    let trace_j = &jmat[0][0] + &jmat[1][1];
    let trace_jbar = &jbar[0][0] + &jbar[1][1];
    let j = [0, 1, 2].map(|i| contract(&sigma_tilde(i), &jmat, true));
    let jb = [0, 1, 2].map(|i| contract(&sigma_tilde(i), &jbar, false));
    BilinearSet { jmat, jbar, trace_j, trace_jbar, j, jb }
}

/// Residual of `[X^α_β, X^μ_ν] = δ^μ_β X^α_ν − δ^α_ν X^μ_β` for
/// `X^α_β = G^αG†_β` and for `X^α_β = G†_βG^α`.
pub fn u2_structure_residual<T: Real>(b: &BilinearSet<T>) -> T {
    let left = [[&b.jmat[0][0], &b.jmat[0][1]], [&b.jmat[1][0], &b.jmat[1][1]]];
    let right = [
        [b.jbar_updown(0, 0), b.jbar_updown(0, 1)],
        [b.jbar_updown(1, 0), b.jbar_updown(1, 1)],
    ];
    let mut worst = T::zero();
    for x in [left, right] {
        for a in 0..2 {
            for be in 0..2 {
                for mu in 0..2 {
                    for nu in 0..2 {
                        let mut r = commutator(x[a][be], x[mu][nu]);
                        if mu == be {
                            r -= x[a][nu];
                        }
                        if a == nu {
                            r += x[mu][be];
                        }
                        worst = worst.max(r.frobenius_norm());
                    }
                }
            }
        }
    }
    worst
}

/// Covariance of the doublet: `J_iG^α − G^αJ̄_i = (σ̃_i)^α_β G^β`, the U(2)
/// form `J^α_βG^γ − G^γJ̄^α_β = δ^γ_βG^α − δ^α_βG^γ`, and the daggered
/// `G†_αJ_i − J̄_iG†_α = G†_β(σ̃_i)^β_α`.
pub fn doublet_covariance_residual<T: Real>(sol: &GrvvSolution<T>, b: &BilinearSet<T>) -> T {
    let g = sol.doublet();
    let gd = [g[0].dagger(), g[1].dagger()];
    let mut worst = T::zero();
    for i in 0..3 {
        let s = sigma_tilde::<T>(i);
        for a in 0..2 {
            let mut r = &(&b.j[i] * g[a]) - &(g[a] * &b.jb[i]);
            let mut rd = &(&gd[a] * &b.j[i]) - &(&b.jb[i] * &gd[a]);
            for be in 0..2 {
                r -= &g[be].scale_c(s[a][be]);
                rd -= &gd[be].scale_c(s[be][a]);
            }
            worst = worst.max(r.frobenius_norm()).max(rd.frobenius_norm());
        }
    }
    for a in 0..2 {
        for be in 0..2 {
            for ga in 0..2 {
                let mut r = &(&b.jmat[a][be] * g[ga]) - &(g[ga] * b.jbar_updown(a, be));
                if ga == be {
                    r -= g[a];
                }
                if a == be {
                    r += g[ga];
                }
                worst = worst.max(r.frobenius_norm());
            }
        }
    }
    worst
}

/// `Σ_γ G†_γJ_iG^γ = (N+1)J̄_i` and `Σ_γ G^γJ̄_iG†_γ = (N−2)J_i`.
pub fn intertwiner_residual<T: Real>(sol: &GrvvSolution<T>, b: &BilinearSet<T>) -> Result<T> {
    if !sol.is_irreducible() {
        return Err(FuzzError::Reducible(sol.partition.clone()));
    }
    let n = T::from_usize_lossy(sol.dim());
    let g = sol.doublet();
    let mut worst = T::zero();
    for i in 0..3 {
        let mut up = b.jb[i].scale(-(n + T::one()));
        let mut down = b.j[i].scale(-(n - T::lit(2.0)));
        for gg in g {
            let gd = gg.dagger();
            up += &(&(&gd * &b.j[i]) * gg);
            down += &(&(gg * &b.jb[i]) * &gd);
        }
        worst = worst.max(up.frobenius_norm()).max(down.frobenius_norm());
    }
    Ok(worst)
}
