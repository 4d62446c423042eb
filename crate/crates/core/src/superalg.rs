//! OSp(1|2) supermatrices assembled from a GRVV doublet.
//!
//! Even generators `**J**_i = diag(J_i, J̄_i)`; odd generators carry
//! `c·G_α` above and `−c·G†_α` below the diagonal, with `G_α = ε_{αβ}G^β`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{FuzzError, Result};
use crate::grvv::{ground_state, GrvvSolution};
use crate::matcore::{anticommutator, commutator, ComplexMatrix};
use crate::scalar::Real;
use crate::su2rep::{bilinears, epsilon, levi_civita, sigma_tilde};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoweringConvention {
    /// `(σ̃_i)_{αβ} = (εσ̃_i)_{αβ}`
    EpsLeft,
    /// `(σ̃_i)_{αβ} = (σ̃_iε)_{αβ}`
    EpsRight,
}

impl LoweringConvention {
    pub const ALL: [LoweringConvention; 2] = [LoweringConvention::EpsLeft, LoweringConvention::EpsRight];

    pub fn name(self) -> &'static str {
        match self {
            LoweringConvention::EpsLeft => "eps_left",
            LoweringConvention::EpsRight => "eps_right",
        }
    }

    fn lowered<T: Real>(self, i: usize) -> [[Complex<T>; 2]; 2] {
        let e = epsilon::<T>();
        let s = sigma_tilde::<T>(i);
        match self {
            LoweringConvention::EpsLeft => mul2(&e, &s),
            LoweringConvention::EpsRight => mul2(&s, &e),
        }
    }
}

fn mul2<T: Real>(a: &[[Complex<T>; 2]; 2], b: &[[Complex<T>; 2]; 2]) -> [[Complex<T>; 2]; 2] {
    let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SuperMatrixSet<T> {
    pub even: [ComplexMatrix<T>; 3],
    pub odd: [ComplexMatrix<T>; 2],
    pub scale: T,
    /// size of the upper (`N`) block
    pub split: usize,
}

pub fn build<T: Real>(sol: &GrvvSolution<T>, scale: T) -> Result<SuperMatrixSet<T>> {
    sol.validate()?;
    let b = bilinears(sol);
    let (n, nb) = sol.g1.shape();
    let zn = ComplexMatrix::zeros(n, nb);
    let zb = ComplexMatrix::zeros(nb, n);
    let even = [0, 1, 2].map(|i| {
        ComplexMatrix::from_blocks(&b.j[i], &zn, &zb, &b.jb[i]).expect("square blocks")
    });
    let e = epsilon::<T>();
    let g = sol.doublet();
    let odd = [0, 1].map(|a| {
        let mut lower = ComplexMatrix::zeros(n, nb);
        for be in 0..2 {
            lower += &g[be].scale_c(e[a][be]);
        }
        let upper = lower.scale(scale);
        let below = g[a].dagger().scale(-scale);
        ComplexMatrix::from_blocks(&ComplexMatrix::zeros(n, n), &upper, &below, &ComplexMatrix::zeros(nb, nb))
            .expect("square blocks")
    });
    Ok(SuperMatrixSet { even, odd, scale, split: n })
}

/// (even–even, even–odd, odd–odd) residuals of
/// `[J_i, J_j] = 2iε_{ijk}J_k`, `[J_i, J_α] = (L_iε⁻¹)_α^β J_β`, `{J_α, J_β} = −(L_i)_{αβ}J_i`.
pub fn osp_closure_residual<T: Real>(s: &SuperMatrixSet<T>, conv: LoweringConvention) -> (T, T, T) {
    let two_i = Complex::new(T::zero(), T::lit(2.0));
    let mut ee = T::zero();
    for a in 0..3 {
        for b in 0..3 {
            let mut r = commutator(&s.even[a], &s.even[b]);
            for k in 0..3 {
                let eps = levi_civita(a, b, k);
                if eps != 0 {
                    r -= &s.even[k].scale_c(two_i * T::lit(eps as f64));
                }
            }
            ee = ee.max(r.frobenius_norm());
        }
    }
    let einv = {
        let e = epsilon::<T>();
        [[-e[0][0], -e[0][1]], [-e[1][0], -e[1][1]]]
    };
    let mut eo = T::zero();
    for i in 0..3 {
        let coef = mul2(&conv.lowered::<T>(i), &einv);
        for a in 0..2 {
            let mut r = commutator(&s.even[i], &s.odd[a]);
            for b in 0..2 {
                r -= &s.odd[b].scale_c(coef[a][b]);
            }
            eo = eo.max(r.frobenius_norm());
        }
    }
    let mut oo = T::zero();
    for a in 0..2 {
        for b in 0..2 {
            let mut r = anticommutator(&s.odd[a], &s.odd[b]);
            for i in 0..3 {
                r += &s.even[i].scale_c(conv.lowered::<T>(i)[a][b]);
            }
            oo = oo.max(r.frobenius_norm());
        }
    }
    (ee, eo, oo)
}

/// Superadjoint `[[A, B], [C, D]]^‡ = [[A†, C†], [−B†, D†]]`.
pub fn superadjoint<T: Real>(m: &ComplexMatrix<T>, split: usize) -> ComplexMatrix<T> {
    let (rows, cols) = m.shape();
    let a = m.submatrix(0, 0, split, split);
    let b = m.submatrix(0, split, split, cols - split);
    let c = m.submatrix(split, 0, rows - split, split);
    let d = m.submatrix(split, split, rows - split, cols - split);
    ComplexMatrix::from_blocks(&a.dagger(), &c.dagger(), &(-b.dagger()), &d.dagger()).expect("square blocks")
}

/// Residual of `**J**_i† = **J**_i`, `**J**_1^‡ = −**J**_2` and `**J**_2^‡ = **J**_1`.
pub fn reality_residual<T: Real>(s: &SuperMatrixSet<T>) -> T {
    let mut worst = T::zero();
    for e in &s.even {
        worst = worst.max(e.hermitian_residual());
    }
    let a = &superadjoint(&s.odd[0], s.split) + &s.odd[1];
    let b = &superadjoint(&s.odd[1], s.split) - &s.odd[0];
    worst.max(a.frobenius_norm()).max(b.frobenius_norm())
}

#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub scale: f64,
    pub convention: LoweringConvention,
    pub residuals: [f64; 3],
}

impl Calibration {
    pub fn total(&self) -> f64 {
        self.residuals.iter().sum()
    }
}

/// Fits `c²` to the odd–odd relation by least squares for one convention.
fn fit_scale<T: Real>(sol: &GrvvSolution<T>, conv: LoweringConvention) -> Result<T> {
    let unit = build(sol, T::one())?;
    let mut num = T::zero();
    let mut den = T::zero();
    for a in 0..2 {
        for b in 0..2 {
            let ac = anticommutator(&unit.odd[a], &unit.odd[b]);
            let mut target = ComplexMatrix::zeros(ac.rows(), ac.cols());
            for i in 0..3 {
                target -= &unit.even[i].scale_c(conv.lowered::<T>(i)[a][b]);
            }
            num += crate::matcore::inner(ac.data(), target.data()).re;
            den += ac.frobenius_norm().powi(2);
        }
    }
    if den == T::zero() {
        return Ok(T::one());
    }
    Ok((num / den).max(T::zero()).sqrt())
}

fn evaluate<T: Real>(sol: &GrvvSolution<T>, scale: T, conv: LoweringConvention) -> Result<[T; 3]> {
    let s = build(sol, scale)?;
    let (a, b, c) = osp_closure_residual(&s, conv);
    Ok([a, b, c])
}

/// Chooses the `(c, convention)` pair with the smallest total closure residual
/// and confirms the same pair closes on the ground states `N = 2, 3, 4`.
pub fn calibrate<T: Real>(sol: &GrvvSolution<T>) -> Result<Calibration> {
    if !sol.is_irreducible() {
        return Err(FuzzError::Reducible(sol.partition.clone()));
    }
    if sol.dim() < 2 {
        return Err(FuzzError::Invalid("calibration needs N ≥ 2".into()));
    }
    let limit = T::lit(1e-10);
    let mut best: Option<(T, LoweringConvention, [T; 3])> = None;
    for conv in LoweringConvention::ALL {
        let c = fit_scale(sol, conv)?;
        let r = evaluate(sol, c, conv)?;
        let total = r[0] + r[1] + r[2];
        if best.as_ref().map_or(true, |(_, _, br)| total < br[0] + br[1] + br[2]) {
            best = Some((c, conv, r));
        }
    }
    let (c, conv, r) = best.expect("two conventions tried");
    let total = r[0] + r[1] + r[2];
    if total >= limit {
        return Err(FuzzError::NoClosure(total.to_f64_lossy()));
    }
    for n in 2..=4 {
        let g = ground_state::<T>(n)?;
        let rr = evaluate(&g, c, conv)?;
        let t = rr[0] + rr[1] + rr[2];
        if t >= limit {
            return Err(FuzzError::NoClosure(t.to_f64_lossy()));
        }
    }
    Ok(Calibration {
        scale: c.to_f64_lossy(),
        convention: conv,
        residuals: r.map(|x| x.to_f64_lossy()),
    })
}
