//! Fuzzy spherical harmonics `Y_{lm}(J_i)` and the adjoint, `N̄×N̄` and
//! bifundamental mode expansions built on them.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{FuzzError, Result};
use crate::grvv::GrvvSolution;
use crate::matcore::{column_space, inner, pseudo_inverse, vec_norm, ComplexMatrix, Tolerance};
use crate::scalar::Real;
use crate::su2rep::{bilinears, Su2Representation};

/// Position of `(l, m)` in a basis listing `m = −l..=l` for each `l`.
pub fn lm_index(l: usize, m: i64) -> usize {
    l * l + (m + l as i64) as usize
}

#[derive(Debug, Clone)]
pub struct HarmonicBasis<T> {
    dim: usize,
    lmax: usize,
    normalization: T,
    elements: Vec<ComplexMatrix<T>>,
}

impl<T: Real> HarmonicBasis<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    /// `Tr(Y†_{lm} Y_{lm})`
    pub fn normalization(&self) -> T {
        self.normalization
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, l: usize, m: i64) -> Option<&ComplexMatrix<T>> {
        if l > self.lmax || m.unsigned_abs() as usize > l {
            return None;
        }
        self.elements.get(lm_index(l, m))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, &ComplexMatrix<T>)> {
        (0..=self.lmax)
            .flat_map(|l| (-(l as i64)..=l as i64).map(move |m| (l, m)))
            .zip(&self.elements)
            .map(|((l, m), y)| (l, m, y))
    }

    /// `G_{ab} = Tr(Y†_a Y_b)`
    pub fn gram(&self) -> ComplexMatrix<T> {
        let n = self.elements.len();
        ComplexMatrix::from_fn(n, n, |a, b| inner(self.elements[a].data(), self.elements[b].data()))
    }

    pub fn reconstruct(&self, coeffs: &[Complex<T>]) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (y, c) in self.elements.iter().zip(coeffs) {
            out += &y.scale_c(*c);
        }
        out
    }

    /// `a_{lm} = Tr(Y†_{lm} A) / norm`
    pub fn coefficients(&self, a: &ComplexMatrix<T>) -> Vec<Complex<T>> {
        self.elements
            .iter()
            .map(|y| inner(y.data(), a.data()) / self.normalization)
            .collect()
    }
}

/// Highest weight `(J₊)^l`, then repeated `[J₋, ·]`, each scaled to `Tr(Y†Y) = norm`.
/// `unit` stands in for `(J₊)^0` so that bases on a subspace start from its projector.
fn ladder_basis<T: Real>(
    j: [&ComplexMatrix<T>; 3],
    unit: ComplexMatrix<T>,
    lmax: usize,
    norm: T,
) -> Result<HarmonicBasis<T>> {
    let i = Complex::new(T::zero(), T::one());
    let jp = j[0] + &j[1].scale_c(i);
    let jm = j[0] - &j[1].scale_c(i);
    let dim = unit.rows();
    let scaled = |m: ComplexMatrix<T>| -> Result<ComplexMatrix<T>> {
        let f = m.frobenius_norm();
        if f <= T::epsilon() * T::lit(1e3) {
            return Err(FuzzError::Invalid("ladder construction produced a vanishing harmonic".into()));
        }
        Ok(m.scale(norm.sqrt() / f))
    };
    let mut elements: Vec<ComplexMatrix<T>> = Vec::with_capacity((lmax + 1) * (lmax + 1));
    // rounding leaks lower-l components of the same weight into the ladder; strip them
    let clean = |mut y: ComplexMatrix<T>, l: usize, m: i64, done: &[ComplexMatrix<T>]| -> Result<ComplexMatrix<T>> {
        for lower in m.unsigned_abs() as usize..l {
            let prev = &done[lm_index(lower, m)];
            let c = inner(prev.data(), y.data()) / norm;
            y -= &prev.scale_c(c);
        }
        scaled(y)
    };
    let mut power = unit.clone();
    for l in 0..=lmax {
        if l > 0 {
            power = &power * &jp;
        }
        let li = l as i64;
        let mut chain = Vec::with_capacity(2 * l + 1);
        let mut y = clean(power.clone(), l, li, &elements)?;
        chain.push(y.clone());
        for k in 1..=2 * li {
            y = clean(&(&jm * &y) - &(&y * &jm), l, li - k, &elements)?;
            chain.push(y.clone());
        }
        chain.reverse();
        elements.extend(chain);
    }
    Ok(HarmonicBasis {
        dim,
        lmax,
        normalization: norm,
        elements,
    })
}

/// All `N²` harmonics of an irreducible representation.
pub fn build_basis<T: Real>(rep: &Su2Representation<T>) -> Result<HarmonicBasis<T>> {
    if !rep.is_irreducible() {
        return Err(FuzzError::Reducible(rep.partition.clone()));
    }
    let n = rep.dim();
    ladder_basis(rep.generators(), ComplexMatrix::identity(n), n - 1, T::from_usize_lossy(n))
}

/// Harmonics of an irreducible representation up to `lmax ≤ N − 1`.
pub fn build_basis_to<T: Real>(rep: &Su2Representation<T>, lmax: usize) -> Result<HarmonicBasis<T>> {
    if !rep.is_irreducible() {
        return Err(FuzzError::Reducible(rep.partition.clone()));
    }
    let n = rep.dim();
    if lmax >= n {
        return Err(FuzzError::QuantumNumbers(format!("lmax = {lmax} needs N > {lmax}, got {n}")));
    }
    ladder_basis(rep.generators(), ComplexMatrix::identity(n), lmax, T::from_usize_lossy(n))
}

pub fn decompose_adjoint<T: Real>(a: &ComplexMatrix<T>, basis: &HarmonicBasis<T>) -> Result<Vec<Complex<T>>> {
    if a.shape() != (basis.dim, basis.dim) {
        return Err(FuzzError::ShapeMismatch {
            left: a.shape(),
            right: (basis.dim, basis.dim),
        });
    }
    Ok(basis.coefficients(a))
}

/// Unit vector spanning the kernel of `J̄ = G†_αG^α`, read off `Ē₁₁ = I − J̄/N`.
fn edge_vector<T: Real>(sol: &GrvvSolution<T>) -> Vec<Complex<T>> {
    let n = sol.dim();
    let b = bilinears(sol);
    let e11 = &ComplexMatrix::identity(n) - &b.trace_jbar.scale(T::one() / T::from_usize_lossy(n));
    let best = (0..n)
        .max_by(|&x, &y| {
            vec_norm(&e11.column(x))
                .partial_cmp(&vec_norm(&e11.column(y)))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    let v = e11.column(best);
    let nv = vec_norm(&v);
    v.into_iter().map(|z| z / nv).collect()
}

/// Orthonormal complement of `e`, from Gram–Schmidt on the projected standard basis.
fn complement<T: Real>(e: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
    let n = e.len();
    let mut out: Vec<Vec<Complex<T>>> = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n {
        if out.len() + 1 == n {
            break;
        }
        let mut v = vec![Complex::new(T::zero(), T::zero()); n];
        v[i] = Complex::new(T::one(), T::zero());
        for _ in 0..2 {
            for q in std::iter::once(e).chain(out.iter().map(|q| q.as_slice())) {
                let p = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let nv = vec_norm(&v);
        if nv > T::lit(1e-6) {
            out.push(v.into_iter().map(|z| z / nv).collect());
        }
    }
    out
}

fn outer<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
}

/// Expansion frame for `N̄×N̄` matrices: `Ē₁₁`, `Y_{lm}(J̄_i)` for `l ≤ N−2`,
/// and the edge modes `Ē_{1k}`, `Ē_{k1}`.
#[derive(Debug, Clone)]
pub struct UbarFrame<T> {
    pub e1: Vec<Complex<T>>,
    pub complement: Vec<Vec<Complex<T>>>,
    pub basis: HarmonicBasis<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UbarModes<T> {
    pub a0: Complex<T>,
    pub a: Vec<Complex<T>>,
    /// coefficients of `Ē_{1k}`
    pub b: Vec<Complex<T>>,
    /// coefficients of `Ē_{k1}`
    pub b_bar: Vec<Complex<T>>,
}

impl<T> UbarModes<T> {
    pub fn count(&self) -> usize {
        1 + self.a.len() + self.b.len() + self.b_bar.len()
    }
}

impl<T: Real> UbarFrame<T> {
    pub fn new(sol: &GrvvSolution<T>) -> Result<Self> {
        if !sol.is_irreducible() {
            return Err(FuzzError::Reducible(sol.partition.clone()));
        }
        let n = sol.dim();
        let e1 = edge_vector(sol);
        let complement = complement(&e1);
        let basis = if n >= 2 {
            let b = bilinears(sol);
            let proj = &ComplexMatrix::identity(n) - &outer(&e1, &e1);
            ladder_basis(b.jb_refs(), proj, n - 2, T::from_usize_lossy(n - 1))?
        } else {
            HarmonicBasis {
                dim: n,
                lmax: 0,
                normalization: T::zero(),
                elements: vec![],
            }
        };
        Ok(Self { e1, complement, basis })
    }

    pub fn decompose(&self, a: &ComplexMatrix<T>) -> Result<UbarModes<T>> {
        let n = self.e1.len();
        if a.shape() != (n, n) {
            return Err(FuzzError::ShapeMismatch { left: a.shape(), right: (n, n) });
        }
        let ae1 = a.matvec(&self.e1);
        let a0 = inner(&self.e1, &ae1);
        let b = self
            .complement
            .iter()
            .map(|f| inner(&self.e1, &a.matvec(f)))
            .collect();
        let b_bar = self.complement.iter().map(|f| inner(f, &ae1)).collect();
        let coeffs = if self.basis.is_empty() { vec![] } else { self.basis.coefficients(a) };
        Ok(UbarModes { a0, a: coeffs, b, b_bar })
    }

    pub fn reconstruct(&self, m: &UbarModes<T>) -> ComplexMatrix<T> {
        let mut out = outer(&self.e1, &self.e1).scale_c(m.a0);
        if !self.basis.is_empty() {
            out += &self.basis.reconstruct(&m.a);
        }
        for (f, (b, bb)) in self.complement.iter().zip(m.b.iter().zip(&m.b_bar)) {
            out += &outer(&self.e1, f).scale_c(*b);
            out += &outer(f, &self.e1).scale_c(*bb);
        }
        out
    }
}

pub fn decompose_ubar<T: Real>(a: &ComplexMatrix<T>, sol: &GrvvSolution<T>) -> Result<(UbarFrame<T>, UbarModes<T>)> {
    let frame = UbarFrame::new(sol)?;
    let modes = frame.decompose(a)?;
    Ok((frame, modes))
}

/// Precomputed spanning set `{Y_{lm}(J_i)G^β}` graded by `l`, for expanding
/// `r^α = rG^α + s^α_βG^β + T^α`.
#[derive(Debug, Clone)]
pub struct BifundamentalFrame<T> {
    sol: GrvvSolution<T>,
    basis: HarmonicBasis<T>,
    e1: Vec<Complex<T>>,
    /// per level: pseudo-inverse of the columns `vec(Y_{lm}G^β)` ordered by (m, β)
    design_pinv: Vec<ComplexMatrix<T>>,
    /// orthonormal basis of the span of levels `0..=l`
    cumulative: Vec<ComplexMatrix<T>>,
    tol: Tolerance<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifundamentalModes<T> {
    pub lmax: usize,
    /// `r_{lm}`, indexed by [`lm_index`]
    pub r: Vec<Complex<T>>,
    /// traceless `s^α_β` per `(l, m)`
    pub s: Vec<[[Complex<T>; 2]; 2]>,
    /// `t^α_k`, the first-column edge modes
    pub t: [Vec<Complex<T>>; 2],
    pub residual: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModesRecord {
    pub schema: u32,
    /// `[l, m, re, im]`
    pub r: Vec<(usize, i64, f64, f64)>,
    /// `[l, m, α, β, re, im]` with α, β ∈ {1, 2}
    pub s: Vec<(usize, i64, usize, usize, f64, f64)>,
    /// `[α, k, re, im]` with 1-based α and k
    pub t: Vec<(usize, usize, f64, f64)>,
    pub residual: f64,
}

impl<T: Real> BifundamentalModes<T> {
    /// Entries with magnitude above `cutoff` in the interchange layout.
    pub fn record(&self, cutoff: f64) -> ModesRecord {
        let f = |z: &Complex<T>| (z.re.to_f64_lossy(), z.im.to_f64_lossy());
        let keep = |z: &Complex<T>| z.norm().to_f64_lossy() > cutoff;
        let lm = |idx: usize| {
            let l = (idx as f64).sqrt().floor() as usize;
            (l, idx as i64 - (l * l) as i64 - l as i64)
        };
        let mut r = vec![];
        let mut s = vec![];
        for (idx, (rv, sv)) in self.r.iter().zip(&self.s).enumerate() {
            let (l, m) = lm(idx);
            if keep(rv) {
                let (a, b) = f(rv);
                r.push((l, m, a, b));
            }
            for (al, row) in sv.iter().enumerate() {
                for (be, z) in row.iter().enumerate() {
                    if keep(z) {
                        let (a, b) = f(z);
                        s.push((l, m, al + 1, be + 1, a, b));
                    }
                }
            }
        }
        let mut t = vec![];
        for (al, col) in self.t.iter().enumerate() {
            for (k, z) in col.iter().enumerate() {
                if keep(z) {
                    let (a, b) = f(z);
                    t.push((al + 1, k + 1, a, b));
                }
            }
        }
        ModesRecord {
            schema: 1,
            r,
            s,
            t,
            residual: self.residual.to_f64_lossy(),
        }
    }
}

impl<T: Real> BifundamentalFrame<T> {
    pub fn new(sol: &GrvvSolution<T>, tol: Tolerance<T>) -> Result<Self> {
        if !sol.is_irreducible() {
            return Err(FuzzError::Reducible(sol.partition.clone()));
        }
        let n = sol.dim();
        let e1 = edge_vector(sol);
        let lmax = n.saturating_sub(2);
        let b = bilinears(sol);
        let basis = ladder_basis(b.j_refs(), ComplexMatrix::identity(n), lmax, T::from_usize_lossy(n))?;
        let mut design_pinv = Vec::new();
        let mut cumulative = Vec::new();
        let mut all_cols: Vec<Vec<Complex<T>>> = Vec::new();
        let rank_tol = T::lit(1e-9);
        if n >= 2 {
            for l in 0..=lmax {
                let mut cols = Vec::with_capacity(2 * (2 * l + 1));
                for m in -(l as i64)..=l as i64 {
                    let y = basis.get(l, m).expect("index in range");
                    for g in sol.doublet() {
                        cols.push((y * g).into_vec());
                    }
                }
                let d = ComplexMatrix::from_fn(n * n, cols.len(), |i, j| cols[j][i]);
                design_pinv.push(pseudo_inverse(&d, Tolerance::new(tol.relative, rank_tol)?));
                all_cols.extend(cols);
                let acc = ComplexMatrix::from_fn(n * n, all_cols.len(), |i, j| all_cols[j][i]);
                cumulative.push(column_space(&acc, rank_tol));
            }
        }
        Ok(Self {
            sol: sol.clone(),
            basis,
            e1,
            design_pinv,
            cumulative,
            tol,
        })
    }

    pub fn basis(&self) -> &HarmonicBasis<T> {
        &self.basis
    }

    /// Rank of the full spanning set; `N(N−1)` for an irreducible solution.
    pub fn spanning_rank(&self) -> usize {
        self.cumulative.last().map_or(0, |q| q.cols())
    }

    fn project(q: &ComplexMatrix<T>, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let coeff = q.dagger().matvec(v);
        q.matvec(&coeff)
    }

    pub fn decompose(&self, r1: &ComplexMatrix<T>, r2: &ComplexMatrix<T>) -> Result<BifundamentalModes<T>> {
        let n = self.sol.dim();
        for r in [r1, r2] {
            if r.shape() != self.sol.g1.shape() {
                return Err(FuzzError::ShapeMismatch { left: r.shape(), right: self.sol.g1.shape() });
            }
        }
        let zero = Complex::new(T::zero(), T::zero());
        let count = self.basis.len();
        let mut c = vec![[[zero; 2]; 2]; count];
        let mut t = [vec![zero; n], vec![zero; n]];
        for (alpha, r) in [r1, r2].into_iter().enumerate() {
            t[alpha] = r.matvec(&self.e1);
            let rest = r - &outer(&t[alpha], &self.e1);
            let rest = rest.into_vec();
            let mut lower = vec![zero; n * n];
            for (l, (q, pinv)) in self.cumulative.iter().zip(&self.design_pinv).enumerate() {
                let upto = Self::project(q, &rest);
                let layer: Vec<_> = upto.iter().zip(&lower).map(|(a, b)| a - b).collect();
                let coeffs = pinv.matvec(&layer);
                for (k, z) in coeffs.into_iter().enumerate() {
                    let m = (k / 2) as i64 - l as i64;
                    c[lm_index(l, m)][alpha][k % 2] = z;
                }
                lower = upto;
            }
        }
        let half = T::lit(0.5);
        let r: Vec<_> = c.iter().map(|cc| (cc[0][0] + cc[1][1]) * half).collect();
        let s: Vec<_> = c
            .iter()
            .zip(&r)
            .map(|(cc, rv)| [[cc[0][0] - rv, cc[0][1]], [cc[1][0], cc[1][1] - rv]])
            .collect();
        let mut modes = BifundamentalModes {
            lmax: self.basis.lmax(),
            r,
            s,
            t,
            residual: T::zero(),
        };
        let [x1, x2] = self.reconstruct(&modes);
        let res = (r1 - &x1).frobenius_norm().max((r2 - &x2).frobenius_norm());
        let scale = r1.frobenius_norm().max(r2.frobenius_norm()).max(T::one());
        if !self.tol.accepts(res, scale) {
            return Err(FuzzError::Reconstruction(res.to_f64_lossy()));
        }
        modes.residual = res;
        Ok(modes)
    }

    /// `r^α = Σ r_{lm}Y_{lm}G^α + Σ s^α_β Y_{lm}G^β + t^α e₁†`
    pub fn reconstruct(&self, m: &BifundamentalModes<T>) -> [ComplexMatrix<T>; 2] {
        let g = self.sol.doublet();
        let mut out = [outer(&m.t[0], &self.e1), outer(&m.t[1], &self.e1)];
        for (idx, (_, _, y)) in self.basis.iter().enumerate() {
            if self.sol.dim() < 2 {
                break;
            }
            let yg = [y * g[0], y * g[1]];
            for alpha in 0..2 {
                out[alpha] += &yg[alpha].scale_c(m.r[idx]);
                for beta in 0..2 {
                    out[alpha] += &yg[beta].scale_c(m.s[idx][alpha][beta]);
                }
            }
        }
        out
    }

    /// Column-`e₁` part of the reconstruction that does not come from `T^α`.
    pub fn edge_leak(&self, m: &BifundamentalModes<T>) -> T {
        let stripped = BifundamentalModes {
            t: [vec![Complex::new(T::zero(), T::zero()); m.t[0].len()], vec![Complex::new(T::zero(), T::zero()); m.t[1].len()]],
            ..m.clone()
        };
        let [a, b] = self.reconstruct(&stripped);
        vec_norm(&a.matvec(&self.e1)).max(vec_norm(&b.matvec(&self.e1)))
    }
}

pub fn decompose_bifundamental<T: Real>(
    r1: &ComplexMatrix<T>,
    r2: &ComplexMatrix<T>,
    sol: &GrvvSolution<T>,
) -> Result<BifundamentalModes<T>> {
    BifundamentalFrame::new(sol, Tolerance::default())?.decompose(r1, r2)
}

/// Condon–Shortley `Y_{lm}(θ, φ)`, unit normalized on the sphere.
pub fn classical_ylm<T: Real>(l: usize, m: i64, theta: T, phi: T) -> Complex<T> {
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Complex::new(T::zero(), T::zero());
    }
    let x = theta.cos();
    let sx = theta.sin().abs();
    // P_{|m|}^{|m|} with the (−1)^m phase
    let mut pmm = T::one();
    for k in 0..am {
        pmm = pmm * (-T::from_usize_lossy(2 * k + 1)) * sx;
    }
    let p = if l == am {
        pmm
    } else {
        let mut p0 = pmm;
        let mut p1 = x * T::from_usize_lossy(2 * am + 1) * pmm;
        for ll in am + 2..=l {
            let p2 = (x * T::from_usize_lossy(2 * ll - 1) * p1 - T::from_usize_lossy(ll + am - 1) * p0)
                / T::from_usize_lossy(ll - am);
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    let mut ratio = T::one();
    for k in (l - am + 1)..=(l + am) {
        ratio = ratio / T::from_usize_lossy(k);
    }
    let norm = (T::from_usize_lossy(2 * l + 1) / (T::lit(4.0) * T::PI()) * ratio).sqrt();
    let y = Complex::from_polar(norm * p, T::from_usize_lossy(am) * phi);
    if m < 0 {
        let sign = if am % 2 == 0 { T::one() } else { -T::one() };
        y.conj() * sign
    } else {
        y
    }
}
