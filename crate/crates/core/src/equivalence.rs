//! Both directions between GRVV doublets and SU(2) representations, plus the
//! five-step round trip.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{FuzzError, Result};
use crate::grvv::{grvv_residual, GrvvSolution};
use crate::matcore::{
    commutator, eigh, frobenius_distance, hermitian_sqrt, pseudo_inverse, ComplexMatrix, Tolerance,
};
use crate::scalar::Real;
use crate::su2rep::{bilinears, canonical, Su2Representation};

type M<T> = ComplexMatrix<T>;

/// `J̄_i` partition paired with a `J_i` partition: each `N_k` becomes `[1, N_k − 1]`.
pub fn bar_partition(partition: &[usize]) -> Vec<usize> {
    partition
        .iter()
        .flat_map(|&n| if n > 1 { vec![1, n - 1] } else { vec![1] })
        .collect()
}

/// `diag((N_k − 1)·1)`
pub fn casimir_trace<T: Real>(partition: &[usize]) -> M<T> {
    let d: Vec<T> = partition
        .iter()
        .flat_map(|&n| std::iter::repeat(T::from_usize_lossy(n - 1)).take(n))
        .collect();
    M::from_real_diag(&d)
}

/// `diag(N_k(1 − E₁₁))`
pub fn casimir_trace_bar<T: Real>(partition: &[usize]) -> M<T> {
    let d: Vec<T> = partition
        .iter()
        .flat_map(|&n| (0..n).map(move |k| if k == 0 { T::zero() } else { T::from_usize_lossy(n) }))
        .collect();
    M::from_real_diag(&d)
}

fn max_commutator<T: Real>(c: &M<T>, j: [&M<T>; 3]) -> T {
    j.iter().fold(T::zero(), |w, jk| w.max(commutator(c, jk).frobenius_norm()))
}

fn scale_of<T: Real>(n: usize) -> T {
    T::from_usize_lossy(n.max(1))
}

#[derive(Debug, Clone)]
pub struct GrvvToSu2<T> {
    pub j: Su2Representation<T>,
    pub jbar: Su2Representation<T>,
    pub trace_j: M<T>,
    pub trace_jbar: M<T>,
    pub closure: T,
    pub closure_bar: T,
    /// `max ‖[J, J_k]‖, ‖[J̄, J̄_k]‖`
    pub commutes: T,
}

pub fn grvv_to_su2<T: Real>(sol: &GrvvSolution<T>, tol: Tolerance<T>) -> Result<GrvvToSu2<T>> {
    sol.validate()?;
    let r = grvv_residual(sol);
    if !tol.accepts(r, scale_of(sol.dim())) {
        return Err(FuzzError::NotGrvv(r.to_f64_lossy()));
    }
    let b = bilinears(sol);
    let j = Su2Representation::new(b.j.clone(), sol.partition.clone())?;
    let jbar = Su2Representation::new(b.jb.clone(), bar_partition(&sol.partition))?;
    let commutes = max_commutator(&b.trace_j, b.j_refs()).max(max_commutator(&b.trace_jbar, b.jb_refs()));
    Ok(GrvvToSu2 {
        closure: j.closure_residual(),
        closure_bar: jbar.closure_residual(),
        j,
        jbar,
        trace_j: b.trace_j,
        trace_jbar: b.trace_jbar,
        commutes,
    })
}

/// Distance of a representation from `canonical(rep.partition)`.
pub fn canonical_distance<T: Real>(rep: &Su2Representation<T>) -> Result<T> {
    let c = canonical::<T>(&rep.partition)?;
    let mut worst = T::zero();
    for (a, b) in rep.generators().iter().zip(c.generators()) {
        worst = worst.max(frobenius_distance(a, b)?);
    }
    Ok(worst)
}

/// Rotates a representation into canonical block form.
///
/// Returns the canonical representation and the unitary `V` with
/// `V† J_i V = J_i^canonical`. Blocks come out in ascending dimension.
pub fn canonicalize<T: Real>(rep: &Su2Representation<T>, tol: Tolerance<T>) -> Result<(Su2Representation<T>, M<T>)> {
    let n = rep.dim();
    if n == 0 {
        return Err(FuzzError::ZeroDimension);
    }
    let cas = eigh(&rep.casimir())?;
    let lowering = rep.lowering();
    let gap = T::lit(1e-6) * scale_of::<T>(n).powi(2);
    let mut columns: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    let mut partition = vec![];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cas.values[end] - cas.values[end - 1] < gap {
            end += 1;
        }
        let mean = cas.values[start..end].iter().fold(T::zero(), |s, &v| s + v) / T::from_usize_lossy(end - start);
        let nk_f = (mean + T::one()).max(T::zero()).sqrt().round();
        let nk = nk_f.to_usize().unwrap_or(0);
        if nk == 0 || (nk_f * nk_f - T::one() - mean).abs() > gap || (end - start) % nk != 0 {
            return Err(FuzzError::QuantumNumbers(format!(
                "Casimir cluster {:.6} of size {}",
                mean.to_f64_lossy(),
                end - start
            )));
        }
        let mult = (end - start) / nk;
        let q = M::from_fn(n, end - start, |i, j| cas.vectors[(i, start + j)]);
        let j3q = &(&q.dagger() * &rep.j3) * &q;
        let w = eigh(&j3q)?;
        let top = T::from_usize_lossy(nk - 1);
        for k in 0..mult {
            let col = end - start - 1 - k;
            if (w.values[col] - top).abs() > gap {
                return Err(FuzzError::QuantumNumbers(format!(
                    "highest weight {:.6}, expected {}",
                    w.values[col].to_f64_lossy(),
                    nk - 1
                )));
            }
            let mut v = q.matvec(&w.vectors.column(col));
            let mut chain = vec![v.clone()];
            for _ in 1..nk {
                v = lowering.matvec(&v);
                let norm = crate::matcore::vec_norm(&v);
                if norm <= gap {
                    return Err(FuzzError::Singular("lowering chain"));
                }
                let inv = T::one() / norm;
                v.iter_mut().for_each(|z| *z = *z * inv);
                chain.push(v.clone());
            }
            chain.reverse();
            columns.extend(chain);
            partition.push(nk);
        }
        start = end;
    }
    let mut v = M::zeros(n, n);
    for (j, col) in columns.iter().enumerate() {
        v.set_column(j, col);
    }
    let out = canonical::<T>(&partition)?;
    let rotated = rep.conjugate(&v.dagger());
    let mut worst = v.unitary_residual();
    for (a, b) in rotated.generators().iter().zip(out.generators()) {
        worst = worst.max(frobenius_distance(a, b)?);
    }
    if !tol.accepts(worst, scale_of(n)) {
        return Err(FuzzError::NotCanonical(worst.to_f64_lossy()));
    }
    Ok((out, v))
}

#[derive(Debug, Clone)]
pub struct Su2ToGrvv<T> {
    pub g_tilde: GrvvSolution<T>,
    /// `Ĝ̃^α = T̃⁺(J̄ + J̄₃, J̄₁ − iJ̄₂)/2`
    pub g_hat: [M<T>; 2],
    pub jbar: Su2Representation<T>,
    pub trace_j: M<T>,
    pub trace_jbar: M<T>,
    pub t: M<T>,
    pub t_tilde: M<T>,
    pub grvv: T,
    /// `max ‖Ĝ̃^α − T̃T̃⁺G̃^α‖`
    pub hat_projection: T,
    /// largest entry in the columns of each block's first index
    pub kernel_columns: T,
}

fn half_sqrt<T: Real>(trace: &M<T>, j3: &M<T>, tol: Tolerance<T>) -> Result<M<T>> {
    Ok(hermitian_sqrt(&(trace + j3), tol)?.scale(T::lit(0.5).sqrt()))
}

pub fn su2_to_grvv<T: Real>(rep: &Su2Representation<T>, tol: Tolerance<T>) -> Result<Su2ToGrvv<T>> {
    let n = rep.dim();
    let d = canonical_distance(rep)?;
    if !tol.accepts(d, scale_of(n)) {
        return Err(FuzzError::NotCanonical(d.to_f64_lossy()));
    }
    let half = Complex::new(T::lit(0.5), T::zero());
    let trace_j = casimir_trace::<T>(&rep.partition);
    let trace_jbar = casimir_trace_bar::<T>(&rep.partition);
    let jbar = canonical::<T>(&bar_partition(&rep.partition))?;

    let t = half_sqrt(&trace_j, &rep.j3, tol)?;
    let tp = pseudo_inverse(&t, tol).scale_c(half);
    let g1 = &(&trace_j + &rep.j3) * &tp;
    let g2 = &rep.lowering() * &tp;

    let tt = half_sqrt(&trace_jbar, &jbar.j3, tol)?;
    let ttp = pseudo_inverse(&tt, tol);
    let g_hat = [
        &ttp.scale_c(half) * &(&trace_jbar + &jbar.j3),
        &ttp.scale_c(half) * &jbar.lowering(),
    ];
    let proj = &tt * &ttp;
    let hat_projection = frobenius_distance(&g_hat[0], &(&proj * &g1))?
        .max(frobenius_distance(&g_hat[1], &(&proj * &g2))?);

    let mut kernel_columns = T::zero();
    let mut offset = 0;
    for &nk in &rep.partition {
        for g in [&g1, &g2] {
            kernel_columns = g.column(offset).iter().fold(kernel_columns, |w, z| w.max(z.norm()));
        }
        offset += nk;
    }

    let g_tilde = GrvvSolution {
        partition: rep.partition.clone(),
        g1,
        g2,
        dressed: false,
    };
    Ok(Su2ToGrvv {
        grvv: grvv_residual(&g_tilde),
        g_tilde,
        g_hat,
        jbar,
        trace_j,
        trace_jbar,
        t,
        t_tilde: tt,
        hat_projection,
        kernel_columns,
    })
}

/// Residual of `Û = TUT̃⁺` together with
/// `J̄₁ − iJ̄₂ = T̃²U†T⁺(J₁ − iJ₂)T⁺U`.
pub fn compatibility_residual<T: Real>(rep: &Su2Representation<T>, u: &M<T>, tol: Tolerance<T>) -> Result<T> {
    let n = rep.dim();
    if u.shape() != (n, n) {
        return Err(FuzzError::ShapeMismatch { left: u.shape(), right: (n, n) });
    }
    let r = u.unitary_residual();
    if !tol.accepts(r, scale_of::<T>(n).sqrt()) {
        return Err(FuzzError::NotUnitary { what: "U", residual: r.to_f64_lossy() });
    }
    let s = su2_to_grvv(rep, tol)?;
    let tp = pseudo_inverse(&s.t, tol);
    let ttp = pseudo_inverse(&s.t_tilde, tol);
    let tu = &s.t * u;
    let u_hat = &tu * &ttp;
    let first = frobenius_distance(&tu, &(&u_hat * &s.t_tilde))?;
    let tt2 = &s.t_tilde * &s.t_tilde;
    let rhs = &(&(&(&(&tt2 * &u.dagger()) * &tp) * &rep.lowering()) * &tp) * u;
    let second = frobenius_distance(&s.jbar.lowering(), &rhs)?;
    Ok(first.max(second))
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Step {
    pub step: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundTripReport {
    pub schema: u32,
    pub direction: &'static str,
    pub partition: Vec<usize>,
    pub steps: Vec<Step>,
    pub passed: bool,
}

impl RoundTripReport {
    pub fn worst(&self) -> f64 {
        self.steps
            .iter()
            .flat_map(|s| s.checks.iter().map(|c| c.residual))
            .fold(0.0, f64::max)
    }

    /// Turns a failing report into an error.
    pub fn into_result(self) -> Result<Self> {
        if self.passed {
            Ok(self)
        } else {
            Err(FuzzError::Reconstruction(self.worst()))
        }
    }
}

struct Builder<T> {
    tol: Tolerance<T>,
    scale: T,
    steps: Vec<Step>,
}

impl<T: Real> Builder<T> {
    fn step(&mut self, title: &'static str, checks: Vec<(&'static str, T)>) {
        let passed = checks.iter().all(|(_, r)| self.tol.accepts(*r, self.scale));
        self.steps.push(Step {
            step: self.steps.len() as u8 + 1,
            title,
            checks: checks
                .into_iter()
                .map(|(name, r)| Check { name, residual: r.to_f64_lossy() })
                .collect(),
            passed,
        });
    }

    fn finish(self, direction: &'static str, partition: Vec<usize>) -> RoundTripReport {
        let passed = self.steps.iter().all(|s| s.passed);
        RoundTripReport { schema: 1, direction, partition, steps: self.steps, passed }
    }
}

fn sorted_eigenvalues<T: Real>(m: &M<T>) -> Result<Vec<T>> {
    Ok(eigh(m)?.values)
}

fn spectrum_distance<T: Real>(a: &M<T>, b: &M<T>) -> Result<T> {
    let x = sorted_eigenvalues(a)?;
    let y = sorted_eigenvalues(b)?;
    if x.len() != y.len() {
        return Err(FuzzError::ShapeMismatch { left: a.shape(), right: b.shape() });
    }
    Ok(x.iter().zip(&y).fold(T::zero(), |w, (p, q)| w.max((*p - *q).abs())))
}

fn forward_steps<T: Real>(b: &mut Builder<T>, rep: &Su2Representation<T>) -> Result<Su2ToGrvv<T>> {
    let (canon, v) = canonicalize(rep, b.tol)?;
    let rotated = rep.conjugate(&v.dagger());
    let mut dist = T::zero();
    for (x, y) in rotated.generators().iter().zip(canon.generators()) {
        dist = dist.max(frobenius_distance(x, y)?);
    }
    b.step("reducible representation", vec![("closure", rep.closure_residual()), ("canonical_form", dist)]);

    let s = su2_to_grvv(&canon, b.tol)?;
    let bil = bilinears(&s.g_tilde);
    b.step(
        "casimir traces",
        vec![
            ("j_trace", frobenius_distance(&bil.trace_j, &s.trace_j)?),
            ("jbar_trace", frobenius_distance(&bil.trace_jbar, &s.trace_jbar)?),
            ("j_commutes", max_commutator(&s.trace_j, canon.generators())),
        ],
    );

    let mut jbar_match = T::zero();
    for (x, y) in bil.jb.iter().zip(s.jbar.generators()) {
        jbar_match = jbar_match.max(frobenius_distance(x, y)?);
    }
    b.step(
        "jbar determination",
        vec![
            ("compatibility_identity", compatibility_residual(&canon, &M::identity(canon.dim()), b.tol)?),
            ("jbar_commutes", max_commutator(&s.trace_jbar, s.jbar.generators())),
            ("jbar_match", jbar_match),
        ],
    );

    let mut j_match = T::zero();
    for (x, y) in bil.j.iter().zip(canon.generators()) {
        j_match = j_match.max(frobenius_distance(x, y)?);
    }
    b.step(
        "doublet construction",
        vec![("j_reproduced", j_match), ("hat_projection", s.hat_projection), ("kernel_columns", s.kernel_columns)],
    );
    Ok(s)
}

/// `J_i → G̃^α → J_i`, compared on Casimir spectra and closure.
pub fn round_trip_rep<T: Real>(rep: &Su2Representation<T>, tol: Tolerance<T>) -> Result<RoundTripReport> {
    let mut b = Builder { tol, scale: scale_of(rep.dim()), steps: vec![] };
    let s = forward_steps(&mut b, rep)?;
    let back = grvv_to_su2(&s.g_tilde, tol)?;
    b.step(
        "grvv algebra",
        vec![
            ("grvv", s.grvv),
            ("closure_back", back.closure),
            ("closure_bar_back", back.closure_bar),
            ("casimir_spectrum", spectrum_distance(&back.j.casimir(), &rep.casimir())?),
        ],
    );
    let partition = s.g_tilde.partition.clone();
    Ok(b.finish("su2_to_grvv", partition))
}

/// `G^α → J_i → G̃^α`, compared on the spectra of the bilinears `G^αG†_β`, `G†_βG^α`.
pub fn round_trip_sol<T: Real>(sol: &GrvvSolution<T>, tol: Tolerance<T>) -> Result<RoundTripReport> {
    let mut b = Builder { tol, scale: scale_of(sol.dim()), steps: vec![] };
    let fwd = grvv_to_su2(sol, tol)?;
    let s = forward_steps(&mut b, &fwd.j)?;
    let before = bilinears(sol);
    let after = bilinears(&s.g_tilde);
    let mut spectra = spectrum_distance(&before.trace_j, &after.trace_j)?
        .max(spectrum_distance(&before.trace_jbar, &after.trace_jbar)?);
    for a in 0..2 {
        spectra = spectra
            .max(spectrum_distance(&before.jmat[a][a], &after.jmat[a][a])?)
            .max(spectrum_distance(&before.jbar[a][a], &after.jbar[a][a])?);
    }
    b.step(
        "grvv algebra",
        vec![
            ("grvv", s.grvv),
            ("closure", fwd.closure),
            ("closure_bar", fwd.closure_bar),
            ("trace_commutes", fwd.commutes),
            ("bilinear_spectra", spectra),
        ],
    );
    let partition = s.g_tilde.partition.clone();
    Ok(b.finish("grvv_to_su2", partition))
}
