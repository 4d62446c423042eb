//! Continuum harmonics on S²: vector and spinor harmonics, the Dirac operator
//! on the spinorial harmonics, and the quadrature used to test them.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C;
use serde::Serialize;

use super::jet::{ylm_jet, Jet};
use crate::error::{FuzzError, Result};
use crate::geometry::{Mat2, Spinor};
use crate::su2rep::sigma;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(FuzzError::ZeroDimension);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        let mut z = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let step = p1 / dp;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        x[k] = z;
        x[n - 1 - k] = -z;
        w[k] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - k] = w[k];
    }
    Ok((x, w))
}

/// Product rule: Gauss–Legendre in `cosθ`, uniform in `φ`.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    pub theta: Vec<f64>,
    pub weights: Vec<f64>,
    pub phi: Vec<f64>,
}

impl SphereQuadrature {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_phi == 0 {
            return Err(FuzzError::ZeroDimension);
        }
        let (x, w) = gauss_legendre(n_theta)?;
        Ok(Self {
            theta: x.iter().map(|c| c.acos()).collect(),
            weights: w.iter().map(|wi| wi * TAU / n_phi as f64).collect(),
            phi: (0..n_phi).map(|j| j as f64 * TAU / n_phi as f64).collect(),
        })
    }

    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> C) -> C {
        let mut s = C::new(0.0, 0.0);
        for (&t, &w) in self.theta.iter().zip(&self.weights) {
            for &p in &self.phi {
                s += f(t, p) * w;
            }
        }
        s
    }
}

fn check_lm(l: usize, m: i64) -> Result<()> {
    if m.unsigned_abs() as usize > l {
        return Err(FuzzError::QuantumNumbers(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    Ok(())
}

/// `(T_lm, S_lm)` in the orthonormal frame `(θ̂, φ̂)`:
/// `T = (−cscθ∂_φY, ∂_θY)/√(l(l+1))`, `S = (∂_θY, cscθ∂_φY)/√(l(l+1))`.
pub fn vector_harmonics(l: usize, m: i64, theta: f64, phi: f64) -> Result<(Spinor, Spinor)> {
    if l == 0 {
        return Err(FuzzError::QuantumNumbers("vector harmonics need l ≥ 1".into()));
    }
    check_lm(l, m)?;
    let y = ylm_jet(l, m, theta, phi);
    let dt = y.derivative(1, 0).expect("order 3");
    let dp = y.derivative(0, 1).expect("order 3") / theta.sin();
    let n = 1.0 / ((l * (l + 1)) as f64).sqrt();
    Ok(([-dp * n, dt * n], [dt * n, dp * n]))
}

/// `Ω_{jlm}` with `j = two_j/2`, `m = two_m/2`, from the `l ⊗ ½` Clebsch–Gordan table.
pub fn spherical_spinor(two_j: usize, l: usize, two_m: i64, theta: f64, phi: f64) -> Result<Spinor> {
    let upper = two_j == 2 * l + 1;
    if !(upper || (l > 0 && two_j + 1 == 2 * l)) {
        return Err(FuzzError::QuantumNumbers(format!("j = {two_j}/2 is not l ± 1/2 for l = {l}")));
    }
    if two_m.rem_euclid(2) != 1 || two_m.unsigned_abs() as usize > two_j {
        return Err(FuzzError::QuantumNumbers(format!("m = {two_m}/2 invalid for j = {two_j}/2")));
    }
    let m = two_m as f64 / 2.0;
    let lf = l as f64;
    let d = 2.0 * lf + 1.0;
    let y = |mm: i64| {
        if mm.unsigned_abs() as usize > l {
            C::new(0.0, 0.0)
        } else {
            ylm_jet(l, mm, theta, phi).value()
        }
    };
    let down = y((two_m - 1) / 2);
    let up = y((two_m + 1) / 2);
    let a = ((lf + m + 0.5) / d).sqrt();
    let b = ((lf - m + 0.5) / d).sqrt();
    Ok(if upper { [down * a, up * b] } else { [down * (-b), up * a] })
}

type SpinorJet = [Jet; 2];

fn mat_jet(m: &Mat2, v: &SpinorJet) -> SpinorJet {
    [v[0] * m[0][0] + v[1] * m[0][1], v[0] * m[1][0] + v[1] * m[1][1]]
}

fn add_jet(a: &SpinorJet, b: &SpinorJet) -> SpinorJet {
    [a[0] + b[0], a[1] + b[1]]
}

fn scale_jet(a: &SpinorJet, s: Jet) -> SpinorJet {
    [a[0] * s, a[1] * s]
}

/// `D̸ψ = σ₁∂_θψ + (σ₂/sinθ)(∂_φψ − ½cosθσ₁σ₂ψ)`
pub fn dirac(psi: &SpinorJet, theta: f64) -> SpinorJet {
    let t = Jet::theta(theta);
    let s1 = sigma::<f64>(0);
    let s2 = sigma::<f64>(1);
    let s12 = crate::geometry::mm(&s1, &s2);
    let dt = [psi[0].d_theta(), psi[1].d_theta()];
    let dp = [psi[0].d_phi(), psi[1].d_phi()];
    let spin = scale_jet(&mat_jet(&s12, psi), t.cos() * (-0.5));
    let inner = add_jet(&dp, &spin);
    add_jet(&mat_jet(&s1, &dt), &scale_jet(&mat_jet(&s2, &inner), t.sin().recip()))
}

/// `η₊`, first column of `(S⁻¹ε)/√2`, as a jet.
fn killing_jet(theta: f64, phi: f64) -> SpinorJet {
    let half_t = Jet::theta(theta) * 0.5;
    let (s, c) = (half_t.sin(), half_t.cos());
    let down = Jet::phi(phi).exp_i(-0.5);
    let a = C::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let i = C::new(0.0, 1.0);
    // (S⁻¹ε)_{α1} = conj(S_{2α})
    let s10 = c * down * a;
    let s11 = s * down * (a * -i);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [s10.conj() * r, s11.conj() * r]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chirality {
    Plus,
    Minus,
}

/// `Ξ^± = [(l+1 ∓ iD̸)Y_lm]η_±` with `η₋ = σ₃η₊`; `−iD̸Ξ^± = ±(l+1)Ξ^±`.
pub fn spinorial_harmonic(l: usize, m: i64, sign: Chirality, theta: f64, phi: f64) -> SpinorJet {
    let y = ylm_jet(l, m, theta, phi);
    let mut eta = killing_jet(theta, phi);
    let i = C::new(0.0, 1.0);
    let s = match sign {
        Chirality::Plus => -1.0,
        Chirality::Minus => {
            eta = mat_jet(&sigma::<f64>(2), &eta);
            1.0
        }
    };
    let t = Jet::theta(theta);
    let grad = add_jet(
        &mat_jet(&sigma::<f64>(0), &[y.d_theta() * eta[0], y.d_theta() * eta[1]]),
        &mat_jet(&sigma::<f64>(1), &scale_jet(&[y.d_phi() * eta[0], y.d_phi() * eta[1]], t.sin().recip())),
    );
    add_jet(&scale_jet(&eta, y * (l + 1) as f64), &scale_jet(&grad, Jet::constant(i * s)))
}

#[derive(Debug, Clone, Serialize)]
pub struct DiracCheck {
    pub l: usize,
    pub sign: Chirality,
    pub expected: f64,
    /// Quadrature Rayleigh quotient of `(−iD̸)²`, worst over `m`.
    pub eigenvalue: f64,
    /// `max |(−iD̸)²Ξ − (l+1)²Ξ| / max |Ξ|` over the grid.
    pub residual: f64,
    /// Same for the first-order equation `−iD̸Ξ = ±(l+1)Ξ`.
    pub first_order: f64,
}

pub fn dirac_square_check(l: usize, sign: Chirality, quad: &SphereQuadrature) -> DiracCheck {
    let i = C::new(0.0, 1.0);
    let lam = (l + 1) as f64;
    let target = match sign {
        Chirality::Plus => lam,
        Chirality::Minus => -lam,
    };
    let mut worst_eig = lam * lam;
    let mut residual = 0.0f64;
    let mut first = 0.0f64;
    for m in -(l as i64)..=(l as i64) {
        let mut num = C::new(0.0, 0.0);
        let mut den = 0.0;
        let mut peak = 0.0f64;
        let mut res = 0.0f64;
        let mut res1 = 0.0f64;
        for (&t, &w) in quad.theta.iter().zip(&quad.weights) {
            for &p in &quad.phi {
                let xi = spinorial_harmonic(l, m, sign, t, p);
                let d1 = scale_jet(&dirac(&xi, t), Jet::constant(-i));
                let d2 = scale_jet(&dirac(&d1, t), Jet::constant(-i));
                let v = [xi[0].value(), xi[1].value()];
                let v1 = [d1[0].value(), d1[1].value()];
                let v2 = [d2[0].value(), d2[1].value()];
                num += (v[0].conj() * v2[0] + v[1].conj() * v2[1]) * w;
                den += (v[0].norm_sqr() + v[1].norm_sqr()) * w;
                peak = peak.max(v[0].norm().max(v[1].norm()));
                res = res.max((v2[0] - v[0] * lam * lam).norm().max((v2[1] - v[1] * lam * lam).norm()));
                res1 = res1.max((v1[0] - v[0] * target).norm().max((v1[1] - v[1] * target).norm()));
            }
        }
        let eig = num.re / den;
        if (eig - lam * lam).abs() > (worst_eig - lam * lam).abs() {
            worst_eig = eig;
        }
        residual = residual.max(res / peak);
        first = first.max(res1 / peak);
    }
    DiracCheck { l, sign, expected: lam * lam, eigenvalue: worst_eig, residual, first_order: first }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inner2(a: &Spinor, b: &Spinor) -> C {
        a[0].conj() * b[0] + a[1].conj() * b[1]
    }

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(5).unwrap();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m8: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(8)).sum();
        assert!((m8 - 2.0 / 9.0).abs() < 1e-14);
        let (x1, w1) = gauss_legendre(1).unwrap();
        assert_eq!((x1[0], w1[0]), (0.0, 2.0));
        assert!(gauss_legendre(0).is_err());
    }

    #[test]
    fn vector_harmonic_orthonormality() {
        let q = SphereQuadrature::new(200, 400).unwrap();
        for m in -1..=1 {
            for mp in -1..=1 {
                let ts = q.integrate(|t, p| {
                    let (tv, _) = vector_harmonics(1, m, t, p).unwrap();
                    let (_, sv) = vector_harmonics(1, mp, t, p).unwrap();
                    inner2(&tv, &sv)
                });
                assert!(ts.norm() < 1e-6);
            }
        }
        for (l, m) in [(1, 0), (2, -1), (3, 2)] {
            let tt = q.integrate(|t, p| {
                let (tv, _) = vector_harmonics(l, m, t, p).unwrap();
                inner2(&tv, &tv)
            });
            assert!((tt.re - 1.0).abs() < 1e-6);
        }
        assert!(vector_harmonics(0, 0, 1.0, 1.0).is_err());
        assert!(vector_harmonics(1, 2, 1.0, 1.0).is_err());
    }

    #[test]
    fn spinor_harmonics() {
        let y00 = 1.0 / (4.0 * PI).sqrt();
        let up = spherical_spinor(1, 0, 1, 0.3, 0.2).unwrap();
        assert!((up[0].re - y00).abs() < 1e-15 && up[1].norm() == 0.0);
        let dn = spherical_spinor(1, 0, -1, 0.3, 0.2).unwrap();
        assert!(dn[0].norm() == 0.0 && (dn[1].re - y00).abs() < 1e-15);

        let q = SphereQuadrature::new(40, 80).unwrap();
        for (tj, l, tm) in [(3, 1, 1), (1, 1, -1), (5, 2, -3), (3, 2, 3)] {
            let n = q.integrate(|t, p| {
                let o = spherical_spinor(tj, l, tm, t, p).unwrap();
                inner2(&o, &o)
            });
            assert!((n.re - 1.0).abs() < 1e-6, "{tj} {l} {tm}");
        }
        let cross = q.integrate(|t, p| {
            inner2(&spherical_spinor(3, 1, 1, t, p).unwrap(), &spherical_spinor(1, 1, 1, t, p).unwrap())
        });
        assert!(cross.norm() < 1e-12);
        assert!(spherical_spinor(3, 0, 1, 0.1, 0.1).is_err());
        assert!(spherical_spinor(1, 0, 0, 0.1, 0.1).is_err());
    }

    #[test]
    fn dirac_squares() {
        let q = SphereQuadrature::new(12, 24).unwrap();
        for l in 0..4 {
            for sign in [Chirality::Plus, Chirality::Minus] {
                let c = dirac_square_check(l, sign, &q);
                assert!((c.eigenvalue - c.expected).abs() < 1e-8, "{c:?}");
                assert!(c.residual < 1e-10 && c.first_order < 1e-10, "{c:?}");
            }
        }
    }
}
