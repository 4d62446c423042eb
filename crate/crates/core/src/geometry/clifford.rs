//! SO(5) and SO(9) gamma matrices and the quaternionic and octonionic Hopf maps.

use num_complex::Complex64 as C;

use crate::error::{FuzzError, Result};
use crate::su2rep::sigma;
use crate::Matrix;

/// Fano-plane triples `e_ae_b = e_c`, read cyclically.
const FANO: [(usize, usize, usize); 7] = [(1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5)];

const UNIT_TOL: f64 = 1e-12;

/// `e_ie_j = sign·e_k` on the basis `e_0 = 1, e_1..e_7`.
fn octonion_product(i: usize, j: usize) -> (f64, usize) {
    if i == 0 {
        return (1.0, j);
    }
    if j == 0 {
        return (1.0, i);
    }
    if i == j {
        return (-1.0, 0);
    }
    for &(a, b, c) in &FANO {
        let cyc = [(a, b, c), (b, c, a), (c, a, b)];
        for (p, q, r) in cyc {
            if (p, q) == (i, j) {
                return (1.0, r);
            }
            if (q, p) == (i, j) {
                return (-1.0, r);
            }
        }
    }
    unreachable!("every imaginary pair lies on one Fano line")
}

/// Left multiplication by `e_i`, `i = 1..7`, as real antisymmetric 8×8 matrices.
pub fn octonion_lambda(i: usize) -> Result<Matrix> {
    if !(1..=7).contains(&i) {
        return Err(FuzzError::Invalid(format!("octonion unit {i} outside 1..7")));
    }
    let mut m = Matrix::zeros(8, 8);
    for j in 0..8 {
        let (s, k) = octonion_product(i, j);
        m[(k, j)] = C::new(s, 0.0);
    }
    Ok(m)
}

fn two_by_two(blocks: [[&Matrix; 2]; 2]) -> Matrix {
    Matrix::from_blocks(blocks[0][0], blocks[0][1], blocks[1][0], blocks[1][1]).expect("equal square blocks")
}

fn from2(m: [[C; 2]; 2]) -> Matrix {
    Matrix::from_fn(2, 2, |i, j| m[i][j])
}

/// `[[0,1],[1,0]]`, `diag(1,−1)` and `[[0,−iσ_k],[iσ_k,0]]` in 2×2 blocks.
pub fn gamma_so5() -> Vec<Matrix> {
    let id = Matrix::identity(2);
    let z = Matrix::zeros(2, 2);
    let i = C::new(0.0, 1.0);
    let mut out = vec![two_by_two([[&z, &id], [&id, &z]]), two_by_two([[&id, &z], [&z, &(-&id)]])];
    for k in 0..3 {
        let s = from2(sigma::<f64>(k));
        out.push(two_by_two([[&z, &s.scale_c(-i)], [&s.scale_c(i), &z]]));
    }
    out
}

/// `Γ_i = [[0,λ_i],[−λ_i,0]]`, `Γ₈ = [[0,1],[1,0]]`, `Γ₉ = diag(1,−1)`; all real symmetric.
pub fn gamma_so9() -> Vec<Matrix> {
    let id = Matrix::identity(8);
    let z = Matrix::zeros(8, 8);
    let mut out: Vec<Matrix> = (1..=7)
        .map(|i| {
            let l = octonion_lambda(i).expect("index in range");
            two_by_two([[&z, &l], [&(-&l), &z]])
        })
        .collect();
    out.push(two_by_two([[&z, &id], [&id, &z]]));
    out.push(two_by_two([[&id, &z], [&z, &(-&id)]]));
    out
}

fn check_unit(norm: f64) -> Result<()> {
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(FuzzError::NotUnit(norm));
    }
    Ok(())
}

/// `x_A = g†Γ_Ag` for unit `g ∈ C⁴`.
pub fn hopf_s4(g: &[C; 4]) -> Result<[f64; 5]> {
    check_unit(g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())?;
    let gammas = gamma_so5();
    let mut x = [0.0; 5];
    for (xa, ga) in x.iter_mut().zip(&gammas) {
        let v = ga.matvec(g);
        *xa = g.iter().zip(&v).map(|(a, b)| a.conj() * b).sum::<C>().re;
    }
    Ok(x)
}

/// `x_A = gᵀΓ_Ag` for unit `g ∈ R¹⁶`.
pub fn hopf_s8(g: &[f64; 16]) -> Result<[f64; 9]> {
    check_unit(g.iter().map(|v| v * v).sum::<f64>().sqrt())?;
    let gc: Vec<C> = g.iter().map(|&v| C::new(v, 0.0)).collect();
    let gammas = gamma_so9();
    let mut x = [0.0; 9];
    for (xa, ga) in x.iter_mut().zip(&gammas) {
        let v = ga.matvec(&gc);
        *xa = g.iter().zip(&v).map(|(a, b)| a * b.re).sum();
    }
    Ok(x)
}

/// `g = (√((1+x₉)/2)·u, (x₈ − x_iλ_i)u/√(2(1+x₉)))`, a preimage of `x` in the fibre labelled by `u`.
pub fn s8_inversion(x: &[f64; 9], u: &[f64; 8]) -> Result<[f64; 16]> {
    check_unit(x.iter().map(|v| v * v).sum::<f64>().sqrt())?;
    check_unit(u.iter().map(|v| v * v).sum::<f64>().sqrt())?;
    let d = 1.0 + x[8];
    if d <= UNIT_TOL {
        return Err(FuzzError::Singular("S⁸ inversion at x₉ = −1"));
    }
    let mut lower = [0.0; 8];
    for (k, l) in lower.iter_mut().enumerate() {
        *l = x[7] * u[k];
    }
    for i in 1..=7 {
        for (j, &uj) in u.iter().enumerate() {
            let (s, k) = octonion_product(i, j);
            lower[k] -= x[i - 1] * s * uj;
        }
    }
    let a = (d / 2.0).sqrt();
    let b = 1.0 / (2.0 * d).sqrt();
    let mut g = [0.0; 16];
    for k in 0..8 {
        g[k] = a * u[k];
        g[8 + k] = b * lower[k];
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::anticommutator;
    use rand::Rng;

    fn clifford_residual(g: &[Matrix]) -> f64 {
        let n = g[0].rows();
        let mut w = 0.0f64;
        for a in 0..g.len() {
            for b in 0..g.len() {
                let mut r = anticommutator(&g[a], &g[b]);
                if a == b {
                    r -= &Matrix::identity(n).scale(2.0);
                }
                w = w.max(r.max_abs());
            }
        }
        w
    }

    fn unit<const K: usize, R: Rng>(rng: &mut R) -> [f64; K] {
        let mut v = [0.0; K];
        for x in v.iter_mut() {
            *x = rng.gen_range(-1.0..1.0);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.map(|x| x / n)
    }

    #[test]
    fn clifford_algebras() {
        let g5 = gamma_so5();
        assert_eq!(clifford_residual(&g5), 0.0);
        let sum = g5.iter().fold(Matrix::zeros(4, 4), |acc, g| &acc + &(g * g));
        assert_eq!(sum, Matrix::identity(4).scale(5.0));
        let g9 = gamma_so9();
        assert_eq!(clifford_residual(&g9), 0.0);
        for g in g5.iter().chain(&g9) {
            assert_eq!(g.hermitian_residual(), 0.0);
        }
    }

    #[test]
    fn octonion_units() {
        for i in 1..=7 {
            let li = octonion_lambda(i).unwrap();
            assert_eq!(&li + &li.transpose(), Matrix::zeros(8, 8));
            for j in 1..=7 {
                let mut r = anticommutator(&li, &octonion_lambda(j).unwrap());
                if i == j {
                    r += &Matrix::identity(8).scale(2.0);
                }
                assert_eq!(r.max_abs(), 0.0, "{i} {j}");
            }
        }
        assert!(octonion_lambda(0).is_err());
    }

    #[test]
    fn hopf_images_are_unit() {
        let x = hopf_s4(&[C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)]).unwrap();
        assert!((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-15);
        let mut rng = crate::random::rng(8);
        for _ in 0..100 {
            let r: [f64; 8] = unit(&mut rng);
            let g = [0, 1, 2, 3].map(|k| C::new(r[2 * k], r[2 * k + 1]));
            let x = hopf_s4(&g).unwrap();
            assert!((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
            let ph = C::from_polar(1.0, 0.77);
            let y = hopf_s4(&g.map(|z| z * ph)).unwrap();
            assert!(x.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-14));

            let g: [f64; 16] = unit(&mut rng);
            let x = hopf_s8(&g).unwrap();
            assert!((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(hopf_s8(&[0.5; 16]).is_err());
    }

    #[test]
    fn s8_round_trip() {
        let mut rng = crate::random::rng(13);
        for _ in 0..100 {
            let x: [f64; 9] = unit(&mut rng);
            let u: [f64; 8] = unit(&mut rng);
            let g = s8_inversion(&x, &u).unwrap();
            let y = hopf_s8(&g).unwrap();
            assert!(x.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-12));
        }
        let mut south = [0.0; 9];
        south[8] = -1.0;
        let mut u = [0.0; 8];
        u[0] = 1.0;
        assert!(s8_inversion(&south, &u).is_err());
    }
}
