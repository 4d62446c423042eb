//! Truncated Taylor jets in `(θ, φ)` through third order.
//!
//! A jet stores the coefficients of `dθ^a dφ^b` for `a + b ≤ 3` around a base
//! point, plus the highest order still trustworthy; each derivative spends one.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C;

pub const MAX_ORDER: usize = 3;
const LEN: usize = 10;

/// Offset of the degree-`d` block; inside it the `dθ` power runs from `d` down to 0.
const fn slot(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [C; LEN],
    order: usize,
}

impl Jet {
    pub fn constant(v: C) -> Self {
        let mut c = [C::new(0.0, 0.0); LEN];
        c[0] = v;
        Jet { c, order: MAX_ORDER }
    }

    pub fn real(v: f64) -> Self {
        Self::constant(C::new(v, 0.0))
    }

    pub fn theta(theta: f64) -> Self {
        let mut j = Self::real(theta);
        j.c[slot(1, 0)] = C::new(1.0, 0.0);
        j
    }

    pub fn phi(phi: f64) -> Self {
        let mut j = Self::real(phi);
        j.c[slot(0, 1)] = C::new(1.0, 0.0);
        j
    }

    pub fn value(&self) -> C {
        self.c[0]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `∂^a_θ ∂^b_φ` at the base point.
    pub fn derivative(&self, a: usize, b: usize) -> Option<C> {
        if a + b > self.order {
            return None;
        }
        let fact = |n: usize| (1..=n).product::<usize>() as f64;
        Some(self.c[slot(a, b)] * fact(a) * fact(b))
    }

    pub fn scale(&self, s: C) -> Self {
        Jet { c: self.c.map(|z| z * s), order: self.order }
    }

    pub fn conj(&self) -> Self {
        Jet { c: self.c.map(|z| z.conj()), order: self.order }
    }

    fn d(&self, theta: bool) -> Self {
        let mut c = [C::new(0.0, 0.0); LEN];
        for deg in 0..MAX_ORDER {
            for b in 0..=deg {
                let a = deg - b;
                let (src, k) = if theta { (slot(a + 1, b), a + 1) } else { (slot(a, b + 1), b + 1) };
                c[slot(a, b)] = self.c[src] * k as f64;
            }
        }
        Jet { c, order: self.order.saturating_sub(1) }
    }

    pub fn d_theta(&self) -> Self {
        self.d(true)
    }

    pub fn d_phi(&self) -> Self {
        self.d(false)
    }

    /// `f(self)` from `[f, f′, f″, f‴]` evaluated at the base value.
    pub fn compose(&self, f: [C; 4]) -> Self {
        let mut delta = *self;
        delta.c[0] = C::new(0.0, 0.0);
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let mut out = Jet::constant(f[0]);
        out = out + delta.scale(f[1]) + d2.scale(f[2] * 0.5) + d3.scale(f[3] / 6.0);
        out.order = self.order;
        out
    }

    pub fn sin(&self) -> Self {
        let v = self.value();
        self.compose([v.sin(), v.cos(), -v.sin(), -v.cos()])
    }

    pub fn cos(&self) -> Self {
        let v = self.value();
        self.compose([v.cos(), -v.sin(), -v.cos(), v.sin()])
    }

    /// `e^{ik·self}`
    pub fn exp_i(&self, k: f64) -> Self {
        let i = C::new(0.0, 1.0);
        let e = (i * k * self.value()).exp();
        let ik = i * k;
        self.compose([e, ik * e, ik * ik * e, ik * ik * ik * e])
    }

    pub fn recip(&self) -> Self {
        let v = self.value();
        let r = 1.0 / v;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn powi(&self, n: usize) -> Self {
        (0..n).fold(Jet::real(1.0), |acc, _| acc * *self)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(o.c) {
            *x += y;
        }
        Jet { c, order: self.order.min(o.order) }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { c: self.c.map(|z| -z), order: self.order }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [C::new(0.0, 0.0); LEN];
        for d1 in 0..=MAX_ORDER {
            for b1 in 0..=d1 {
                let x = self.c[slot(d1 - b1, b1)];
                if x == C::new(0.0, 0.0) {
                    continue;
                }
                for d2 in 0..=(MAX_ORDER - d1) {
                    for b2 in 0..=d2 {
                        c[slot(d1 - b1 + d2 - b2, b1 + b2)] += x * o.c[slot(d2 - b2, b2)];
                    }
                }
            }
        }
        Jet { c, order: self.order.min(o.order) }
    }
}

impl Mul<C> for Jet {
    type Output = Jet;
    fn mul(self, s: C) -> Jet {
        self.scale(s)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(C::new(s, 0.0))
    }
}

/// Orthonormal `Y_lm` (Condon–Shortley phase) as a jet at `(θ, φ)`.
pub fn ylm_jet(l: usize, m: i64, theta: f64, phi: f64) -> Jet {
    let ma = m.unsigned_abs() as usize;
    if ma > l {
        return Jet::real(0.0);
    }
    let t = Jet::theta(theta);
    let x = t.cos();
    let s = t.sin();
    // P_m^m = (−1)^m (2m−1)!! sin^m θ
    let dfact: f64 = (1..=ma).map(|k| (2 * k - 1) as f64).product();
    let sign = if ma % 2 == 1 { -1.0 } else { 1.0 };
    let mut p_prev = s.powi(ma) * (sign * dfact);
    let mut p = p_prev;
    if l > ma {
        let mut p_cur = x * p_prev * (2 * ma + 1) as f64;
        for ll in (ma + 2)..=l {
            let next = (x * p_cur * (2 * ll - 1) as f64 - p_prev * (ll + ma - 1) as f64) * (1.0 / (ll - ma) as f64);
            p_prev = p_cur;
            p_cur = next;
        }
        p = p_cur;
    }
    let ratio: f64 = ((l - ma + 1)..=(l + ma)).map(|k| k as f64).product();
    let norm = ((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI) / ratio).sqrt();
    let y = p * Jet::phi(phi).exp_i(ma as f64) * norm;
    if m >= 0 {
        y
    } else {
        let cs = if ma % 2 == 1 { -1.0 } else { 1.0 };
        y.conj() * cs
    }
}
