//! Truncated Taylor series `Σ_{k≤K} c_k (x − x₀)^k` for exact high-order
//! derivatives of compositions.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    c: Vec<f64>,
}

impl Jet {
    pub fn constant(v: f64, degree: usize) -> Self {
        let mut c = vec![0.0; degree + 1];
        c[0] = v;
        Self { c }
    }

    /// `x₀ + slope·(x − x₀)`.
    pub fn linear(value: f64, slope: f64, degree: usize) -> Self {
        let mut c = vec![0.0; degree + 1];
        c[0] = value;
        if degree > 0 {
            c[1] = slope;
        }
        Self { c }
    }

    pub fn from_coefficients(c: Vec<f64>) -> Self {
        assert!(!c.is_empty());
        Self { c }
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `k`-th derivative at `x₀`.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.c[k] * fact
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.c.len();
        let mut r = vec![0.0; n];
        r[0] = 1.0 / self.c[0];
        for k in 1..n {
            let s: f64 = (1..=k).map(|i| self.c[i] * r[k - i]).sum();
            r[k] = -s * r[0];
        }
        Self { c: r }
    }

    pub fn exp(&self) -> Self {
        let n = self.c.len();
        let mut e = vec![0.0; n];
        e[0] = self.c[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|i| i as f64 * self.c[i] * e[k - i]).sum();
            e[k] = s / k as f64;
        }
        Self { c: e }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.c.len().min(rhs.c.len());
        let c = (0..n)
            .map(|k| (0..=k).map(|i| self.c[i] * rhs.c[k - i]).sum())
            .collect();
        Jet { c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_identity_has_all_derivatives_equal() {
        let x = Jet::linear(0.3, 1.0, 10);
        let e = x.exp();
        for k in 0..=10 {
            assert!((e.derivative(k) - 0.3f64.exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn reciprocal_derivatives() {
        // d^k/dx^k 1/x = (−1)^k k! / x^{k+1}
        let x0 = 1.7;
        let r = Jet::linear(x0, 1.0, 8).recip();
        for k in 0..=8 {
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            let exact = (-1f64).powi(k as i32) * fact / x0.powi(k as i32 + 1);
            assert!((r.derivative(k) - exact).abs() < 1e-13 * exact.abs());
        }
    }

    #[test]
    fn product_rule() {
        let x = Jet::linear(0.5, 1.0, 6);
        let p = &x * &x.exp();
        // (x e^x)'' = (x + 2) e^x
        assert!((p.derivative(2) - 2.5 * 0.5f64.exp()).abs() < 1e-14);
    }
}
