//! Dense real polynomials in ascending-coefficient form.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polynomial {
    /// `coeffs[k]` multiplies `x^k`.
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == 0.0 {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::constant(0.0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(0.0);
        c.extend(self.coeffs.iter().enumerate().map(|(k, &a)| a / (k + 1) as f64));
        Self::new(c)
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let p = self.antiderivative();
        p.eval(b) - p.eval(a)
    }

    /// Sum of coefficients, i.e. the value at one.
    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// Least-squares fit of the given degree, solved by Householder QR on
    /// the Vandermonde matrix.
    pub fn fit(xs: &[f64], ys: &[f64], degree: usize) -> Option<Self> {
        let m = xs.len();
        let n = degree + 1;
        if m != ys.len() || m < n {
            return None;
        }
        let mut a: Vec<Vec<f64>> = xs.iter().map(|&x| (0..n).map(|k| x.powi(k as i32)).collect()).collect();
        let mut b = ys.to_vec();
        for j in 0..n {
            let norm = (j..m).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
            if norm == 0.0 {
                return None;
            }
            let alpha = if a[j][j] > 0.0 { -norm } else { norm };
            let mut v: Vec<f64> = (j..m).map(|i| a[i][j]).collect();
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|x| x * x).sum();
            if vnorm2 == 0.0 {
                continue;
            }
            for col in j..n {
                let dot: f64 = (j..m).map(|i| v[i - j] * a[i][col]).sum();
                let f = 2.0 * dot / vnorm2;
                for i in j..m {
                    a[i][col] -= f * v[i - j];
                }
            }
            let dot: f64 = (j..m).map(|i| v[i - j] * b[i]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in j..m {
                b[i] -= f * v[i - j];
            }
        }
        let mut c = vec![0.0; n];
        for j in (0..n).rev() {
            let s: f64 = ((j + 1)..n).map(|k| a[j][k] * c[k]).sum();
            if a[j][j] == 0.0 {
                return None;
            }
            c[j] = (b[j] - s) / a[j][j];
        }
        Some(Self::new(c))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Self) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + rhs.coeffs.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Self) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&0.0) - rhs.coeffs.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Self) -> Polynomial {
        let mut c = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }
}
