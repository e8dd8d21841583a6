//! Special functions: factorials, Laguerre and Legendre polynomials,
//! spherical harmonics (Condon-Shortley phase), Wigner 3j and Gaunt
//! coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Generalised Laguerre polynomial L_k^(alpha)(x) by three-term recurrence.
pub fn laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Legendre function P_l^m(x) for m >= 0, including the
/// Condon-Shortley phase (-1)^m.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let mut pmm = 1.0;
    if m > 0 {
        let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= -fact * s;
            fact += 2.0;
        }
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = (x * (2 * ll - 1) as f64 * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

/// Spherical harmonic Y_l^m(theta, phi), orthonormal on the sphere.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs();
    if am > l {
        return Complex64::new(0.0, 0.0);
    }
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - am) / factorial(l + am)).sqrt();
    let base = norm * assoc_legendre(l, am, theta.cos());
    let y = Complex64::from_polar(base, am as f64 * phi);
    if m >= 0 {
        y
    } else {
        let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
        y.conj() * sign
    }
}

/// Wigner 3j symbol via the Racah formula.
pub fn wigner_3j(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if m1 + m2 + m3 != 0 {
        return 0.0;
    }
    if j3 < (j1 - j2).abs() || j3 > j1 + j2 {
        return 0.0;
    }
    if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    let f = |n: i32| factorial(n as u32);
    let triangle = f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3) / f(j1 + j2 + j3 + 1);
    let pref = (triangle * f(j1 + m1) * f(j1 - m1) * f(j2 + m2) * f(j2 - m2) * f(j3 + m3) * f(j3 - m3)).sqrt();
    let kmin = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let kmax = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let denom =
            f(k) * f(j1 + j2 - j3 - k) * f(j1 - m1 - k) * f(j2 + m2 - k) * f(j3 - j2 + m1 + k) * f(j3 - j1 - m2 + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    let phase = if (j1 - j2 - m3).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * pref * sum
}

/// Gaunt coefficient: the integral over the sphere of
/// Y_{l1}^{m1} Y_{l2}^{m2} Y_{l3}^{m3} (no conjugations).
pub fn gaunt(l1: i32, m1: i32, l2: i32, m2: i32, l3: i32, m3: i32) -> f64 {
    let pref = ((2 * l1 + 1) as f64 * (2 * l2 + 1) as f64 * (2 * l3 + 1) as f64 / (4.0 * PI)).sqrt();
    pref * wigner_3j(l1, l2, l3, 0, 0, 0) * wigner_3j(l1, l2, l3, m1, m2, m3)
}

/// Integral over the sphere of conj(Y_{l1}^{m1}) Y_{l2}^{m2} Y_{l3}^{m3}.
pub fn gaunt_conj(l1: i32, m1: i32, l2: i32, m2: i32, l3: i32, m3: i32) -> f64 {
    // conj(Y_l^m) = (-1)^m Y_l^{-m}
    let sign = if m1.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * gaunt(l1, -m1, l2, m2, l3, m3)
}
