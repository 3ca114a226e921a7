//! Truncated complex power series `sum_{j<n} c_j W^j`, stored as coefficient slices.

use num_complex::Complex64;

use crate::sum::CompensatedSum;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Cauchy product truncated to `n` coefficients.
pub fn mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai == ZERO {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `exp(g)` to `n` coefficients via `j c_j = sum_{m=1}^j m g_m c_{j-m}`.
pub fn exp(g: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut c = vec![ZERO; n];
    if n == 0 {
        return c;
    }
    let g0 = g.first().copied().unwrap_or(ZERO);
    c[0] = g0.exp();
    let nz: Vec<(usize, Complex64)> = g
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, v)| **v != ZERO)
        .map(|(m, &v)| (m, v * m as f64))
        .collect();
    for j in 1..n {
        let mut acc = CompensatedSum::new();
        for &(m, mg) in &nz {
            if m > j {
                break;
            }
            acc.add(mg * c[j - m]);
        }
        c[j] = acc.value() / j as f64;
    }
    c
}

/// Principal `ln(g)` to `n` coefficients; `g_0` must be nonzero.
pub fn ln(g: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut h = vec![ZERO; n];
    if n == 0 {
        return h;
    }
    let g0 = g[0];
    h[0] = g0.ln();
    let at = |k: usize| g.get(k).copied().unwrap_or(ZERO);
    for j in 1..n {
        let mut acc = CompensatedSum::new();
        for m in 1..j {
            acc.add(h[m] * at(j - m) * m as f64);
        }
        h[j] = (at(j) - acc.value() / j as f64) / g0;
    }
    h
}

/// `g^k` to `n` coefficients by binary powering.
pub fn pow_int(g: &[Complex64], mut k: u64, n: usize) -> Vec<Complex64> {
    let mut result = vec![ZERO; n];
    if n == 0 {
        return result;
    }
    result[0] = Complex64::new(1.0, 0.0);
    let mut base: Vec<Complex64> = g.iter().copied().take(n).collect();
    base.resize(n, ZERO);
    while k > 0 {
        if k & 1 == 1 {
            result = mul(&result, &base, n);
        }
        k >>= 1;
        if k > 0 {
            base = mul(&base, &base, n);
        }
    }
    result
}

pub fn derivative(c: &[Complex64]) -> Vec<Complex64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(j, &v)| v * j as f64)
        .collect()
}

/// Horner evaluation.
pub fn eval(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(ZERO, |acc, &v| acc * z + v)
}
