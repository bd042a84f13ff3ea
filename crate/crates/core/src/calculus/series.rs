//! Truncated power-series arithmetic. All inputs and outputs have the same length.

pub(crate) fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    (0..n)
        .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
        .collect()
}

/// `1/a`, requiring `a_0 ≠ 0`.
pub(crate) fn recip(a: &[f64]) -> Option<Vec<f64>> {
    if a[0] == 0.0 {
        return None;
    }
    let mut b = vec![0.0; a.len()];
    b[0] = 1.0 / a[0];
    for k in 1..a.len() {
        let s: f64 = (1..=k).map(|j| a[j] * b[k - j]).sum();
        b[k] = -s / a[0];
    }
    Some(b)
}

/// `exp(a)` from `b' = a' b`.
pub(crate) fn exp(a: &[f64]) -> Vec<f64> {
    let mut b = vec![0.0; a.len()];
    b[0] = a[0].exp();
    for k in 1..a.len() {
        let s: f64 = (1..=k).map(|j| j as f64 * a[j] * b[k - j]).sum();
        b[k] = s / k as f64;
    }
    b
}

/// `(sin a, cos a)` from the coupled system `s' = a' c`, `c' = -a' s`.
pub(crate) fn sin_cos(a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut s = vec![0.0; n];
    let mut c = vec![0.0; n];
    s[0] = a[0].sin();
    c[0] = a[0].cos();
    for k in 1..n {
        let (mut ss, mut cc) = (0.0, 0.0);
        for j in 1..=k {
            let ja = j as f64 * a[j];
            ss += ja * c[k - j];
            cc += ja * s[k - j];
        }
        s[k] = ss / k as f64;
        c[k] = -cc / k as f64;
    }
    (s, c)
}

/// Integer power by repeated squaring; negative powers need `a_0 ≠ 0`.
pub(crate) fn powi(a: &[f64], n: i32) -> Option<Vec<f64>> {
    let mut base = if n < 0 { recip(a)? } else { a.to_vec() };
    let mut e = n.unsigned_abs();
    let mut acc = vec![0.0; a.len()];
    acc[0] = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    Some(acc)
}
