//! Truncated formal power series in `z`, stored as ascending coefficient
//! vectors of a fixed length.

pub(crate) fn truncate(mut a: Vec<f64>, len: usize) -> Vec<f64> {
    a.resize(len, 0.0);
    a
}

pub(crate) fn mul(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `a / b`; `b[0]` must be nonzero.
pub(crate) fn div(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for n in 0..len {
        let mut acc = a.get(n).copied().unwrap_or(0.0);
        for i in 1..=n.min(b.len().saturating_sub(1)) {
            acc -= b[i] * out[n - i];
        }
        out[n] = acc / b[0];
    }
    out
}

/// `z·a'(z)`.
pub(crate) fn z_derivative(a: &[f64]) -> Vec<f64> {
    a.iter().enumerate().map(|(i, &x)| i as f64 * x).collect()
}

/// `z^shift · a(z)`.
pub(crate) fn shift(a: &[f64], shift: usize, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, &x) in a.iter().enumerate() {
        if i + shift < len {
            out[i + shift] = x;
        }
    }
    out
}

/// `Σ_k coeff(k) · x(z)^k` for a series `x` with `x(0) = 0`.
pub(crate) fn compose(coeff: impl Fn(usize) -> f64, x: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    let mut power = vec![0.0; len];
    if len > 0 {
        power[0] = 1.0;
    }
    let mut k = 0;
    while power.iter().any(|&c| c != 0.0) {
        let c = coeff(k);
        for (o, &p) in out.iter_mut().zip(&power) {
            *o += c * p;
        }
        power = mul(&power, x, len);
        k += 1;
    }
    out
}
