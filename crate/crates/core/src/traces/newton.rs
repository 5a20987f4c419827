use crate::error::{Error, Result};

/// Power sums `p_m = Σ_r x_r^m`, `m = 1..=n_max`, of the roots of the
/// polynomial with ascending coefficients `coeffs`, by Newton's identities.
///
/// No roots are extracted. The leading (last) coefficient must be nonzero.
pub fn newton_power_sums(coeffs: &[f64], n_max: usize) -> Result<Vec<f64>> {
    let lead = match coeffs.last() {
        Some(&c) if c != 0.0 => c,
        _ => return Err(Error::DegeneratePolynomial),
    };
    let d = coeffs.len() - 1;
    // e[i] = c_{d-i}/c_d, the monic coefficient of x^{d-i}
    let e: Vec<f64> = (0..=d).map(|i| coeffs[d - i] / lead).collect();
    let mut p = vec![0.0; n_max + 1];
    for m in 1..=n_max {
        let mut acc = if m <= d { -(m as f64) * e[m] } else { 0.0 };
        for i in 1..m.min(d + 1) {
            acc -= e[i] * p[m - i];
        }
        p[m] = acc;
    }
    p.remove(0);
    Ok(p)
}
