//! Complete elliptic integral of the first kind, parameter convention:
//! `K(m) = ∫₀^{π/2} dθ / √(1 − m sin²θ)`.

use crate::error::{Error, Result};

/// Arithmetic-geometric mean of two nonnegative numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 2.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// `K(m)` by the AGM: `K(m) = π / (2 agm(1, √(1 − m)))`. Valid for all `m < 1`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if m.is_nan() || m >= 1.0 {
        return Err(Error::DomainError {
            function: "elliptic_k",
            value: m,
        });
    }
    Ok(std::f64::consts::FRAC_PI_2 / agm(1.0, (1.0 - m).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dos::quadrature::gauss_kronrod;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn k_at_zero() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn k_rejects_m_at_or_above_one() {
        assert!(matches!(elliptic_k(1.0), Err(Error::DomainError { .. })));
        assert!(elliptic_k(1.5).is_err());
        assert!(elliptic_k(f64::NAN).is_err());
    }

    #[test]
    fn k_matches_defining_integral() {
        for m in [0.0, 0.3, 0.9, 0.99, -2.0] {
            let direct = gauss_kronrod(
                |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(),
                0.0,
                FRAC_PI_2,
                1e-14,
                1e-14,
                200,
            );
            let k = elliptic_k(m).unwrap();
            assert!(
                (k - direct.value).abs() <= 1e-10 * k,
                "m={m}: {k} vs {}",
                direct.value
            );
        }
    }

    #[test]
    fn k_series_in_sixteen_x() {
        // (2/π) K(16x) = 1 + 4x + 36x² + 400x³ + ...
        let x = 1e-6;
        let v = 2.0 / PI * elliptic_k(16.0 * x).unwrap();
        let first = (v - 1.0) / x;
        assert!((first - 4.0).abs() < 1e-3, "{first}");
        let second = (v - 1.0 - 4.0 * x) / (x * x);
        assert!((second - 36.0).abs() < 0.5, "{second}");
    }

    #[test]
    fn agm_known_value() {
        // Gauss's constant: 1 / agm(1, √2)
        assert!((1.0 / agm(1.0, 2f64.sqrt()) - 0.834_626_841_674_073_2).abs() < 1e-15);
    }
}
