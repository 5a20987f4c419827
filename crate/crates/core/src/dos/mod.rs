//! Densities of states for `s = 2(cos x + λ̃ cos y)` with `x, y` uniform, and
//! the moment identities they satisfy.
//!
//! For `λ̃ = 1` the density is `K(1 − s²/16) / (2π²)`. Otherwise it is the
//! convolution of the arcsine laws on `[−2, 2]` and `[−2λ̃, 2λ̃]`, which has
//! logarithmic singularities at `s = ±2|λ̃ − 1|`.

pub mod elliptic;
pub mod quadrature;

pub use elliptic::{agm, elliptic_k};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flux::{central_moment, Coupling, Flux};
use crate::kreft::chambers_recursive;
use crate::traces::{midband_trace, pm_s_coefficients};
use quadrature::{gauss_kronrod, tanh_sinh};

/// Default number of tanh-sinh abscissae per panel in [`integrate_point_traces`].
pub const DEFAULT_POINT_TRACE_NODES: usize = 128;

/// Density of `s = 2(cos x + λ̃ cos y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityProfile {
    lambda_tilde: f64,
}

impl DensityProfile {
    /// The undeformed lattice density (`λ̃ = 1`).
    pub fn free() -> Self {
        DensityProfile { lambda_tilde: 1.0 }
    }

    pub fn new(lambda_tilde: f64) -> Result<Self> {
        if lambda_tilde.is_nan() || lambda_tilde <= 0.0 || lambda_tilde.is_infinite() {
            return Err(Error::DomainError {
                function: "DensityProfile::new",
                value: lambda_tilde,
            });
        }
        Ok(DensityProfile { lambda_tilde })
    }

    pub fn lambda_tilde(&self) -> f64 {
        self.lambda_tilde
    }

    /// `2(1 + λ̃)`; the density vanishes outside `[−w, w]`.
    pub fn support_half_width(&self) -> f64 {
        2.0 * (1.0 + self.lambda_tilde)
    }

    /// Interior point where the density has a logarithmic singularity,
    /// `2|λ̃ − 1|` (zero for the free density).
    pub fn breakpoint(&self) -> f64 {
        2.0 * (self.lambda_tilde - 1.0).abs()
    }

    pub fn density(&self, s: f64) -> f64 {
        if self.lambda_tilde == 1.0 {
            rho_free(s)
        } else {
            convolution_density(s, self.lambda_tilde)
        }
    }
}

/// Free lattice density `K(1 − s²/16) / (2π²)`; `+∞` at `s = 0`, zero for
/// `|s| > 4`.
pub fn rho_free(s: f64) -> f64 {
    let a = s.abs();
    if a > 4.0 {
        return 0.0;
    }
    if a == 0.0 {
        return f64::INFINITY;
    }
    // K(1 − s²/16) = π / (2 agm(1, |s|/4)), avoiding the cancellation in 1 − m
    1.0 / (4.0 * PI * agm(1.0, a / 4.0))
}

/// Deformed density for `λ̃ > 0`; delegates to [`rho_free`] at `λ̃ = 1`.
pub fn rho_lambda(s: f64, lambda_tilde: f64) -> Result<f64> {
    Ok(DensityProfile::new(lambda_tilde)?.density(s))
}

/// The integration window `[lo, hi]` of the convolution at `s ≥ 0` and the two
/// outer roots `r1 ≤ lo`, `r4 ≥ hi` of `(4 − (s − t)²)(4λ̃² − t²)`.
fn convolution_window(s: f64, lt: f64) -> Option<(f64, f64, f64, f64)> {
    let edge = 2.0 * (1.0 + lt);
    let inner = 2.0 * (lt - 1.0).abs();
    if s > edge {
        return None;
    }
    let w = if lt > 1.0 {
        if s <= inner {
            // [s − 2, s + 2] ⊂ [−2λ̃, 2λ̃]
            (-2.0 * lt, s - 2.0, s + 2.0, 2.0 * lt)
        } else {
            (-2.0 * lt, s - 2.0, 2.0 * lt, s + 2.0)
        }
    } else if s <= inner {
        // [−2λ̃, 2λ̃] ⊂ [s − 2, s + 2]
        (s - 2.0, -2.0 * lt, 2.0 * lt, s + 2.0)
    } else {
        (-2.0 * lt, s - 2.0, 2.0 * lt, s + 2.0)
    };
    Some(w)
}

fn convolution_density(s: f64, lt: f64) -> f64 {
    let s = s.abs();
    let Some((r1, lo, hi, r4)) = convolution_window(s, lt) else {
        return 0.0;
    };
    let gap_lo = lo - r1;
    let gap_hi = r4 - hi;
    if gap_lo == 0.0 || gap_hi == 0.0 {
        return f64::INFINITY;
    }
    let h = 0.5 * (hi - lo);
    if h <= 0.0 {
        return 1.0 / (PI * (gap_lo * gap_hi).sqrt());
    }
    // t = lo + 2h sin²(ψ/2) turns dt / √((t − lo)(hi − t)) into dψ
    let integrand = |psi: f64| {
        let (sn, cs) = (0.5 * psi).sin_cos();
        let a = gap_lo + 2.0 * h * sn * sn;
        let b = gap_hi + 2.0 * h * cs * cs;
        1.0 / (a * b).sqrt()
    };
    let r = gauss_kronrod(integrand, 0.0, PI, 1e-300, 1e-12, 400);
    r.value / (PI * PI)
}

fn integrate_even<F: Fn(f64) -> f64 + Copy>(profile: &DensityProfile, f: F) -> f64 {
    let edge = profile.support_half_width();
    let b = profile.breakpoint();
    // a node rounded onto the breakpoint contributes v·log v → 0
    let g = |s: f64| {
        let d = profile.density(s);
        if d.is_finite() {
            f(s) * d
        } else {
            0.0
        }
    };
    let mut total = 0.0;
    // s = b ∓ w v² absorbs the logarithmic singularity at the breakpoint
    if b > 0.0 {
        let r = gauss_kronrod(
            |v: f64| 2.0 * b * v * g(b - b * v * v),
            0.0,
            1.0,
            1e-12,
            1e-13,
            2000,
        );
        total += r.value;
    }
    let w = edge - b;
    let r = gauss_kronrod(
        |v: f64| 2.0 * w * v * g(b + w * v * v),
        0.0,
        1.0,
        1e-12,
        1e-13,
        2000,
    );
    total += r.value;
    2.0 * total
}

/// `∫ s^{2k} ρ(s) ds` by adaptive quadrature, split at the logarithmic
/// singularities.
pub fn moment(profile: &DensityProfile, k: u32) -> f64 {
    integrate_even(profile, move |s: f64| s.powi(2 * k as i32))
}

/// Exact even moment `binom(2k,k) Σ_j binom(k,j)² λ̃^{2j}`.
pub fn exact_moment_lambda(k: u32, lambda_tilde: f64) -> f64 {
    central_moment(k, lambda_tilde)
}

/// Recovers the full trace `Tr Hⁿ` by integrating the `±s` trace against the
/// density of `s`, using a tanh-sinh rule with `nodes` abscissae on each of
/// the panels between singular points (clamped to
/// [`quadrature::TANH_SINH_MIN_NODES`]).
///
/// When `q > n/2` the `±s` trace is constant in `s` and the result is the
/// mid-band trace times the numerical normalization of the density.
pub fn integrate_point_traces(flux: Flux, coupling: Coupling, n: u32, nodes: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let poly = chambers_recursive(flux, coupling);
    let profile = DensityProfile::new(coupling.lambda_tilde(flux.q()))
        .expect("λ̃ of a valid coupling is positive");
    let coeffs = pm_s_coefficients(&poly, n);
    let edge = profile.support_half_width();
    let b = profile.breakpoint();

    let panels: Vec<(f64, f64)> = if b > 0.0 {
        vec![(0.0, b), (b, edge)]
    } else {
        vec![(0.0, edge)]
    };
    let integrate = |f: &dyn Fn(f64) -> f64| -> f64 {
        2.0 * panels
            .iter()
            .map(|&(lo, hi)| tanh_sinh(|s| f(s) * profile.density(s), lo, hi, nodes))
            .sum::<f64>()
    };

    if coeffs.len() == 1 {
        return midband_trace(&poly, n) * integrate(&|_| 1.0);
    }
    integrate(&|s: f64| {
        let s2 = s * s;
        coeffs.iter().rev().fold(0.0, |acc, c| acc * s2 + c)
    })
}

/// Same closure identity with the integral replaced by exact moments:
/// `Σ_k c_k M_{2k}` where `Tr_{±s} Hⁿ = Σ_k c_k s^{2k}`.
pub fn integrate_point_traces_exact(flux: Flux, coupling: Coupling, n: u32) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let poly = chambers_recursive(flux, coupling);
    let lt = coupling.lambda_tilde(flux.q());
    pm_s_coefficients(&poly, n)
        .iter()
        .enumerate()
        .map(|(k, c)| c * exact_moment_lambda(k as u32, lt))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::{binomial, make_flux};
    use crate::traces::{almost_mathieu_trace, hofstadter_trace};
    use num_traits::ToPrimitive;

    fn closed_form(s: f64, lt: f64) -> f64 {
        let (r1, r2, r3, r4) = convolution_window(s.abs(), lt).unwrap();
        let m = (r3 - r2) * (r4 - r1) / ((r4 - r2) * (r3 - r1));
        2.0 * elliptic_k(m).unwrap() / ((r4 - r2) * (r3 - r1)).sqrt() / (PI * PI)
    }

    #[test]
    fn free_density_values() {
        assert!((rho_free(4.0) - 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert!((rho_free(-4.0) - 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert_eq!(rho_free(0.0), f64::INFINITY);
        assert_eq!(rho_free(4.0 + 1e-12), 0.0);
        for s in [0.1, 1.0, 2.5, 3.9] {
            let want = elliptic_k(1.0 - s * s / 16.0).unwrap() / (2.0 * PI * PI);
            assert!((rho_free(s) - want).abs() < 1e-13 * want);
            assert_eq!(rho_free(s), rho_free(-s));
        }
    }

    #[test]
    fn free_moments() {
        let p = DensityProfile::free();
        for k in 0..=6u32 {
            let b = binomial(2 * k as u64, k as u64).to_f64().unwrap();
            let m = moment(&p, k);
            assert!((m - b * b).abs() <= 1e-5 * (b * b), "k={k}: {m}");
        }
    }

    #[test]
    fn deformed_moment_examples() {
        assert_eq!(exact_moment_lambda(0, 0.3), 1.0);
        assert_eq!(exact_moment_lambda(1, 1.0), 4.0);
        assert!((exact_moment_lambda(2, 0.5) - 12.375).abs() < 1e-14);
        for lt in [0.25, 0.5, 2.0, 4.0] {
            let m = moment(&DensityProfile::new(lt).unwrap(), 1);
            assert!((m - (2.0 + 2.0 * lt * lt)).abs() < 1e-6 * m, "λ̃={lt}: {m}");
        }
    }

    #[test]
    fn deformed_moments_match_exact() {
        for lt in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let p = DensityProfile::new(lt).unwrap();
            for k in 0..=6u32 {
                let exact = exact_moment_lambda(k, lt);
                let m = moment(&p, k);
                assert!(
                    (m - exact).abs() <= 1e-5 * exact,
                    "λ̃={lt} k={k}: {m} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn small_lambda_tends_to_arcsine() {
        let p = DensityProfile::new(1e-3).unwrap();
        for k in 0..=4u32 {
            let b = binomial(2 * k as u64, k as u64).to_f64().unwrap();
            assert!((moment(&p, k) - b).abs() < 1e-3 * b);
        }
    }

    #[test]
    fn deformed_density_matches_elliptic_closed_form() {
        for lt in [0.25, 0.5, 0.9, 1.3, 2.0, 4.0] {
            let edge = 2.0 * (1.0 + lt);
            for i in 0..40 {
                let s = edge * (i as f64 + 0.37) / 40.0;
                if (s - 2.0 * (lt - 1.0f64).abs()).abs() < 1e-9 {
                    continue;
                }
                let got = rho_lambda(s, lt).unwrap();
                let want = closed_form(s, lt);
                assert!(
                    (got - want).abs() <= 1e-9 * want,
                    "λ̃={lt} s={s}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn deformed_density_shape() {
        for lt in [0.25, 0.7, 1.0, 1.5, 3.0] {
            let edge = 2.0 * (1.0 + lt);
            assert_eq!(rho_lambda(edge + 1e-9, lt).unwrap(), 0.0);
            assert_eq!(rho_lambda(-edge - 1.0, lt).unwrap(), 0.0);
            for s in [0.3, 1.1, 2.9] {
                let v = rho_lambda(s, lt).unwrap();
                assert!(v >= 0.0);
                assert_eq!(v, rho_lambda(-s, lt).unwrap());
            }
        }
        assert_eq!(rho_lambda(1.7, 1.0).unwrap(), rho_free(1.7));
        assert!(rho_lambda(1.0, 0.0).is_err());
        assert!(rho_lambda(1.0, -1.0).is_err());
    }

    #[test]
    fn continuity_at_case_boundaries() {
        for lt in [0.25, 0.5, 2.0, 4.0] {
            let edge = 2.0 * (1.0 + lt);
            let eps = 1e-9;
            // the outer edge is a jump discontinuity only in the derivative
            let below = rho_lambda(edge - eps, lt).unwrap();
            let at = rho_lambda(edge, lt).unwrap();
            assert!((below - at).abs() < 1e-6, "λ̃={lt}: {below} vs {at}");
            // at the inner breakpoint both sides diverge together
            let b = 2.0 * (lt - 1.0f64).abs();
            let left = rho_lambda(b - eps, lt).unwrap();
            let right = rho_lambda(b + eps, lt).unwrap();
            assert!(
                (left - right).abs() < 1e-6 * left.max(right),
                "λ̃={lt}: {left} vs {right}"
            );
            assert_eq!(rho_lambda(b, lt).unwrap(), f64::INFINITY);
        }
    }

    #[test]
    fn point_trace_examples() {
        let one_third = make_flux(1, 3).unwrap();
        let v = integrate_point_traces(
            one_third,
            Coupling::HOFSTADTER,
            4,
            DEFAULT_POINT_TRACE_NODES,
        );
        assert!((v - 24.0).abs() < 1e-5, "{v}");

        let fifth = make_flux(1, 5).unwrap();
        let poly = chambers_recursive(fifth, Coupling::HOFSTADTER);
        let v = integrate_point_traces(fifth, Coupling::HOFSTADTER, 4, DEFAULT_POINT_TRACE_NODES);
        assert!((v - midband_trace(&poly, 4)).abs() < 1e-6 * v, "{v}");

        let half = make_flux(1, 2).unwrap();
        let c = Coupling::new(1.0).unwrap();
        let v = integrate_point_traces(half, c, 2, DEFAULT_POINT_TRACE_NODES);
        assert!((v - 2.5).abs() < 1e-5, "{v}");
        assert_eq!(integrate_point_traces(half, c, 3, 64), 0.0);
    }

    #[test]
    fn exact_point_trace_path() {
        for (p, q) in [(0, 1), (1, 2), (1, 3), (2, 5), (1, 6)] {
            let f = make_flux(p, q).unwrap();
            for l in [1.0, 2.0, 3.0] {
                let c = Coupling::new(l).unwrap();
                for n in (0..=12).step_by(2) {
                    let want = almost_mathieu_trace(f, c, n);
                    let got = integrate_point_traces_exact(f, c, n);
                    assert!(
                        (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                        "{f} λ={l} n={n}"
                    );
                }
            }
            let h = hofstadter_trace(f, 8);
            assert!(
                (integrate_point_traces_exact(f, Coupling::HOFSTADTER, 8) - h).abs() < 1e-12 * h
            );
        }
    }
}
