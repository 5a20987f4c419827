//! Closed-form spectral traces as partition sums over Kreft coefficients, and
//! their generating functions.
//!
//! Every trace here has the shape
//!
//! ```text
//! (n/q) Σ_{k, ℓ : qk + Σ j·ℓ_j = n/2} w(k, ℓ) · c(k) · Π_j a(2j)^{ℓ_j}
//! ```
//!
//! where `w` is the multinomial weight from [`crate::flux`] and `c(k)` depends
//! on the kind of trace: `δ_{k0}` for the mid-band trace, `s^{2k}` for the
//! `±s` point-spectrum trace, `binom(2k,k)²` for the Hofstadter trace and the
//! `λ`-deformed moment for the almost Mathieu trace.
//!
//! Traces of odd order are zero for every kind.

mod newton;
mod series;

pub use newton::newton_power_sums;

use num_traits::ToPrimitive;

use crate::flux::{
    binomial, central_moment, enumerate_partition_terms, multinomial_weight, Coupling, Flux,
};
use crate::kreft::{chambers_recursive, ChambersPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceKind {
    /// Average of `E^n` over the `q` roots of `E^q b(1/E) = 0`.
    MidBand,
    /// Average of `E^n` over the `2q` roots of `E^q b(1/E) = ±s`.
    PlusMinusS,
    /// Full quantum trace, integrated over the Brillouin zone.
    FullQuantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    PartitionSum,
    Series,
    NewtonPowerSum,
    Oracle,
}

/// One computed trace value and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub flux: Flux,
    pub lambda: f64,
    pub n: u32,
    pub s: Option<f64>,
    pub kind: TraceKind,
    pub value: f64,
    pub method: Method,
}

fn partition_sum(
    poly: &ChambersPolynomial,
    n: u32,
    allow_k: bool,
    central: impl Fn(u32) -> f64,
) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    if n == 0 {
        return 1.0;
    }
    let q = poly.q();
    let a = poly.coefficients();
    let mut acc = 0.0;
    for term in enumerate_partition_terms(n / 2, q, allow_k) {
        let w = multinomial_weight(&term)
            .expect("terms for n > 0 are never empty")
            .to_f64();
        let mut prod = 1.0;
        for (j, &l) in term.ell.iter().enumerate() {
            for _ in 0..l {
                prod *= a[j + 1];
            }
        }
        acc += w * central(term.k) * prod;
    }
    acc * (n as f64 / q as f64)
}

fn central_binomial_squared(k: u32) -> f64 {
    let b = binomial(2 * k as u64, k as u64);
    (&b * &b).to_f64().unwrap_or(f64::INFINITY)
}

/// Mid-band trace `Tr₀ Hⁿ`: only `k = 0` terms.
pub fn midband_trace(poly: &ChambersPolynomial, n: u32) -> f64 {
    partition_sum(poly, n, false, |_| 1.0)
}

/// `±s` point-spectrum trace `Tr_{±s} Hⁿ`.
///
/// Outside `|s| ≤ 2(1 + (λ/2)^q)` no momentum realizes `s`, but the value is
/// still the polynomial continuation; a warning is logged.
pub fn pm_s_trace(poly: &ChambersPolynomial, n: u32, s: f64) -> f64 {
    if s.abs() > poly.s_range() {
        log::warn!(
            "s = {s} is outside the spectral range ±{} for flux {}",
            poly.s_range(),
            poly.flux()
        );
    }
    let s2 = s * s;
    partition_sum(poly, n, true, |k| {
        let mut acc = 1.0;
        for _ in 0..k {
            acc *= s2;
        }
        acc
    })
}

/// Coefficients `c_k` with `Tr_{±s} Hⁿ = Σ_k c_k s^{2k}`.
///
/// Odd `n` gives `[0.0]`, `n = 0` gives `[1.0]`.
pub fn pm_s_coefficients(poly: &ChambersPolynomial, n: u32) -> Vec<f64> {
    if n % 2 == 1 {
        return vec![0.0];
    }
    if n == 0 {
        return vec![1.0];
    }
    let q = poly.q();
    let a = poly.coefficients();
    let mut c = vec![0.0; (n as u64 / 2 / q) as usize + 1];
    for term in enumerate_partition_terms(n / 2, q, true) {
        let w = multinomial_weight(&term)
            .expect("terms for n > 0 are never empty")
            .to_f64();
        let mut prod = 1.0;
        for (j, &l) in term.ell.iter().enumerate() {
            for _ in 0..l {
                prod *= a[j + 1];
            }
        }
        c[term.k as usize] += w * prod;
    }
    let scale = n as f64 / q as f64;
    c.iter_mut().for_each(|x| *x *= scale);
    c
}

/// Quantum Hofstadter trace `Tr Hⁿ` at `λ = 2`.
pub fn hofstadter_trace(flux: Flux, n: u32) -> f64 {
    let poly = chambers_recursive(flux, Coupling::HOFSTADTER);
    partition_sum(&poly, n, true, central_binomial_squared)
}

/// Full quantum trace for the coupling the polynomial was built with.
pub fn full_trace(poly: &ChambersPolynomial, n: u32) -> f64 {
    let lambda_tilde = poly.coupling().lambda_tilde(poly.q());
    partition_sum(poly, n, true, |k| central_moment(k, lambda_tilde))
}

/// Almost Mathieu trace `Tr (H^{(λ)})ⁿ`.
pub fn almost_mathieu_trace(flux: Flux, coupling: Coupling, n: u32) -> f64 {
    full_trace(&chambers_recursive(flux, coupling), n)
}

/// `Tr_{±s} Hⁿ` from the power sums of the roots of `E^q b(1/E) ∓ s`, with no
/// partition sum involved.
pub fn pm_s_trace_by_power_sums(poly: &ChambersPolynomial, n: u32, s: f64) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    if n == 0 {
        return 1.0;
    }
    let base = poly.big_e_coefficients();
    let mut total = 0.0;
    for shift in [-s, s] {
        let mut c = base.clone();
        c[0] += shift;
        let p = newton_power_sums(&c, n as usize).expect("monic polynomial");
        total += p[n as usize - 1];
    }
    total / (2.0 * poly.q() as f64)
}

/// First `n_max + 1` Taylor coefficients of the generating function
/// `Σ_n Tr Hⁿ zⁿ` of the requested kind.
///
/// With `m(z) = 1 - z b'(z) / (q b(z))` and `r(z) = z^q / b(z)`:
/// mid-band is `m`, `±s` is `m / (1 - s² r²)`, and the full trace is
/// `m · Σ_k M_{2k} r^{2k}` with the lattice moments `M_{2k}`. `s` is only read
/// for [`TraceKind::PlusMinusS`] and defaults to 0.
pub fn trace_series(
    flux: Flux,
    coupling: Coupling,
    kind: TraceKind,
    s: Option<f64>,
    n_max: usize,
) -> Vec<f64> {
    let len = n_max + 1;
    let poly = chambers_recursive(flux, coupling);
    let q = flux.q() as usize;
    let b = series::truncate(poly.b_series(), len.max(1));

    let log_der = series::div(&series::z_derivative(&b), &b, len);
    let mut mid: Vec<f64> = log_der.iter().map(|x| -x / q as f64).collect();
    if len > 0 {
        mid[0] += 1.0;
    }

    let r = series::div(&series::shift(&[1.0], q, len), &b, len);
    let r2 = series::mul(&r, &r, len);

    match kind {
        TraceKind::MidBand => mid,
        TraceKind::PlusMinusS => {
            let s2 = s.unwrap_or(0.0).powi(2);
            let scaled: Vec<f64> = r2.iter().map(|x| x * s2).collect();
            series::mul(&mid, &series::compose(|_| 1.0, &scaled, len), len)
        }
        TraceKind::FullQuantum => {
            let lambda_tilde = coupling.lambda_tilde(flux.q());
            let moments = series::compose(|k| central_moment(k as u32, lambda_tilde), &r2, len);
            series::mul(&mid, &moments, len)
        }
    }
}

/// `Tr (Σ_j a(2j) H^{q-2j})^{2k}`, expanded into moments `Tr H^m` supplied by
/// the full-trace formula.
///
/// Since `Σ_j a(2j) E^{q-2j} = -E^q b(1/E)` takes the lattice value `-s`, this
/// equals the `2k`-th lattice moment: `binom(2k,k)²` at `λ = 2`.
pub fn trace_sum_rule(flux: Flux, coupling: Coupling, k: u32) -> f64 {
    let poly = chambers_recursive(flux, coupling);
    let base: Vec<f64> = poly.big_e_coefficients().iter().map(|c| -c).collect();
    let mut power = vec![1.0];
    for _ in 0..2 * k {
        let mut next = vec![0.0; power.len() + base.len() - 1];
        for (i, &x) in power.iter().enumerate() {
            for (j, &y) in base.iter().enumerate() {
                next[i + j] += x * y;
            }
        }
        power = next;
    }
    power
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0.0)
        .map(|(m, &c)| c * full_trace(&poly, m as u32))
        .sum()
}

/// Computes one trace of the given kind by its partition sum.
pub fn trace(
    flux: Flux,
    coupling: Coupling,
    kind: TraceKind,
    s: Option<f64>,
    n: u32,
) -> TraceRecord {
    let poly = chambers_recursive(flux, coupling);
    let value = match kind {
        TraceKind::MidBand => midband_trace(&poly, n),
        TraceKind::PlusMinusS => pm_s_trace(&poly, n, s.unwrap_or(0.0)),
        TraceKind::FullQuantum if coupling.is_hofstadter() => hofstadter_trace(flux, n),
        TraceKind::FullQuantum => full_trace(&poly, n),
    };
    TraceRecord {
        flux,
        lambda: coupling.lambda(),
        n,
        s: if kind == TraceKind::PlusMinusS {
            Some(s.unwrap_or(0.0))
        } else {
            None
        },
        kind,
        value,
        method: Method::PartitionSum,
    }
}
