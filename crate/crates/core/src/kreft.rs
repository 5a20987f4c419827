//! Chambers polynomial `E^q b(1/E)` and its (generalized) Kreft coefficients.
//!
//! The polynomial is `b(z) = -Σ_j a(2j) z^{2j}` with `a(0) = -1`, so that
//! `E^q b(1/E) = E^q - a(2) E^{q-2} - a(4) E^{q-4} - …`. On the Bloch bands it
//! equals `2(cos q·k_x + (λ/2)^q cos q·k_y)`.
//!
//! Two independent constructions are provided: a determinant recursion on the
//! tridiagonalized Bloch matrix ([`chambers_recursive`]) and the nested
//! building-block sums ([`chambers_nested`]).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::flux::{Coupling, Flux};

/// Coefficient table `a(2j)`, `j = 0..=⌊q/2⌋`, for one flux and coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct ChambersPolynomial {
    flux: Flux,
    coupling: Coupling,
    a: Vec<f64>,
}

impl ChambersPolynomial {
    fn from_coefficients(flux: Flux, coupling: Coupling, a: Vec<f64>) -> Self {
        debug_assert_eq!(a.len(), flux.half_q() + 1);
        debug_assert_eq!(a[0], -1.0);
        ChambersPolynomial { flux, coupling, a }
    }

    pub fn flux(&self) -> Flux {
        self.flux
    }

    pub fn coupling(&self) -> Coupling {
        self.coupling
    }

    pub fn q(&self) -> u64 {
        self.flux.q()
    }

    /// `a(2j)` for `j = 0..=⌊q/2⌋`.
    pub fn coefficients(&self) -> &[f64] {
        &self.a
    }

    /// `a(2j)`, which vanishes for `2j > q`.
    pub fn a(&self, j: usize) -> f64 {
        self.a.get(j).copied().unwrap_or(0.0)
    }

    /// Coefficients of `b(z)` in ascending powers of `z` (odd powers zero).
    pub fn b_series(&self) -> Vec<f64> {
        let mut b = vec![0.0; 2 * self.flux.half_q() + 1];
        for (j, &a) in self.a.iter().enumerate() {
            b[2 * j] = -a;
        }
        b
    }

    /// Coefficients of `E^q b(1/E)` in ascending powers of `E`.
    pub fn big_e_coefficients(&self) -> Vec<f64> {
        let q = self.q() as usize;
        let mut c = vec![0.0; q + 1];
        for (j, &a) in self.a.iter().enumerate() {
            c[q - 2 * j] = -a;
        }
        c
    }

    /// `E^q b(1/E) = -Σ_j a(2j) E^{q-2j}`, Horner in `E²`. Defined at `E = 0`.
    pub fn eval_big_e(&self, e: f64) -> f64 {
        let e2 = e * e;
        let mut acc = 0.0;
        for &a in &self.a {
            acc = acc * e2 - a;
        }
        if self.q() % 2 == 1 {
            acc * e
        } else {
            acc
        }
    }

    /// Half-width of the `±s` range, `2(1 + (λ/2)^q)`.
    pub fn s_range(&self) -> f64 {
        2.0 * (1.0 + self.coupling.lambda_tilde(self.q()))
    }
}

/// Pair `α(k)`, `ᾱ(k)` of the tridiagonalized Bloch matrix (with `k_y = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildingBlock {
    pub k: u64,
    pub alpha: Complex64,
    pub alpha_bar: Complex64,
}

impl BuildingBlock {
    /// `α(k)·ᾱ(k)`; equals `4 sin²(π(k+1)p/q)` at `λ = 2`.
    pub fn product(&self) -> Complex64 {
        self.alpha * self.alpha_bar
    }
}

/// `α = (λ/2)(1 - e^{iθ})`, `ᾱ = (λ/2)(1 - (2/λ)² e^{-iθ})` with
/// `θ = 2π(k+1)p/q`.
pub fn building_block(flux: Flux, coupling: Coupling, k: u64) -> Result<BuildingBlock> {
    let q = flux.q();
    if k >= q {
        return Err(Error::IndexError { k, q });
    }
    let half = coupling.half();
    let root = Complex64::from_polar(1.0, flux.phase(k as i64 + 1));
    let inv = 1.0 / (half * half);
    Ok(BuildingBlock {
        k,
        alpha: (Complex64::new(1.0, 0.0) - root) * half,
        alpha_bar: (Complex64::new(1.0, 0.0) - root.conj() * inv) * half,
    })
}

fn block_products(flux: Flux, coupling: Coupling) -> Vec<Complex64> {
    (0..flux.q())
        .map(|k| {
            building_block(flux, coupling, k)
                .expect("index in range")
                .product()
        })
        .collect()
}

fn imaginary_residue_ok(z: Complex64, scale: f64) -> bool {
    z.im.abs() <= 1e-9 * (1.0 + z.re.abs() + scale)
}

/// Kreft coefficients from the determinant of the `q×q` tridiagonal matrix
/// with diagonal `-E` and off-diagonals `α(k)`, `ᾱ(k)`, `k = 0..q-2`.
///
/// `D_k = -E·D_{k-1} - α(k-2)ᾱ(k-2)·D_{k-2}` is run on coefficient vectors in
/// `E`, and `E^q b(1/E) = (-1)^q D_q`.
pub fn chambers_recursive(flux: Flux, coupling: Coupling) -> ChambersPolynomial {
    let q = flux.q() as usize;
    let beta = block_products(flux, coupling);

    // Ascending coefficients in E.
    let mut prev: Vec<Complex64> = vec![Complex64::new(1.0, 0.0)];
    let mut cur: Vec<Complex64> = vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)];
    for k in 2..=q {
        let mut next = vec![Complex64::new(0.0, 0.0); k + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] -= c;
        }
        let b = beta[k - 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= b * c;
        }
        prev = std::mem::replace(&mut cur, next);
    }

    let sign = if q.is_multiple_of(2) { 1.0 } else { -1.0 };
    let scale: f64 = cur.iter().map(|c| c.norm()).sum();
    let a = (0..=flux.half_q())
        .map(|j| {
            let c = cur[q - 2 * j] * sign;
            debug_assert!(
                imaginary_residue_ok(c, scale),
                "imaginary residue {} at j={j}",
                c.im
            );
            -c.re
        })
        .collect();
    ChambersPolynomial::from_coefficients(flux, coupling, a)
}

/// Nested building-block sum for a single `a(2j)`:
///
/// `a(2j) = (-1)^{j+1} Σ_{k₁=0}^{q-2j} Σ_{k₂=0}^{k₁} … Σ_{k_j=0}^{k_{j-1}}
///   β(k₁+2j-2) β(k₂+2j-4) … β(k_j)`, `β(k) = α(k)ᾱ(k)`.
///
/// The innermost sums are carried as running prefix sums, so each level costs
/// `O(q)`. Returns 0 when `2j > q`.
pub fn nested_coefficient(flux: Flux, coupling: Coupling, j: usize) -> f64 {
    if j == 0 {
        return -1.0;
    }
    let q = flux.q() as usize;
    if 2 * j > q {
        return 0.0;
    }
    let beta = block_products(flux, coupling);
    nested_from_products(&beta, q, j).re
}

fn nested_from_products(beta: &[Complex64], q: usize, j: usize) -> Complex64 {
    let len = q - 2 * j + 1;
    // level m (1 = innermost) holds, for each k_m, the sum over all deeper
    // indices k_{m+1} ≤ … with k_m fixed.
    let mut level: Vec<Complex64> = (0..len).map(|k| beta[k]).collect();
    for m in 2..=j {
        let offset = 2 * (m - 1);
        let mut running = Complex64::new(0.0, 0.0);
        for (k, slot) in level.iter_mut().enumerate() {
            running += *slot;
            *slot = beta[k + offset] * running;
        }
    }
    let total: Complex64 = level.iter().sum();
    if j % 2 == 1 {
        total
    } else {
        -total
    }
}

/// Kreft coefficients from the nested building-block sums, keeping only the
/// real part (the imaginary parts cancel).
pub fn chambers_nested(flux: Flux, coupling: Coupling) -> ChambersPolynomial {
    let q = flux.q() as usize;
    let beta = block_products(flux, coupling);
    let mut a = Vec::with_capacity(flux.half_q() + 1);
    a.push(-1.0);
    for j in 1..=flux.half_q() {
        let c = nested_from_products(&beta, q, j);
        debug_assert!(
            imaginary_residue_ok(c, 0.0),
            "imaginary residue {} at j={j}",
            c.im
        );
        a.push(c.re);
    }
    ChambersPolynomial::from_coefficients(flux, coupling, a)
}

/// Free-function form of [`ChambersPolynomial::eval_big_e`].
pub fn eval_big_e(poly: &ChambersPolynomial, e: f64) -> f64 {
    poly.eval_big_e(e)
}
