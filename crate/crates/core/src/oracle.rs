//! Independent ground truth: Bloch secular matrices, Brillouin-zone traces,
//! point-spectrum roots and closed lattice walks with Peierls phases.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flux::{Coupling, Flux};

/// Default largest walk length accepted by [`walk_trace`].
pub const DEFAULT_WALK_CAP: u32 = 20;

/// The `q × q` Bloch Hamiltonian at momentum `(kx, ky)`: diagonal
/// `λ cos(ky + 2πpm/q)`, unit nearest-neighbour couplings and corner phases
/// `e^{±iqkx}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularMatrix {
    flux: Flux,
    lambda: f64,
    kx: f64,
    ky: f64,
    entries: DMatrix<Complex64>,
}

impl SecularMatrix {
    pub fn new(flux: Flux, coupling: Coupling, kx: f64, ky: f64) -> Self {
        let q = flux.q() as usize;
        let lambda = coupling.lambda();
        let mut h = DMatrix::from_element(q, q, Complex64::new(0.0, 0.0));
        for m in 0..q {
            h[(m, m)] = Complex64::new(lambda * (ky + flux.phase(m as i64)).cos(), 0.0);
            if m + 1 < q {
                h[(m, m + 1)] += 1.0;
                h[(m + 1, m)] += 1.0;
            }
        }
        let corner = Complex64::from_polar(1.0, q as f64 * kx);
        h[(q - 1, 0)] += corner;
        h[(0, q - 1)] += corner.conj();
        SecularMatrix {
            flux,
            lambda,
            kx,
            ky,
            entries: h,
        }
    }

    pub fn flux(&self) -> Flux {
        self.flux
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn momentum(&self) -> (f64, f64) {
        (self.kx, self.ky)
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }
}

/// All eigenvalues of the Hermitian secular matrix, ascending.
pub fn eigenvalues(matrix: &SecularMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(matrix.entries.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `(1/q) ⟨Σ_r E_r(kx, ky)ⁿ⟩` over a `grid × grid` periodic grid on
/// `[−π, π)²`. Exact up to eigensolver error when `grid ≥ n + 1`; smaller
/// grids log a warning and still compute.
///
/// Rows are evaluated in parallel and summed in row-major order, so the result
/// does not depend on the thread count.
pub fn bz_trace(flux: Flux, coupling: Coupling, n: u32, grid: usize) -> f64 {
    if grid < n as usize + 1 {
        log::warn!("insufficient grid {grid} for n = {n}; the result is not exact");
    }
    let grid = grid.max(1);
    let step = 2.0 * std::f64::consts::PI / grid as f64;
    let rows: Vec<f64> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let kx = -std::f64::consts::PI + step * i as f64;
            let mut row = 0.0;
            for j in 0..grid {
                let ky = -std::f64::consts::PI + step * j as f64;
                let m = SecularMatrix::new(flux, coupling, kx, ky);
                row += eigenvalues(&m)
                    .iter()
                    .map(|e| e.powi(n as i32))
                    .sum::<f64>();
            }
            row
        })
        .collect();
    rows.iter().sum::<f64>() / ((grid * grid) as f64 * flux.q() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Momenta with `2(cos qkx + λ̃ cos qky) = sign·s`, split proportionally:
/// `cos qky = c₂ = sign·s / (2(1 + λ̃))` and `cos qkx = sign·s/2 − λ̃ c₂`, both
/// clamped to `[−1, 1]`.
pub fn point_spectrum_momenta(
    flux: Flux,
    coupling: Coupling,
    s: f64,
    sign: Sign,
) -> Result<(f64, f64)> {
    let q = flux.q();
    let lt = coupling.lambda_tilde(q);
    let limit = 2.0 * (1.0 + lt);
    if s.is_nan() || s.abs() > limit {
        return Err(Error::RangeError { s, limit });
    }
    let target = sign.value() * s;
    let c2 = (target / limit).clamp(-1.0, 1.0);
    let c1 = (0.5 * target - lt * c2).clamp(-1.0, 1.0);
    Ok((c1.acos() / q as f64, c2.acos() / q as f64))
}

/// The `q` real roots of `E^q b(1/E) = sign·s`, as eigenvalues of the
/// secular matrix at momenta realizing `s`.
pub fn point_spectrum_roots(
    flux: Flux,
    coupling: Coupling,
    s: f64,
    sign: Sign,
) -> Result<Vec<f64>> {
    let (kx, ky) = point_spectrum_momenta(flux, coupling, s, sign)?;
    Ok(eigenvalues(&SecularMatrix::new(flux, coupling, kx, ky)))
}

/// `⟨0|Hⁿ|0⟩` for the lattice Hamiltonian with Peierls phases in Landau
/// gauge: horizontal hops at height `y` carry `e^{±iγy}`, vertical hops carry
/// amplitude `λ/2`. Equals the sum over closed `n`-step walks of
/// `e^{iγ·area}` weighted by `(λ/2)^{#vertical steps}`.
pub fn walk_trace(flux: Flux, coupling: Coupling, n: u32) -> Result<f64> {
    walk_trace_with(flux, coupling, n, DEFAULT_WALK_CAP, 0)
}

/// [`walk_trace`] with an explicit length cap and the gauge origin moved to
/// height `-gauge_offset` (phases `e^{±iγ(y + gauge_offset)}`).
pub fn walk_trace_with(
    flux: Flux,
    coupling: Coupling,
    n: u32,
    cap: u32,
    gauge_offset: i64,
) -> Result<f64> {
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let r = n as usize;
    let side = 2 * r + 1;
    let idx = |x: usize, y: usize| y * side + x;
    let gamma = flux.gamma();
    let vert = coupling.half();
    let phases: Vec<Complex64> = (0..side)
        .map(|y| Complex64::from_polar(1.0, gamma * ((y as i64 - r as i64) + gauge_offset) as f64))
        .collect();

    let mut psi = vec![Complex64::new(0.0, 0.0); side * side];
    psi[idx(r, r)] = Complex64::new(1.0, 0.0);
    let mut next = psi.clone();
    for _ in 0..n {
        for y in 0..side {
            for x in 0..side {
                let mut acc = Complex64::new(0.0, 0.0);
                if x + 1 < side {
                    acc += phases[y] * psi[idx(x + 1, y)];
                }
                if x > 0 {
                    acc += phases[y].conj() * psi[idx(x - 1, y)];
                }
                if y + 1 < side {
                    acc += vert * psi[idx(x, y + 1)];
                }
                if y > 0 {
                    acc += vert * psi[idx(x, y - 1)];
                }
                next[idx(x, y)] = acc;
            }
        }
        std::mem::swap(&mut psi, &mut next);
    }
    let z = psi[idx(r, r)];
    debug_assert!(
        z.im.abs() <= 1e-10 * z.re.abs().max(1.0),
        "closed-walk sum has imaginary part {}",
        z.im
    );
    Ok(z.re)
}
