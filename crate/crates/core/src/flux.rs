//! Value types shared by every trace formula: the reduced rational flux, the
//! anisotropy coupling, and the exact combinatorics of the partition sums.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rational magnetic flux `p/q` per plaquette, in units of the flux quantum.
///
/// Always stored reduced with `0 <= p < q`. Zero flux is the single value
/// `0/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Flux {
    p: u64,
    q: u64,
}

impl Flux {
    /// The zero-flux (free lattice) case.
    pub const ZERO: Flux = Flux { p: 0, q: 1 };

    /// Reduces `p/q` to lowest terms with `p` taken modulo `q`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(Error::InvalidFlux { p, q });
        }
        let p_mod = p.rem_euclid(q);
        if p_mod == 0 {
            return Ok(Self::ZERO);
        }
        let g = p_mod.gcd(&q);
        Ok(Flux {
            p: (p_mod / g) as u64,
            q: (q / g) as u64,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `⌊q/2⌋`, the number of non-trivial Chambers coefficients.
    pub fn half_q(&self) -> usize {
        (self.q / 2) as usize
    }

    /// The flux angle `γ = 2πp/q`.
    pub fn gamma(&self) -> f64 {
        2.0 * PI * self.p as f64 / self.q as f64
    }

    /// `γ·m` reduced modulo `2π` before the floating-point division, so that
    /// phases at large `|m|` stay accurate.
    pub fn phase(&self, m: i64) -> f64 {
        let q = self.q as i64;
        let r = ((self.p as i64 % q) * m.rem_euclid(q)).rem_euclid(q);
        2.0 * PI * r as f64 / self.q as f64
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0
    }
}

impl fmt::Display for Flux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Shorthand for [`Flux::new`].
pub fn make_flux(p: i64, q: i64) -> Result<Flux> {
    Flux::new(p, q)
}

/// Anisotropy `λ` of the almost Mathieu operator. `λ = 2` is the isotropic
/// Hofstadter model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    lambda: f64,
}

impl Coupling {
    pub const HOFSTADTER: Coupling = Coupling { lambda: 2.0 };

    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(Coupling { lambda })
        } else {
            Err(Error::InvalidCoupling(lambda))
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `λ/2`, the vertical hopping amplitude.
    pub fn half(&self) -> f64 {
        self.lambda / 2.0
    }

    /// `λ̃ = (λ/2)^q`, accumulated by `q` successive multiplications starting
    /// from 1.
    pub fn lambda_tilde(&self, q: u64) -> f64 {
        let half = self.half();
        let mut acc = 1.0;
        for _ in 0..q {
            acc *= half;
        }
        acc
    }

    /// The Aubry-dual coupling `4/λ`.
    pub fn dual(&self) -> Coupling {
        Coupling {
            lambda: 4.0 / self.lambda,
        }
    }

    pub fn is_hofstadter(&self) -> bool {
        self.lambda == 2.0
    }
}

/// One term `(k, ℓ₁..ℓ_m)` of a trace partition sum, `m = ⌊q/2⌋`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionTerm {
    pub k: u32,
    pub ell: Vec<u32>,
}

impl PartitionTerm {
    /// `Σℓ_j + 2k`, the multinomial's top argument.
    pub fn total_parts(&self) -> u64 {
        self.ell.iter().map(|&l| l as u64).sum::<u64>() + 2 * self.k as u64
    }

    /// `q·k + Σ j·ℓ_j`, which equals `n/2` for the `n` it was built for.
    pub fn weighted_size(&self, q: u64) -> u64 {
        q * self.k as u64
            + self
                .ell
                .iter()
                .enumerate()
                .map(|(j, &l)| (j as u64 + 1) * l as u64)
                .sum::<u64>()
    }
}

/// An exact rational with arbitrary-precision numerator and denominator,
/// kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        ExactRational(BigRational::new(numer, denom))
    }

    pub fn from_integer(n: BigInt) -> Self {
        ExactRational(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// All `(k, ℓ)` with `q·k + ℓ₁ + 2ℓ₂ + … + ⌊q/2⌋ℓ_{⌊q/2⌋} = half_n`.
///
/// With `allow_k = false` only `k = 0` is produced. Terms come out in
/// ascending lexicographic order on `(k, ℓ₁, ℓ₂, …)`.
pub fn enumerate_partition_terms(half_n: u32, q: u64, allow_k: bool) -> Vec<PartitionTerm> {
    assert!(q >= 1, "q must be positive");
    let m = (q / 2) as usize;
    let k_max = if allow_k { half_n as u64 / q } else { 0 };
    let mut out = Vec::new();
    let mut ell = vec![0u32; m];
    for k in 0..=k_max {
        let rest = half_n as u64 - q * k;
        fill_parts(&mut out, &mut ell, 0, rest, k as u32);
    }
    out
}

fn fill_parts(out: &mut Vec<PartitionTerm>, ell: &mut [u32], j: usize, rest: u64, k: u32) {
    let m = ell.len();
    if j == m {
        if rest == 0 {
            out.push(PartitionTerm {
                k,
                ell: ell.to_vec(),
            });
        }
        return;
    }
    let size = j as u64 + 1;
    if j + 1 == m {
        if rest.is_multiple_of(size) {
            ell[j] = (rest / size) as u32;
            out.push(PartitionTerm {
                k,
                ell: ell.to_vec(),
            });
            ell[j] = 0;
        }
        return;
    }
    for l in 0..=rest / size {
        ell[j] = l as u32;
        fill_parts(out, ell, j + 1, rest - size * l, k);
    }
    ell[j] = 0;
}

fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `binom(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `multinomial(Σℓ+2k; ℓ₁, …, ℓ_m, 2k) / (Σℓ+2k)` as an exact rational.
pub fn multinomial_weight(term: &PartitionTerm) -> Result<ExactRational> {
    let total = term.total_parts();
    if total == 0 {
        return Err(Error::DegenerateTerm);
    }
    let mut denom = factorial(2 * term.k as u64);
    for &l in &term.ell {
        denom *= factorial(l as u64);
    }
    denom *= total;
    Ok(ExactRational::new(
        BigInt::from(factorial(total)),
        BigInt::from(denom),
    ))
}

/// `binom(2k,k) Σ_{k₁=0}^{k} binom(k,k₁)² λ̃^{2k₁}`, the `2k`-th moment of the
/// `λ̃`-deformed lattice density of states.
///
/// The inner sum is a Horner evaluation in `λ̃²` over exact integer
/// binomials; at `λ̃ = 1` it is `binom(2k,k)²`.
pub fn central_moment(k: u32, lambda_tilde: f64) -> f64 {
    let k = k as u64;
    let x = lambda_tilde * lambda_tilde;
    let mut acc = 0.0;
    for k1 in (0..=k).rev() {
        let b = binomial(k, k1);
        acc = acc * x + (&b * &b).to_f64().unwrap_or(f64::INFINITY);
    }
    binomial(2 * k, k).to_f64().unwrap_or(f64::INFINITY) * acc
}
