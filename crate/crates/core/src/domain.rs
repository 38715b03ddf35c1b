//! Value types shared across the crate and a couple of small numeric helpers.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Classification of a shift pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftClass {
    /// Both shifts strictly greater than -1/2.
    Interior,
    /// `σ = τ = -1/2`, the harmonic oscillator.
    Oscillator,
    /// Everything else: at least one shift ≤ -1/2, not both equal to -1/2.
    Degenerate,
}

/// Lattice shifts `(σ, τ)`; the lattice is `(N + σ) × (N + τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftPair {
    pub sigma: f64,
    pub tau: f64,
}

impl ShiftPair {
    pub fn new(sigma: f64, tau: f64) -> Result<Self> {
        if !(sigma.is_finite() && tau.is_finite() && sigma > -1.0 && tau > -1.0) {
            return Err(Error::InvalidShift { sigma, tau });
        }
        Ok(Self { sigma, tau })
    }

    /// The harmonic-oscillator shift `(-1/2, -1/2)`.
    pub fn oscillator() -> Self {
        Self {
            sigma: -0.5,
            tau: -0.5,
        }
    }

    pub fn swapped(self) -> Self {
        Self {
            sigma: self.tau,
            tau: self.sigma,
        }
    }

    pub fn classify(&self) -> ShiftClass {
        if self.sigma > -0.5 && self.tau > -0.5 {
            ShiftClass::Interior
        } else if self.sigma == -0.5 && self.tau == -0.5 {
            ShiftClass::Oscillator
        } else {
            ShiftClass::Degenerate
        }
    }
}

/// Anisotropy `β > 0`, optionally carrying an exact reduced fraction `μ/ν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anisotropy {
    pub beta: f64,
    pub exact: Option<(u64, u64)>,
}

impl Anisotropy {
    /// A float anisotropy with no rational form attached.
    pub fn new(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { beta, exact: None })
    }

    /// The rational anisotropy `μ/ν`, reduced to lowest terms.
    pub fn rational(mu: u64, nu: u64) -> Result<Self> {
        if mu == 0 || nu == 0 {
            return Err(Error::param(
                "beta",
                mu as f64 / nu as f64,
                "numerator and denominator must be positive",
            ));
        }
        let g = gcd(mu, nu);
        let (mu, nu) = (mu / g, nu / g);
        Ok(Self {
            beta: mu as f64 / nu as f64,
            exact: Some((mu, nu)),
        })
    }

    /// Attach a rational form when `beta` is a fraction with denominator
    /// at most `max_denominator` (to within one ulp).
    pub fn detect(beta: f64, max_denominator: u64) -> Result<Self> {
        check_beta(beta)?;
        Ok(match rational_detect(beta, max_denominator) {
            Some((mu, nu)) => Self {
                beta,
                exact: Some((mu, nu)),
            },
            None => Self { beta, exact: None },
        })
    }

    /// `1/β`, with the fraction flipped when present.
    pub fn inverse(self) -> Self {
        match self.exact {
            Some((mu, nu)) => Self {
                beta: nu as f64 / mu as f64,
                exact: Some((nu, mu)),
            },
            None => Self {
                beta: 1.0 / self.beta,
                exact: None,
            },
        }
    }

    pub fn sqrt_beta(&self) -> f64 {
        self.beta.sqrt()
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::param("beta", beta, "must be finite and > 0"))
    }
}

/// Riesz order `γ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszOrder {
    pub gamma: f64,
}

impl RieszOrder {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma >= 0.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::param("gamma", gamma, "must be finite and >= 0"))
        }
    }

    /// Order strictly positive, as required by the Riesz-mean evaluators.
    pub fn positive(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 0.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::param("gamma", gamma, "must be finite and > 0"))
        }
    }
}

/// One row of a residual study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub lambda: f64,
    pub direct: f64,
    pub asymptotic: f64,
    /// `direct - asymptotic`.
    pub residual: f64,
    /// `residual * λ^(M - γ - δ)`.
    pub normalized: f64,
}

/// `{x} = x - ⌊x⌋`, always in `[0, 1)`.
pub fn fractional_part(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::param("x", x, "must be finite"));
    }
    let r = x - x.floor();
    // x - floor(x) rounds to 1.0 for tiny negative x.
    Ok(if r >= 1.0 { 0.0 } else { r })
}

/// Find coprime `(μ, ν)` with `ν ≤ max_denominator` and `μ/ν` equal to `beta`
/// within one ulp, scanning continued-fraction convergents.
pub fn rational_detect(beta: f64, max_denominator: u64) -> Option<(u64, u64)> {
    if !(beta.is_finite() && beta > 0.0) || max_denominator == 0 {
        return None;
    }
    let ulp = next_up(beta) - beta;
    let matches = |p: u64, q: u64| ((p as f64 / q as f64) - beta).abs() <= ulp;

    // Convergents h_n / k_n.
    let (mut h_prev, mut h) = (1u128, beta.floor() as u128);
    let (mut k_prev, mut k) = (0u128, 1u128);
    let mut rem = beta - beta.floor();
    for _ in 0..64 {
        if k > max_denominator as u128 || h > u64::MAX as u128 {
            return None;
        }
        if h > 0 && matches(h as u64, k as u64) {
            return Some((h as u64, k as u64));
        }
        if rem <= 0.0 {
            return None;
        }
        let inv = 1.0 / rem;
        let a = inv.floor();
        rem = inv - a;
        if a > 1e18 {
            return None;
        }
        let a = a as u128;
        let h_next = a.checked_mul(h)?.checked_add(h_prev)?;
        let k_next = a.checked_mul(k)?.checked_add(k_prev)?;
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
    }
    None
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
