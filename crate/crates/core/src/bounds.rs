//! Three-term upper bounds for one- and two-dimensional lattice sums, and the
//! a-priori bracket for Riesz-mean maximizers.
//!
//! Constants (`c1`, `c2`, `c3`, `b0`) default to the values obtained by
//! replaying the proofs:
//!
//! | bound  | c1              | c2    | c3    | b0       |
//! |--------|-----------------|-------|-------|----------|
//! | L22ii  | 1/2             | 1/8   | -     | 1 + 2σ   |
//! | L22iii | 1               | 2/3   | -     | 1/12     |
//! | L23    | 1/4             | 1/8   | σ'₋   | 1 + 2σ'  |
//! | L24    | 1/4             | 1/6   | -     | 1/12     |
//! | C25i   | (1/4)/(1+γ)     | 1/8   | σ'₋   | 1 + 2σ'  |
//! | C25ii  | 1/4             | γ/6   | -     | 1/12     |
//!
//! with `σ' = min(σ, τ)` and `σ'₋ = max(0, -σ')`. L23 averages the two
//! one-dimensional reductions (halving `c1`) and absorbs
//! `σ'₋λ + σ'₋²/2 - c1 b σ'₋` into `σ'₋(λ+1)`. L24 averages the two
//! reductions of the order-one oscillator mean (quartering `c1`, `c2`).
//! C25i/C25ii integrate L23/L24 against the Aizenman–Lieb kernel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{Anisotropy, ShiftPair};
use crate::sums::{counting_direct, one_d_direct, riesz_direct, OneDKind};
use crate::{Error, Result};

/// Relative slack applied when deciding whether a bound holds.
pub const HOLDS_SLACK: f64 = 1e-12;

/// Where the maximizers of `R^γ(·, λ)` can live.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bracket {
    /// `R^γ(·, λ) ≡ 0`: every β is a maximizer.
    AllBeta,
    /// Open interval `((1+τ)²/λ², λ²/(1+σ)²)`.
    Interval { lo: f64, hi: f64 },
}

pub fn bracket(shift: &ShiftPair, lambda: f64) -> Result<Bracket> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::param("lambda", lambda, "must be finite and >= 0"));
    }
    let (s1, t1) = (1.0 + shift.sigma, 1.0 + shift.tau);
    if lambda <= 2.0 * (s1 * t1).sqrt() {
        return Ok(Bracket::AllBeta);
    }
    Ok(Bracket::Interval {
        lo: t1 * t1 / (lambda * lambda),
        hi: lambda * lambda / (s1 * s1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundId {
    /// `Σ_k (λ-(k+σ)√β)_+ ≤ λ²/(2√β)`, σ ≥ -1/2.
    L22i,
    /// `Σ_k (λ-(k+σ)√β)_+ ≤ λ²/(2√β) - c1 bλ + c2 b²√β`, σ > -1/2.
    L22ii,
    /// `Σ_k (λ-(k-1/2)√β)_+² ≤ λ³/(3√β) - c1 b√βλ + c2 b^{3/2}β`.
    L22iii,
    /// `N ≤ λ²/2 - c1 b(1+β)/√β λ + c2 b²(1+β²)/β + c3(λ+1)`, σ, τ > -1/2.
    L23,
    /// `R^1 ≤ λ³/6 - c1 b(1+β²)/β λ + c2 b^{3/2}(1+β³)/β^{3/2}` at the oscillator shift.
    L24,
    /// Order-γ version of L23.
    C25i,
    /// Order-γ (γ ≥ 1) version of L24.
    C25ii,
}

impl BoundId {
    pub const ALL: [BoundId; 7] = [
        BoundId::L22i,
        BoundId::L22ii,
        BoundId::L22iii,
        BoundId::L23,
        BoundId::L24,
        BoundId::C25i,
        BoundId::C25ii,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundId::L22i => "L22i",
            BoundId::L22ii => "L22ii",
            BoundId::L22iii => "L22iii",
            BoundId::L23 => "L23",
            BoundId::L24 => "L24",
            BoundId::C25i => "C25i",
            BoundId::C25ii => "C25ii",
        }
    }
}

impl std::str::FromStr for BoundId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Mismatch(format!("unknown bound id {s:?}")))
    }
}

/// Constants of a three-term bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub b0: f64,
}

/// Default constants (see the module docs for their derivation).
pub fn default_constants(id: BoundId, shift: &ShiftPair, gamma: f64) -> BoundConstants {
    let sp = shift.sigma.min(shift.tau);
    let sp_minus = (-sp).max(0.0);
    let (c1, c2, c3, b0) = match id {
        BoundId::L22i => (0.0, 0.0, 0.0, 0.0),
        BoundId::L22ii => (0.5, 0.125, 0.0, 1.0 + 2.0 * shift.sigma),
        BoundId::L22iii => (1.0, 2.0 / 3.0, 0.0, 1.0 / 12.0),
        BoundId::L23 => (0.25, 0.125, sp_minus, 1.0 + 2.0 * sp),
        BoundId::L24 => (0.25, 1.0 / 6.0, 0.0, 1.0 / 12.0),
        BoundId::C25i => (0.25 / (1.0 + gamma), 0.125, sp_minus, 1.0 + 2.0 * sp),
        BoundId::C25ii => (0.25, gamma / 6.0, 0.0, 1.0 / 12.0),
    };
    BoundConstants { c1, c2, c3, b0 }
}

/// Inputs of one bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub sigma: f64,
    pub tau: f64,
    pub gamma: f64,
    pub beta: f64,
    pub lambda: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    pub params: BoundParams,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub holds: bool,
}

fn check_region(id: BoundId, shift: &ShiftPair, gamma: f64) -> Result<()> {
    let (s, t) = (shift.sigma, shift.tau);
    let osc = s == -0.5 && t == -0.5;
    let ok = match id {
        BoundId::L22i => s >= -0.5,
        BoundId::L22ii => s > -0.5,
        BoundId::L22iii => s == -0.5,
        BoundId::L23 => s > -0.5 && t > -0.5,
        BoundId::L24 => osc,
        BoundId::C25i => s > -0.5 && t > -0.5,
        BoundId::C25ii => osc,
    };
    if !ok {
        return Err(Error::Mismatch(format!(
            "shift ({s}, {t}) is outside the validity region of {}",
            id.name()
        )));
    }
    match id {
        BoundId::C25i if !(gamma.is_finite() && gamma > 0.0) => {
            Err(Error::param("gamma", gamma, "C25i requires gamma > 0"))
        }
        BoundId::C25ii if !(gamma.is_finite() && gamma >= 1.0) => {
            Err(Error::param("gamma", gamma, "C25ii requires gamma >= 1"))
        }
        _ => Ok(()),
    }
}

/// Evaluate one bound with its default constants.
pub fn check_bound(id: BoundId, shift: &ShiftPair, gamma: f64, anisotropy: &Anisotropy, lambda: f64, b: f64) -> Result<BoundReport> {
    let k = default_constants(id, shift, gamma);
    check_bound_with(id, shift, gamma, anisotropy, lambda, b, &k)
}

/// Evaluate one bound with explicit constants.
pub fn check_bound_with(
    id: BoundId,
    shift: &ShiftPair,
    gamma: f64,
    anisotropy: &Anisotropy,
    lambda: f64,
    b: f64,
    k: &BoundConstants,
) -> Result<BoundReport> {
    check_region(id, shift, gamma)?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::param("lambda", lambda, "must be finite and >= 0"));
    }
    if !(b >= 0.0 && b <= k.b0) {
        return Err(Error::param("b", b, "must lie in [0, b0]"));
    }
    let beta = anisotropy.beta;
    let sb = beta.sqrt();
    let (s, t) = (shift.sigma, shift.tau);
    let (lhs, rhs) = match id {
        BoundId::L22i | BoundId::L22ii => {
            let lhs = one_d_direct(OneDKind::Linear, s, sb, lambda)?;
            (lhs, lambda * lambda / (2.0 * sb) - k.c1 * b * lambda + k.c2 * b * b * sb)
        }
        BoundId::L22iii => {
            let lhs = one_d_direct(OneDKind::Square, s, sb, lambda)?;
            (
                lhs,
                lambda.powi(3) / (3.0 * sb) - k.c1 * b * sb * lambda + k.c2 * b.powf(1.5) * beta,
            )
        }
        BoundId::L23 => {
            let lhs = counting_direct(shift, anisotropy, lambda)? as f64;
            (
                lhs,
                lambda * lambda / 2.0 - k.c1 * b * (1.0 + beta) / sb * lambda
                    + k.c2 * b * b * (1.0 + beta * beta) / beta
                    + k.c3 * (lambda + 1.0),
            )
        }
        BoundId::L24 => {
            let lhs = riesz_direct(shift, 1.0, anisotropy, lambda)?;
            (
                lhs,
                lambda.powi(3) / 6.0 - k.c1 * b * (1.0 + beta * beta) / beta * lambda
                    + k.c2 * b.powf(1.5) * (1.0 + beta.powi(3)) / beta.powf(1.5),
            )
        }
        BoundId::C25i => {
            let lhs = riesz_direct(shift, gamma, anisotropy, lambda)?;
            let lg = lambda.powf(gamma);
            (
                lhs,
                lambda.powf(2.0 + gamma) / ((1.0 + gamma) * (2.0 + gamma))
                    - k.c1 * b * (1.0 + beta) / sb * lambda * lg
                    + k.c2 * b * b * (1.0 + beta * beta) / beta * lg
                    + k.c3 * (lambda + 1.0) * lg,
            )
        }
        BoundId::C25ii => {
            let lhs = riesz_direct(shift, gamma, anisotropy, lambda)?;
            (
                lhs,
                lambda.powf(2.0 + gamma) / ((1.0 + gamma) * (2.0 + gamma))
                    - k.c1 * b * (1.0 + beta * beta) / beta * lambda.powf(gamma)
                    + k.c2 * b.powf(1.5) * (1.0 + beta.powi(3)) / beta.powf(1.5)
                        * lambda.powf(gamma - 1.0),
            )
        }
    };
    let margin = rhs - lhs;
    Ok(BoundReport {
        bound_id: id,
        params: BoundParams {
            sigma: s,
            tau: t,
            gamma,
            beta,
            lambda,
            b,
        },
        lhs,
        rhs,
        margin,
        holds: margin >= -HOLDS_SLACK * rhs.abs().max(1.0),
    })
}

/// Random sampling region for a sweep. β is drawn log-uniformly, the rest
/// uniformly; shifts are then projected onto the bound's validity region
/// (oscillator bounds pin σ = τ = -1/2, L22iii pins σ = -1/2) and `b` is
/// drawn from `[0, b0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomGrid {
    pub points: usize,
    pub seed: u64,
    pub beta: (f64, f64),
    pub lambda: (f64, f64),
    pub sigma: (f64, f64),
    pub tau: (f64, f64),
    pub gamma: (f64, f64),
}

impl Default for RandomGrid {
    fn default() -> Self {
        Self {
            points: 10_000,
            seed: 1,
            beta: (0.1, 10.0),
            lambda: (0.0, 50.0),
            sigma: (-0.49, 2.0),
            tau: (-0.49, 2.0),
            gamma: (0.1, 3.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GridSpec {
    Random(RandomGrid),
    Points(Vec<BoundParams>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub count: usize,
    pub violations: usize,
    /// Smallest `margin / max(1, |rhs|)` seen (`+inf` for an empty sweep).
    pub min_relative_margin: f64,
    pub min_margin: f64,
    pub any_failure: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub reports: Vec<BoundReport>,
    pub summary: SweepSummary,
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

fn sample_points(id: BoundId, g: &RandomGrid) -> Vec<BoundParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    (0..g.points)
        .map(|_| {
            let beta = uniform(&mut rng, (g.beta.0.ln(), g.beta.1.ln())).exp();
            let lambda = uniform(&mut rng, g.lambda);
            let mut sigma = uniform(&mut rng, g.sigma);
            let mut tau = uniform(&mut rng, g.tau);
            let mut gamma = uniform(&mut rng, g.gamma);
            match id {
                BoundId::L22i => sigma = sigma.max(-0.5),
                BoundId::L22ii => sigma = sigma.max(-0.49),
                BoundId::L22iii => sigma = -0.5,
                BoundId::L23 | BoundId::C25i => {
                    sigma = sigma.max(-0.49);
                    tau = tau.max(-0.49);
                }
                BoundId::L24 | BoundId::C25ii => {
                    sigma = -0.5;
                    tau = -0.5;
                }
            }
            if id == BoundId::C25ii {
                gamma = gamma.max(1.0);
            }
            let shift = ShiftPair { sigma, tau };
            let b0 = default_constants(id, &shift, gamma).b0;
            let b = uniform(&mut rng, (0.0, b0));
            BoundParams {
                sigma,
                tau,
                gamma,
                beta,
                lambda,
                b,
            }
        })
        .collect()
}

/// Check a bound on every grid point; violations are reported, not raised.
pub fn bound_sweep(id: BoundId, grid: &GridSpec) -> Result<SweepResult> {
    let points = match grid {
        GridSpec::Random(g) => sample_points(id, g),
        GridSpec::Points(p) => p.clone(),
    };
    let reports: Vec<BoundReport> = points
        .par_iter()
        .map(|p| {
            let shift = ShiftPair::new(p.sigma, p.tau)?;
            let an = Anisotropy::new(p.beta)?;
            check_bound(id, &shift, p.gamma, &an, p.lambda, p.b)
        })
        .collect::<Result<_>>()?;
    let violations = reports.iter().filter(|r| !r.holds).count();
    let min_margin = reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let min_relative_margin = reports
        .iter()
        .map(|r| r.margin / r.rhs.abs().max(1.0))
        .fold(f64::INFINITY, f64::min);
    Ok(SweepResult {
        summary: SweepSummary {
            count: reports.len(),
            violations,
            min_relative_margin,
            min_margin,
            any_failure: violations > 0,
        },
        reports,
    })
}
