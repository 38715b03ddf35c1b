//! Direct evaluators: lattice sums for the Riesz mean, counting function and
//! heat trace, the closed-form heat trace, one-dimensional closed forms, and
//! numerical checks of the Aizenman–Lieb and Laplace-transform identities.

use serde::{Deserialize, Serialize};

use crate::domain::{fractional_part, Anisotropy, ShiftPair};
use crate::quad;
use crate::special::expansion_coeffs;
use crate::{Error, Result};

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 {
        Ok(())
    } else {
        Err(Error::param("gamma", gamma, "must be finite and > 0"))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(Error::param("lambda", lambda, "must be finite and >= 0"))
    }
}

/// `v^γ` with a `powi` fast path for small integer orders.
#[inline]
fn pow_gamma(v: f64, gamma: f64, int_gamma: Option<i32>) -> f64 {
    match int_gamma {
        Some(1) => v,
        Some(2) => v * v,
        Some(m) => v.powi(m),
        None => v.powf(gamma),
    }
}

fn integer_order(gamma: f64) -> Option<i32> {
    (gamma == gamma.round() && gamma <= 16.0).then_some(gamma as i32)
}

/// `R^γ(β, λ) = Σ (λ - (k₁+σ)√β - (k₂+τ)/√β)_+^γ`.
///
/// Loop order is fixed (outer `k₁`, inner `k₂`, both ascending).
pub fn riesz_direct(shift: &ShiftPair, gamma: f64, anisotropy: &Anisotropy, lambda: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_lambda(lambda)?;
    let sb = anisotropy.beta.sqrt();
    let ig = integer_order(gamma);
    let mut total = 0.0;
    let mut k1 = 1u64;
    loop {
        let u1 = lambda - (k1 as f64 + shift.sigma) * sb;
        if u1 - (1.0 + shift.tau) / sb <= 0.0 {
            break;
        }
        let mut k2 = 1u64;
        loop {
            let v = u1 - (k2 as f64 + shift.tau) / sb;
            if v <= 0.0 {
                break;
            }
            total += pow_gamma(v, gamma, ig);
            k2 += 1;
        }
        k1 += 1;
    }
    Ok(total)
}

/// `N(β, λ) = #{(k₁, k₂) : (k₁+σ)√β + (k₂+τ)/√β ≤ λ}` (boundary inclusive).
pub fn counting_direct(shift: &ShiftPair, anisotropy: &Anisotropy, lambda: f64) -> Result<u64> {
    check_lambda(lambda)?;
    let sb = anisotropy.beta.sqrt();
    let inside = |k1: u64, k2: u64| (k1 as f64 + shift.sigma) * sb + (k2 as f64 + shift.tau) / sb <= lambda;
    let mut count = 0u64;
    let mut k1 = 1u64;
    while inside(k1, 1) {
        let rem = lambda - (k1 as f64 + shift.sigma) * sb;
        // Estimate, then settle against the defining inequality.
        let mut n = (rem * sb - shift.tau).floor().max(0.0) as u64;
        while inside(k1, n + 1) {
            n += 1;
        }
        while n > 0 && !inside(k1, n) {
            n -= 1;
        }
        count += n;
        k1 += 1;
    }
    Ok(count)
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::param("t", t, "must be finite and > 0"))
    }
}

/// Closed-form heat trace `e^{-t(σ√β+τ/√β)} / ((e^{t√β}-1)(e^{t/√β}-1))`,
/// evaluated through `expm1` so that large `t` does not overflow.
pub fn heat_closed(shift: &ShiftPair, anisotropy: &Anisotropy, t: f64) -> Result<f64> {
    check_t(t)?;
    let sb = anisotropy.beta.sqrt();
    let num = (-t * ((1.0 + shift.sigma) * sb + (1.0 + shift.tau) / sb)).exp();
    Ok(num / ((-(-t * sb).exp_m1()) * (-(-t / sb).exp_m1())))
}

/// Neumaier-compensated accumulator.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Heat trace as a truncated double sum. `tol` is relative: each index runs
/// until its geometric tail ratio `q^K` drops below `tol/2`.
pub fn heat_direct(shift: &ShiftPair, anisotropy: &Anisotropy, t: f64, tol: f64) -> Result<f64> {
    check_t(t)?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::param("tol", tol, "must lie in (0, 1)"));
    }
    let sb = anisotropy.beta.sqrt();
    let log_half_tol = (0.5 * tol).ln();
    // q_1 = e^{-t√β}, q_2 = e^{-t/√β}
    let k1_max = (log_half_tol / (-t * sb)).ceil().max(1.0) as u64;
    let k2_max = (log_half_tol / (-t / sb)).ceil().max(1.0) as u64;
    let mut acc = Neumaier::default();
    // Smallest terms first.
    for k1 in (1..=k1_max).rev() {
        for k2 in (1..=k2_max).rev() {
            let e = (k1 as f64 + shift.sigma) * sb + (k2 as f64 + shift.tau) / sb;
            acc.add((-t * e).exp());
        }
    }
    Ok(acc.value())
}

/// The two one-dimensional sums appearing in the three-term bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OneDKind {
    /// `Σ_{k≥1} (λ - (k+σ)√β)_+`
    Linear,
    /// `Σ_{k≥1} (λ - (k-1/2)√β)_+^2`
    Square,
}

fn check_one_d(kind: OneDKind, sigma: f64, sqrt_beta: f64, lambda: f64) -> Result<()> {
    check_lambda(lambda)?;
    if !(sqrt_beta.is_finite() && sqrt_beta > 0.0) {
        return Err(Error::param("sqrt_beta", sqrt_beta, "must be finite and > 0"));
    }
    if !(sigma.is_finite() && sigma > -1.0) {
        return Err(Error::param("sigma", sigma, "must be finite and > -1"));
    }
    if kind == OneDKind::Square && sigma != -0.5 {
        return Err(Error::param("sigma", sigma, "the square sum requires sigma = -1/2"));
    }
    Ok(())
}

/// Closed form of the one-dimensional sum.
pub fn one_d_closed(kind: OneDKind, sigma: f64, sqrt_beta: f64, lambda: f64) -> Result<f64> {
    check_one_d(kind, sigma, sqrt_beta, lambda)?;
    let s = sqrt_beta;
    Ok(match kind {
        OneDKind::Linear => {
            let y = lambda / s - sigma;
            if y <= 0.0 {
                return Ok(0.0);
            }
            let r = fractional_part(y)?;
            lambda * lambda / (2.0 * s) - (1.0 + 2.0 * sigma) * lambda / 2.0
                + (r - r * r + sigma + sigma * sigma) * s / 2.0
        }
        OneDKind::Square => {
            let r = fractional_part(lambda / s + 0.5)?;
            lambda.powi(3) / (3.0 * s) - s * lambda / 12.0
                - r * (1.0 - r) * (1.0 - 2.0 * r) * s * s / 6.0
        }
    })
}

/// Brute-force version of [`one_d_closed`].
pub fn one_d_direct(kind: OneDKind, sigma: f64, sqrt_beta: f64, lambda: f64) -> Result<f64> {
    check_one_d(kind, sigma, sqrt_beta, lambda)?;
    let mut total = 0.0;
    let mut k = 1u64;
    loop {
        let v = lambda - (k as f64 + sigma) * sqrt_beta;
        if v <= 0.0 {
            break;
        }
        total += match kind {
            OneDKind::Linear => v,
            OneDKind::Square => v * v,
        };
        k += 1;
    }
    Ok(total)
}

/// Fast Riesz mean for integer `γ ∈ {1,..,4}`: each column `k₁` is summed in
/// closed form with power sums `Σ_{i<n} i^l`. Iterates over the shorter index.
pub fn riesz_columns(shift: &ShiftPair, gamma: u32, anisotropy: &Anisotropy, lambda: f64) -> Result<f64> {
    if !(1..=4).contains(&gamma) {
        return Err(Error::param("gamma", gamma as f64, "must be an integer in 1..=4"));
    }
    check_lambda(lambda)?;
    let (sigma, tau, sb) = if anisotropy.beta >= 1.0 {
        (shift.sigma, shift.tau, anisotropy.beta.sqrt())
    } else {
        (shift.tau, shift.sigma, (1.0 / anisotropy.beta).sqrt())
    };
    let h = 1.0 / sb;
    let m = gamma as usize;
    const BINOM: [[f64; 5]; 5] = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0],
    ];
    let mut hp = [1.0f64; 5];
    for l in 1..5 {
        hp[l] = hp[l - 1] * h;
    }
    let mut total = 0.0;
    let mut k1 = 1u64;
    loop {
        let u1 = lambda - (k1 as f64 + sigma) * sb;
        if u1 - (1.0 + tau) * h <= 0.0 {
            break;
        }
        let mut n = ((u1 * sb - tau).ceil() - 1.0).max(1.0) as u64;
        while n > 0 && u1 - (n as f64 + tau) * h <= 0.0 {
            n -= 1;
        }
        while u1 - ((n + 1) as f64 + tau) * h > 0.0 {
            n += 1;
        }
        // terms (r + i h)^m, i = 0..n-1, with r the smallest (k₂ = n)
        let r = u1 - (n as f64 + tau) * h;
        let nf = n as f64;
        let s = power_sums(nf);
        let mut col = 0.0;
        let mut rp = 1.0;
        for l in (0..=m).rev() {
            col += BINOM[m][l] * rp * hp[l] * s[l];
            rp *= r;
        }
        total += col;
        k1 += 1;
    }
    Ok(total)
}

/// `S_l(n) = Σ_{i=0}^{n-1} i^l` for `l = 0..4`.
fn power_sums(n: f64) -> [f64; 5] {
    let m = n - 1.0;
    [
        n,
        n * m / 2.0,
        m * n * (2.0 * n - 1.0) / 6.0,
        (n * m / 2.0) * (n * m / 2.0),
        m * n * (2.0 * n - 1.0) * (3.0 * m * m + 3.0 * m - 1.0) / 30.0,
    ]
}

/// Sorted distinct lattice "eigenvalues" `(k₁+σ)√β + (k₂+τ)/√β` below `limit`.
pub(crate) fn eigenvalues_below(shift: &ShiftPair, anisotropy: &Anisotropy, limit: f64) -> Vec<f64> {
    let sb = anisotropy.beta.sqrt();
    let mut out = Vec::new();
    let mut k1 = 1u64;
    loop {
        let e1 = (k1 as f64 + shift.sigma) * sb;
        if e1 + (1.0 + shift.tau) / sb >= limit {
            break;
        }
        let mut k2 = 1u64;
        loop {
            let e = e1 + (k2 as f64 + shift.tau) / sb;
            if e >= limit {
                break;
            }
            out.push(e);
            k2 += 1;
        }
        k1 += 1;
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Which identity to check, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "identity", rename_all = "snake_case")]
pub enum IdentityParams {
    /// `R^{γ₂}(λ) = B(1+γ₁, γ₂-γ₁)^{-1} ∫_0^λ η^{γ₂-γ₁-1} R^{γ₁}(λ-η) dη`
    /// (`γ₁ = 0` reads `R^0` as the counting function).
    AizenmanLieb {
        shift: ShiftPair,
        anisotropy: Anisotropy,
        gamma1: f64,
        gamma2: f64,
        lambda: f64,
    },
    /// `H(t) = t^{1+γ}/Γ(1+γ) ∫_0^∞ R^γ(λ) e^{-λt} dλ`.
    Laplace {
        shift: ShiftPair,
        anisotropy: Anisotropy,
        gamma: f64,
        t: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub discrepancy: f64,
    /// Quadrature error estimate for the integral side.
    pub quadrature_error: f64,
}

const MAX_INTERVALS: usize = 4000;

/// Evaluate both sides of an identity; the integral side by adaptive
/// Gauss–Kronrod split at every lattice crossing.
pub fn verify_identity(params: &IdentityParams, quadrature_tol: f64) -> Result<IdentityReport> {
    if !(quadrature_tol > 0.0) {
        return Err(Error::param("quadrature_tol", quadrature_tol, "must be > 0"));
    }
    match *params {
        IdentityParams::AizenmanLieb {
            shift,
            anisotropy,
            gamma1,
            gamma2,
            lambda,
        } => aizenman_lieb(&shift, &anisotropy, gamma1, gamma2, lambda, quadrature_tol),
        IdentityParams::Laplace {
            shift,
            anisotropy,
            gamma,
            t,
        } => laplace(&shift, &anisotropy, gamma, t, quadrature_tol),
    }
}

fn lower_order(shift: &ShiftPair, gamma: f64, an: &Anisotropy, lambda: f64) -> f64 {
    let lambda = lambda.max(0.0);
    if gamma == 0.0 {
        counting_direct(shift, an, lambda).map(|n| n as f64).unwrap_or(0.0)
    } else {
        riesz_direct(shift, gamma, an, lambda).unwrap_or(0.0)
    }
}

fn aizenman_lieb(
    shift: &ShiftPair,
    an: &Anisotropy,
    g1: f64,
    g2: f64,
    lambda: f64,
    tol: f64,
) -> Result<IdentityReport> {
    if !(g1.is_finite() && g1 >= 0.0 && g2.is_finite() && g2 > g1) {
        return Err(Error::param("gamma2", g2, "requires 0 <= gamma1 < gamma2"));
    }
    check_lambda(lambda)?;
    let lhs = riesz_direct(shift, g2, an, lambda)?;
    let a = g2 - g1;
    let norm = statrs::function::beta::beta(1.0 + g1, a);
    let eigs = eigenvalues_below(shift, an, lambda);
    // Breakpoints in η = λ - e, ascending.
    let mut etas: Vec<f64> = eigs.iter().rev().map(|e| lambda - e).collect();
    etas.insert(0, 0.0);
    etas.push(lambda);
    etas.dedup();
    let (integral, err) = if a < 1.0 {
        // u = η^a removes the η^{a-1} endpoint singularity.
        let pts: Vec<f64> = etas.iter().map(|e| e.powf(a)).collect();
        let mut f = |u: f64| lower_order(shift, g1, an, lambda - u.powf(1.0 / a)) / a;
        quad::integrate_pieces(&mut f, &pts, tol * norm, MAX_INTERVALS)?
    } else {
        let mut f = |eta: f64| eta.powf(a - 1.0) * lower_order(shift, g1, an, lambda - eta);
        quad::integrate_pieces(&mut f, &etas, tol * norm, MAX_INTERVALS)?
    };
    let rhs = integral / norm;
    Ok(IdentityReport {
        lhs,
        rhs,
        discrepancy: (lhs - rhs).abs(),
        quadrature_error: err / norm,
    })
}

fn laplace(shift: &ShiftPair, an: &Anisotropy, gamma: f64, t: f64, tol: f64) -> Result<IdentityReport> {
    check_gamma(gamma)?;
    check_t(t)?;
    let lhs = heat_closed(shift, an, t)?;
    let pref = t.powf(1.0 + gamma) / statrs::function::gamma::gamma(1.0 + gamma);
    let sb = an.beta.sqrt();
    // R^γ(λ) ≤ λ^γ (λ/√β + 1)(λ√β + 1); its Laplace tail beyond L is at most
    // p(L) e^{-Lt} / (t - (γ+2)/L) once L > (γ+2)/t.
    let bound = |l: f64| l.powf(gamma) * (l / sb + 1.0) * (l * sb + 1.0);
    let mut cut = 2.0 * (gamma + 2.0) / t + 1.0;
    while pref * bound(cut) * (-cut * t).exp() / (t - (gamma + 2.0) / cut) > 0.1 * tol {
        cut *= 1.25;
    }
    let eigs = eigenvalues_below(shift, an, cut);
    let mut pts = eigs.clone();
    if pts.is_empty() {
        return Ok(IdentityReport {
            lhs,
            rhs: 0.0,
            discrepancy: lhs.abs(),
            quadrature_error: 0.0,
        });
    }
    pts.push(cut);
    let mut f = |l: f64| riesz_direct(shift, gamma, an, l).unwrap_or(0.0) * (-l * t).exp();
    let (integral, err) = quad::integrate_pieces(&mut f, &pts, 0.9 * tol / pref, MAX_INTERVALS)?;
    let rhs = pref * integral;
    Ok(IdentityReport {
        lhs,
        rhs,
        discrepancy: (lhs - rhs).abs(),
        quadrature_error: pref * err,
    })
}

/// `(R^γ(β, λ) - α₀ λ^{2+γ}) / λ`.
pub fn renormalized_osc(shift: &ShiftPair, gamma: f64, anisotropy: &Anisotropy, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::param("lambda", lambda, "must be finite and > 0"));
    }
    let alpha0 = expansion_coeffs(anisotropy, shift, gamma, 0)?.alpha[0];
    let r = riesz_direct(shift, gamma, anisotropy, lambda)?;
    Ok((r - alpha0 * lambda.powf(2.0 + gamma)) / lambda)
}
