//! The large-λ expansion of the Riesz mean: polynomial part, oscillatory
//! term for rational and irrational β, and residual studies.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{fractional_part, Anisotropy, ResidualRecord, ShiftPair};
use crate::special::{expansion_coeffs, hurwitz_zeta, LerchUnit};
use crate::sums::riesz_direct;
use crate::{Error, Result};

/// Largest supported expansion order `M`.
pub const MAX_ORDER: usize = 10;
/// Per-sum cap on the number of terms of the irrational oscillatory series.
pub const IRRATIONAL_TERM_CAP: usize = 20_000_000;

/// Knobs of the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionSpec {
    /// Expansion order: the polynomial part runs to `k = M + 1`.
    #[serde(rename = "M")]
    pub m: usize,
    /// Slack exponent in the remainder `o(λ^{-M+γ+δ})`.
    pub delta: f64,
    /// Target for the oscillatory series tails.
    pub series_tol: f64,
    /// `C` in the irrational cutoff `Λ(λ) = C λ^{(M+2-γ)/γ}`.
    pub cutoff_constant: f64,
    /// `|sin(πkβ)|` below this counts as a small denominator.
    pub sin_floor: f64,
}

impl Default for ExpansionSpec {
    fn default() -> Self {
        Self {
            m: 2,
            delta: 0.5,
            series_tol: 1e-10,
            cutoff_constant: 1.0,
            sin_floor: 1e-8,
        }
    }
}

impl ExpansionSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                what: "expansion order M",
                order: self.m,
                cap: MAX_ORDER,
            });
        }
        for (name, v) in [
            ("delta", self.delta),
            ("series_tol", self.series_tol),
            ("cutoff_constant", self.cutoff_constant),
            ("sin_floor", self.sin_floor),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, v, "must be finite and > 0"));
            }
        }
        Ok(())
    }
}

/// Side information from an oscillatory evaluation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OscDiagnostics {
    pub warnings: Vec<String>,
    /// Terms with `|sin(πkβ)|` (or `|sin(πk/β)|`) below `sin_floor`.
    pub small_denominators: usize,
    /// Terms used in the two irrational sums (zero for rational β).
    pub terms: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscValue {
    pub value: f64,
    pub diagnostics: OscDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticValue {
    pub value: f64,
    pub polynomial: f64,
    pub oscillatory: f64,
    pub diagnostics: OscDiagnostics,
}

fn check_inputs(gamma: f64, lambda: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::param("gamma", gamma, "must be finite and > 0"));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::param("lambda", lambda, "must be finite and > 0"));
    }
    Ok(())
}

/// `Σ_{k=0}^{M+1} α_k λ^{2-k+γ}`, Horner in descending powers.
pub fn polynomial_part(shift: &ShiftPair, gamma: f64, anisotropy: &Anisotropy, lambda: f64, m: usize) -> Result<f64> {
    check_inputs(gamma, lambda)?;
    if m > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            what: "expansion order M",
            order: m,
            cap: MAX_ORDER,
        });
    }
    let table = expansion_coeffs(anisotropy, shift, gamma, m + 1)?;
    let mut p = 0.0;
    for &a in &table.alpha {
        p = p * lambda + a;
    }
    Ok(p * lambda.powf(1.0 + gamma - m as f64))
}

/// One sine series of the rational branch, resummed by residue class:
/// `Σ_{k: ν∤k} sin(πk(2x-μ)/ν - π(1+γ)/2) / (k^{1+γ} sin(πkμ/ν))`.
///
/// Writing `k = jν + l`, the signs `(-1)^{jμ}` of numerator and denominator
/// cancel and the sum over `j` is a Lerch transcendent in `e^{2πix}`.
fn rational_sine_series(lerch: &LerchUnit, x: f64, gamma: f64, mu: u64, nu: u64, tol: f64) -> Result<f64> {
    if nu == 1 {
        return Ok(0.0);
    }
    let s = 1.0 + gamma;
    let nuf = nu as f64;
    let xr = x.rem_euclid(nuf);
    let mut total = 0.0;
    for l in 1..nu {
        let lf = l as f64;
        let theta = PI * lf * (2.0 * xr - mu as f64) / nuf - 0.5 * PI * s;
        let den = (PI * ((lf * mu as f64) % (2.0 * nuf)) / nuf).sin();
        let phi = lerch.eval(lf / nuf, tol)? * nuf.powf(-s);
        let rot = num_complex::Complex64::from_polar(1.0, theta);
        total += (rot * phi).im / den;
    }
    Ok(total)
}

/// Oscillatory term for `β = μ/ν`.
pub fn osc_rational(shift: &ShiftPair, gamma: f64, mu: u64, nu: u64, lambda: f64, spec: &ExpansionSpec) -> Result<OscValue> {
    check_inputs(gamma, lambda)?;
    spec.validate()?;
    if mu == 0 || nu == 0 || crate::domain::gcd(mu, nu) != 1 {
        return Err(Error::param("beta", mu as f64 / nu as f64, "mu/nu must be a reduced fraction"));
    }
    let (muf, nuf) = (mu as f64, nu as f64);
    let mn = muf * nuf;
    let x = mn.sqrt() * lambda - muf * shift.sigma - nuf * shift.tau;
    let mut diagnostics = OscDiagnostics::default();
    let mut a = fractional_part(x)?;
    if a == 0.0 {
        diagnostics.warnings.push(format!(
            "x = {x} is an integer; Hurwitz zeta terms evaluated at a = 1"
        ));
        a = 1.0;
    }
    let z0 = hurwitz_zeta(-gamma, a)?;
    let z1 = hurwitz_zeta(-1.0 - gamma, a)?;
    let zeta_part = z0 * lambda / mn.powf(0.5 * (1.0 + gamma))
        - z1 / mn.powf(1.0 + 0.5 * gamma)
        - ((1.0 + 2.0 * shift.sigma) * muf + (1.0 + 2.0 * shift.tau) * nuf) * z0
            / (2.0 * mn.powf(1.0 + 0.5 * gamma));

    let g = statrs::function::gamma::gamma(1.0 + gamma);
    let two_pi_pow = (2.0 * PI).powf(1.0 + gamma);
    let lerch = LerchUnit::new(x, 1.0 + gamma)?;
    let s1 = rational_sine_series(&lerch, x, gamma, mu, nu, spec.series_tol)?;
    let s2 = rational_sine_series(&lerch, x, gamma, nu, mu, spec.series_tol)?;
    let sine_part = (nuf / muf).powf(0.5 * gamma) * g / two_pi_pow * s1
        + (muf / nuf).powf(0.5 * gamma) * g / two_pi_pow * s2;
    Ok(OscValue {
        value: zeta_part + sine_part,
        diagnostics,
    })
}

/// `Σ_{k=1}^{K} sin(πk·y - π(1+γ)/2) / (k^{1+γ} sin(πk·b))`, counting small denominators.
fn irrational_sum(y: f64, b: f64, gamma: f64, count: usize, sin_floor: f64, small: &mut usize) -> f64 {
    let yr = y.rem_euclid(2.0);
    let br = b.rem_euclid(2.0);
    let shift = 0.5 * PI * (1.0 + gamma);
    let mut total = 0.0;
    for k in 1..=count {
        let kf = k as f64;
        let den = (PI * (kf * br).rem_euclid(2.0)).sin();
        if den.abs() < sin_floor {
            *small += 1;
        }
        let num = (PI * (kf * yr).rem_euclid(2.0) - shift).sin();
        total += num / (kf.powf(1.0 + gamma) * den);
    }
    total
}

/// Oscillatory term for irrational β: two sums cut at `Λ/√β` and `Λ√β`.
pub fn osc_irrational(shift: &ShiftPair, gamma: f64, anisotropy: &Anisotropy, lambda: f64, spec: &ExpansionSpec) -> Result<OscValue> {
    check_inputs(gamma, lambda)?;
    spec.validate()?;
    if anisotropy.exact.is_some() {
        return Err(Error::param("beta", anisotropy.beta, "rational anisotropy must use the rational branch"));
    }
    let beta = anisotropy.beta;
    let sb = beta.sqrt();
    let cutoff = spec.cutoff_constant * lambda.powf((spec.m as f64 + 2.0 - gamma) / gamma);
    let mut diagnostics = OscDiagnostics::default();
    let mut count = |v: f64, which: &str| -> usize {
        let k = v.floor();
        if k > IRRATIONAL_TERM_CAP as f64 {
            diagnostics.warnings.push(format!(
                "{which} sum truncated at {IRRATIONAL_TERM_CAP} terms (cutoff asks for {k:e})"
            ));
            IRRATIONAL_TERM_CAP
        } else {
            k.max(0.0) as usize
        }
    };
    let k1 = count(cutoff / sb, "first");
    let k2 = count(cutoff * sb, "second");
    let mut small = 0usize;
    let y1 = 2.0 * lambda * sb - (1.0 + 2.0 * shift.sigma) * beta - 2.0 * shift.tau;
    let y2 = 2.0 * lambda / sb - 2.0 * shift.sigma - (1.0 + 2.0 * shift.tau) / beta;
    let s1 = irrational_sum(y1, beta, gamma, k1, spec.sin_floor, &mut small);
    let s2 = irrational_sum(y2, 1.0 / beta, gamma, k2, spec.sin_floor, &mut small);
    let g = statrs::function::gamma::gamma(1.0 + gamma);
    let two_pi_pow = (2.0 * PI).powf(1.0 + gamma);
    let value = beta.powf(-0.5 * gamma) * g / two_pi_pow * s1 + beta.powf(0.5 * gamma) * g / two_pi_pow * s2;
    diagnostics.small_denominators = small;
    diagnostics.terms = [k1, k2];
    if small > 0 {
        diagnostics
            .warnings
            .push(format!("{small} terms with |sin| below {:e}", spec.sin_floor));
    }
    Ok(OscValue { value, diagnostics })
}

/// Polynomial part plus the oscillatory term for the branch matching `anisotropy`.
pub fn asymptotic_eval(shift: &ShiftPair, gamma: f64, anisotropy: &Anisotropy, lambda: f64, spec: &ExpansionSpec) -> Result<AsymptoticValue> {
    spec.validate()?;
    let polynomial = polynomial_part(shift, gamma, anisotropy, lambda, spec.m)?;
    let osc = match anisotropy.exact {
        Some((mu, nu)) => osc_rational(shift, gamma, mu, nu, lambda, spec)?,
        None => osc_irrational(shift, gamma, anisotropy, lambda, spec)?,
    };
    Ok(AsymptoticValue {
        value: polynomial + osc.value,
        polynomial,
        oscillatory: osc.value,
        diagnostics: osc.diagnostics,
    })
}

/// Direct sum against the expansion on each grid point (in parallel, output in grid order).
pub fn residual_report(shift: &ShiftPair, gamma: f64, anisotropy: &Anisotropy, lambda_grid: &[f64], spec: &ExpansionSpec) -> Result<Vec<ResidualRecord>> {
    spec.validate()?;
    if lambda_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("lambda_grid", f64::NAN, "must be strictly ascending"));
    }
    let exponent = spec.m as f64 - gamma - spec.delta;
    lambda_grid
        .par_iter()
        .map(|&lambda| {
            let direct = riesz_direct(shift, gamma, anisotropy, lambda)?;
            let asymptotic = asymptotic_eval(shift, gamma, anisotropy, lambda, spec)?.value;
            let residual = direct - asymptotic;
            Ok(ResidualRecord {
                lambda,
                direct,
                asymptotic,
                residual,
                normalized: residual * lambda.powf(exponent),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: f64, t: f64) -> ShiftPair {
        ShiftPair::new(s, t).unwrap()
    }

    #[test]
    fn polynomial_examples() {
        let v = polynomial_part(&sp(0.0, 0.0), 2.0, &Anisotropy::new(1.0).unwrap(), 10.0, 0).unwrap();
        assert!((v - 500.0).abs() < 1e-10, "{v}");
        // oscillator: α₀λ^{2+γ} + α₂λ^γ
        let b = 1.7;
        let v = polynomial_part(&ShiftPair::oscillator(), 1.5, &Anisotropy::new(b).unwrap(), 9.0, 2).unwrap();
        let want = 9f64.powf(3.5) / (2.5 * 3.5) - (1.0 + b * b) / (24.0 * b) * 9f64.powf(1.5)
            + expansion_coeffs(&Anisotropy::new(b).unwrap(), &ShiftPair::oscillator(), 1.5, 3).unwrap().alpha[3]
                * 9f64.powf(0.5);
        assert!((v - want).abs() < 1e-9 * want);
    }

    #[test]
    fn integer_gamma_high_terms_vanish() {
        let an = Anisotropy::new(1.3).unwrap();
        let s = sp(0.1, 0.4);
        let a = polynomial_part(&s, 1.0, &an, 17.0, 2).unwrap();
        let b = polynomial_part(&s, 1.0, &an, 17.0, 6).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn unit_ratio_has_only_zeta_terms() {
        let spec = ExpansionSpec::default();
        let s = sp(0.2, 0.1);
        let lam = 12.37;
        let v = osc_rational(&s, 1.5, 1, 1, lam, &spec).unwrap().value;
        let x: f64 = lam - 0.3;
        let a = x - x.floor();
        let want = hurwitz_zeta(-1.5, a).unwrap() * lam
            - hurwitz_zeta(-2.5, a).unwrap()
            - (1.4 + 1.2) * hurwitz_zeta(-1.5, a).unwrap() / 2.0;
        assert!((v - want).abs() < 1e-12 * want.abs().max(1.0), "{v} vs {want}");
    }

    #[test]
    fn sine_series_matches_truncated_sum() {
        // γ = 2 makes the plain series converge fast enough for a brute oracle.
        let (gamma, mu, nu) = (2.0, 2u64, 3u64);
        let x = 7.3;
        let lerch = LerchUnit::new(x, 1.0 + gamma).unwrap();
        let got = rational_sine_series(&lerch, x, gamma, mu, nu, 1e-12).unwrap();
        let mut want = 0.0;
        for k in 1..2_000_000u64 {
            if k % nu == 0 {
                continue;
            }
            let kf = k as f64;
            let num = (PI * kf * (2.0 * x - mu as f64) / nu as f64 - 0.5 * PI * (1.0 + gamma)).sin();
            want += num / (kf.powf(1.0 + gamma) * (PI * kf * mu as f64 / nu as f64).sin());
        }
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn oscillator_expansion_matches_direct() {
        let spec = ExpansionSpec { m: 4, ..Default::default() };
        let an = Anisotropy::rational(1, 1).unwrap();
        let a = asymptotic_eval(&ShiftPair::oscillator(), 2.0, &an, 50.5, &spec).unwrap();
        let d = riesz_direct(&ShiftPair::oscillator(), 2.0, &an, 50.5).unwrap();
        assert!((a.value - d).abs() < 1e-2, "{} vs {d}", a.value);
    }

    #[test]
    fn expansion_beats_next_order() {
        let spec = ExpansionSpec::default();
        let an = Anisotropy::rational(2, 3).unwrap();
        let s = sp(0.0, 0.0);
        let lam = 75.3;
        let a = asymptotic_eval(&s, 1.0, &an, lam, &spec).unwrap();
        let d = riesz_direct(&s, 1.0, &an, lam).unwrap();
        let a2 = expansion_coeffs(&an, &s, 1.0, 2).unwrap().alpha[2];
        assert!((a.value - d).abs() < a2.abs() * lam * 0.1);
    }

    #[test]
    fn irrational_cutoff_count() {
        let spec = ExpansionSpec::default();
        let an = Anisotropy::new(2f64.sqrt()).unwrap();
        let o = osc_irrational(&sp(0.0, 0.0), 2.0, &an, 100.0, &spec).unwrap();
        assert_eq!(o.diagnostics.terms[0], (100.0 / 2f64.powf(0.25)).floor() as usize);
        assert!(osc_irrational(&sp(0.0, 0.0), 2.0, &Anisotropy::rational(1, 2).unwrap(), 10.0, &spec).is_err());
    }

    #[test]
    fn integer_x_warns() {
        let spec = ExpansionSpec::default();
        let o = osc_rational(&sp(0.0, 0.0), 1.0, 1, 1, 20.0, &spec).unwrap();
        assert_eq!(o.diagnostics.warnings.len(), 1);
    }

    #[test]
    fn empty_grid() {
        let r = residual_report(&sp(0.0, 0.0), 1.0, &Anisotropy::new(1.0).unwrap(), &[], &ExpansionSpec::default()).unwrap();
        assert!(r.is_empty());
    }
}
