//! Special functions and the coefficient families of the large-λ expansion.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{fractional_part, Anisotropy, ShiftPair};
use crate::{Error, Result};

/// Largest Bernoulli index served from the cache.
pub const BERNOULLI_CAP: usize = 60;
/// Largest expansion order accepted by [`expansion_coeffs`].
pub const COEFF_CAP: usize = 40;

fn bernoulli_table() -> &'static [f64; BERNOULLI_CAP + 1] {
    static TABLE: OnceLock<[f64; BERNOULLI_CAP + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_{2n} = (-1)^{n+1} 2 (2n)! ζ(2n) / (2π)^{2n}. The plain recurrence
        // loses several digits by B_60; this route keeps full relative precision.
        let mut t = [0.0; BERNOULLI_CAP + 1];
        t[0] = 1.0;
        t[1] = -0.5;
        t[2] = 1.0 / 6.0;
        let mut fact = 2.0f64;
        let mut two_pi_pow = (2.0 * PI).powi(2);
        for n in 2..=BERNOULLI_CAP / 2 {
            let p = 2 * n;
            fact *= ((p - 1) * p) as f64;
            two_pi_pow *= (2.0 * PI).powi(2);
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            t[p] = sign * 2.0 * fact * zeta_even(p) / two_pi_pow;
        }
        t
    })
}

/// ζ(p) for even p ≥ 4 by summation with an Euler–Maclaurin tail.
fn zeta_even(p: usize) -> f64 {
    const K: usize = 50;
    let pf = p as f64;
    let kf = K as f64;
    let tail = kf.powf(1.0 - pf) / (pf - 1.0) + 0.5 * kf.powf(-pf) + pf / 12.0 * kf.powf(-pf - 1.0)
        - pf * (pf + 1.0) * (pf + 2.0) / 720.0 * kf.powf(-pf - 3.0);
    let mut s = tail;
    for k in (1..K).rev() {
        s += (k as f64).powf(-pf);
    }
    s
}

/// The Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Result<f64> {
    if n > BERNOULLI_CAP {
        return Err(Error::OrderTooLarge {
            what: "bernoulli",
            order: n,
            cap: BERNOULLI_CAP,
        });
    }
    Ok(bernoulli_table()[n])
}

/// The Bernoulli polynomial `B_n(x) = Σ_k C(n,k) B_k x^{n-k}`.
pub fn bernoulli_poly(n: usize, x: f64) -> Result<f64> {
    let b = bernoulli_table();
    if n > BERNOULLI_CAP {
        return Err(Error::OrderTooLarge {
            what: "bernoulli_poly",
            order: n,
            cap: BERNOULLI_CAP,
        });
    }
    // Horner in x over descending k: Σ_k C(n,k) B_k x^{n-k}.
    let mut acc = 0.0;
    let mut binom = 1.0;
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        coeffs.push(binom * b[k]);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    for c in coeffs {
        acc = acc * x + c;
    }
    Ok(acc)
}

/// Hurwitz zeta `ζ(s, a)` for real `s ≠ 1` and `a ∈ (0, 1]`, by Euler–Maclaurin.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::param("s", s, "must be finite"));
    }
    if s == 1.0 {
        return Err(Error::ZetaPole);
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::param("a", a, "must lie in (0, 1]"));
    }
    let b = bernoulli_table();
    let neg_int = s <= 0.0 && s == s.floor();
    // For s = -n the Bernoulli tail terminates, so no initial terms are needed.
    let n0 = if neg_int {
        0
    } else if s > 0.0 {
        20
    } else {
        8
    };
    let mut sum = 0.0;
    for k in (0..n0).rev() {
        sum += (k as f64 + a).powf(-s);
    }
    let w = n0 as f64 + a;
    sum += w.powf(1.0 - s) / (s - 1.0) + 0.5 * w.powf(-s);

    // Σ_j B_{2j}/(2j)! (s)_{2j-1} w^{1-s-2j}
    let mut poch = s; // (s)_{2j-1}
    let mut fact = 2.0; // (2j)!
    let mut wp = w.powf(-s - 1.0); // w^{1-s-2j}
    let mut prev = f64::INFINITY;
    for j in 1..=BERNOULLI_CAP / 2 {
        let term = b[2 * j] / fact * poch * wp;
        if neg_int {
            if poch == 0.0 {
                break;
            }
        } else {
            if term.abs() > prev {
                break;
            }
            prev = term.abs();
        }
        sum += term;
        if !neg_int && term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        let k = (2 * j) as f64;
        poch *= (s + k - 1.0) * (s + k);
        fact *= (k + 1.0) * (k + 2.0);
        wp /= w * w;
    }
    Ok(sum)
}

/// Hard cap on the number of directly summed terms in [`LerchUnit`].
const LERCH_DIRECT_CAP: usize = 10_000_000;
const LERCH_MAX_M: usize = 90;

/// `Φ(e^{2πix}, s, a) = Σ_{j≥0} e^{2πijx} (j+a)^{-s}` for fixed `x` and `s > 0`,
/// evaluated for any number of offsets `a > 0`.
///
/// Terms below `J` are summed directly; the tail `z^J Σ_n z^n f(J+n)` with
/// `f(u) = (u+a)^{-s}` is expanded as `Σ_m c_m f^{(m)}(J)`, where `c_m` are the
/// Taylor coefficients of `1/(1 - z e^D)`. Their radius of convergence is
/// `2π·dist(x, Z)`, which fixes `J`. At integer `x` the Hurwitz zeta is used.
#[derive(Debug, Clone)]
pub struct LerchUnit {
    xf: f64,
    s: f64,
    j_cut: usize,
    c: Vec<Complex64>,
}

impl LerchUnit {
    pub fn new(x: f64, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::param("s", s, "must be finite and > 0"));
        }
        let xf = fractional_part(x)?;
        let d = xf.min(1.0 - xf);
        if d == 0.0 {
            if s <= 1.0 {
                return Err(Error::param("s", s, "must be > 1 at integer x"));
            }
            return Ok(Self {
                xf,
                s,
                j_cut: 0,
                c: Vec::new(),
            });
        }
        let rho = 2.0 * PI * d;
        let j_cut = ((40.0 / rho).ceil() as usize).clamp(16, LERCH_DIRECT_CAP);
        let z = Complex64::from_polar(1.0, 2.0 * PI * xf);
        let one = Complex64::new(1.0, 0.0);
        let w = z / (one - z);
        let mut inv_fact = [0.0f64; LERCH_MAX_M + 1];
        inv_fact[0] = 1.0;
        for k in 1..=LERCH_MAX_M {
            inv_fact[k] = inv_fact[k - 1] / k as f64;
        }
        let mut c = Vec::with_capacity(LERCH_MAX_M + 1);
        c.push(one / (one - z));
        for m in 1..=LERCH_MAX_M {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=m {
                acc += c[m - k] * inv_fact[k];
            }
            c.push(w * acc);
        }
        Ok(Self { xf, s, j_cut, c })
    }

    /// `Φ(e^{2πix}, s, a)`. `tol` is the absolute level above which an
    /// unconverged tail is reported as an error.
    pub fn eval(&self, a: f64, tol: f64) -> Result<Complex64> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::param("a", a, "must be finite and > 0"));
        }
        let s = self.s;
        if self.c.is_empty() {
            // Φ(1, s, a) = Σ (j+a)^{-s}; shift a into (0, 1].
            let shift = a.ceil() - 1.0;
            let a0 = a - shift;
            let mut v = hurwitz_zeta(s, a0)?;
            for j in (0..shift as usize).rev() {
                v -= (j as f64 + a0).powf(-s);
            }
            return Ok(Complex64::new(v, 0.0));
        }
        let xf = self.xf;
        let mut direct = Complex64::new(0.0, 0.0);
        for j in 0..self.j_cut {
            let ph = 2.0 * PI * (xf * j as f64).fract();
            direct += Complex64::from_polar((j as f64 + a).powf(-s), ph);
        }
        let u = self.j_cut as f64 + a;
        let mut deriv = u.powf(-s); // f^{(m)}(J)
        let mut tail = self.c[0] * deriv;
        // Envelope over two consecutive terms: at z = -1 every other c_m vanishes.
        let mut prev_mag = tail.norm();
        let mut last = prev_mag;
        let mut converged = false;
        for m in 1..=LERCH_MAX_M {
            deriv *= -(s + (m - 1) as f64) / u;
            let term = self.c[m] * deriv;
            let mag = term.norm();
            let env = mag.max(prev_mag);
            if env > last && m > 4 {
                break;
            }
            tail += term;
            prev_mag = mag;
            last = env;
            if env <= 1e-17 * (direct.norm() + tail.norm()) {
                converged = true;
                break;
            }
        }
        if !converged && last > tol {
            return Err(Error::SeriesNotConverged {
                estimate: last,
                tol,
            });
        }
        let zj = Complex64::from_polar(1.0, 2.0 * PI * (xf * self.j_cut as f64).fract());
        Ok(direct + zj * tail)
    }
}

/// One-shot `Φ(e^{2πix}, s, a)`; see [`LerchUnit`].
pub fn lerch_unit(x: f64, s: f64, a: f64, tol: f64) -> Result<Complex64> {
    LerchUnit::new(x, s)?.eval(a, tol)
}

/// Periodic zeta `F(x, s) = Σ_{k≥1} e^{2πikx} / k^s` for `s > 1`.
pub fn periodic_zeta(x: f64, s: f64, tol: f64) -> Result<Complex64> {
    if !(s.is_finite() && s > 1.0) {
        return Err(Error::param("s", s, "must be > 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tol", tol, "must be > 0"));
    }
    let xf = fractional_part(x)?;
    if xf == 0.0 {
        return Ok(Complex64::new(hurwitz_zeta(s, 1.0)?, 0.0));
    }
    let z = Complex64::from_polar(1.0, 2.0 * PI * xf);
    Ok(z * lerch_unit(xf, s, 1.0, tol)?)
}

/// `Γ(1+γ)/Γ(3+γ-k)`, exactly zero where the reciprocal Gamma vanishes.
pub fn gamma_ratio(gamma: f64, k: usize) -> f64 {
    match k {
        0 => 1.0 / ((1.0 + gamma) * (2.0 + gamma)),
        1 => 1.0 / (1.0 + gamma),
        2 => 1.0,
        _ => {
            // Γ(1+γ)/Γ(1+γ-(k-2)) = γ(γ-1)…(γ-k+3)
            let mut p = 1.0;
            for j in 0..k - 2 {
                p *= gamma - j as f64;
            }
            p
        }
    }
}

/// Coefficients `b_k`, `a_k`, `α_k` of the expansion at fixed parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub beta: f64,
    pub sigma: f64,
    pub tau: f64,
    pub gamma: f64,
    pub b: Vec<f64>,
    pub a: Vec<f64>,
    pub alpha: Vec<f64>,
}

/// Tabulate `b_0..b_K`, `a_0..a_K` and `α_0..α_K`.
pub fn expansion_coeffs(
    anisotropy: &Anisotropy,
    shift: &ShiftPair,
    gamma: f64,
    order: usize,
) -> Result<CoefficientTable> {
    if order > COEFF_CAP {
        return Err(Error::OrderTooLarge {
            what: "expansion_coeffs",
            order,
            cap: COEFF_CAP,
        });
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::param("gamma", gamma, "must be finite and >= 0"));
    }
    let bern = bernoulli_table();
    let beta = anisotropy.beta;
    let sb = beta.sqrt();
    let mut inv_fact = vec![1.0f64; order + 1];
    for k in 1..=order {
        inv_fact[k] = inv_fact[k - 1] / k as f64;
    }
    // t/(e^{ts}-1) = Σ B_n s^{n-1} t^n / n!, so the product of the two
    // series at s = √β and s = 1/√β gives b_k.
    let b: Vec<f64> = (0..=order)
        .map(|k| {
            (0..=k)
                .map(|n| {
                    bern[n] * bern[k - n] * inv_fact[n] * inv_fact[k - n]
                        * sb.powi(n as i32 - (k - n) as i32)
                })
                .sum()
        })
        .collect();
    let c = shift.sigma * sb + shift.tau / sb;
    let a: Vec<f64> = (0..=order)
        .map(|k| {
            let mut acc = 0.0;
            let mut cl = 1.0; // (-c)^l / l!
            for l in 0..=k {
                acc += cl * b[k - l];
                cl *= -c / (l + 1) as f64;
            }
            acc
        })
        .collect();
    let alpha = a
        .iter()
        .enumerate()
        .map(|(k, &ak)| ak * gamma_ratio(gamma, k))
        .collect();
    Ok(CoefficientTable {
        beta,
        sigma: shift.sigma,
        tau: shift.tau,
        gamma,
        b,
        a,
        alpha,
    })
}

/// Coefficients `ρ_0..ρ_K` of `Σ_{k≥1} (λ-k)_+^γ = Σ_k ρ_k λ^{1+γ-k} + O(1)`.
pub fn one_d_rho(gamma: f64, order: usize) -> Result<Vec<f64>> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::param("gamma", gamma, "must be finite and > 0"));
    }
    let cap = gamma.ceil() as usize;
    if order > cap {
        return Err(Error::OrderTooLarge {
            what: "one_d_rho",
            order,
            cap,
        });
    }
    let bern = bernoulli_table();
    let mut rho = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let v = match k {
            0 => 1.0 / (1.0 + gamma),
            1 => -0.5,
            _ if k % 2 == 1 => 0.0,
            _ => {
                let mut p = bern[k];
                for i in 1..=k {
                    p /= i as f64;
                }
                for i in 0..k - 1 {
                    p *= gamma - i as f64;
                }
                p
            }
        };
        rho.push(v);
    }
    Ok(rho)
}
