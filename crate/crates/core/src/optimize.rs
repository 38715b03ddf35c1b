//! Maximization over the anisotropy β of Riesz means `R^γ(·, λ)` and heat
//! traces `H(·, t)`, maximizer trajectories and the predicted limits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bracket, Bracket};
use crate::domain::{Anisotropy, ShiftClass, ShiftPair};
use crate::sums::{heat_closed, riesz_columns, riesz_direct};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ToZero,
    ToInfinity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximizerResult {
    pub beta_star: f64,
    pub value: f64,
    /// Search interval in β; `None` when every β is a maximizer.
    pub bracket: Option<(f64, f64)>,
    pub grid_points: usize,
    pub refinements: usize,
    /// Local maxima `(β, value)` within `cluster_tol` of the best, ascending in β.
    pub near_optima: Vec<(f64, f64)>,
    pub degenerate: Option<Direction>,
    /// `R^γ(·, λ) ≡ 0`.
    pub all_beta: bool,
    /// The grid needed more points than `grid_cap`.
    pub resolution_limited: bool,
    /// Largest value seen on the scan grid (`NaN` when there was no scan).
    pub sampled_max: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaximizeOptions {
    /// Relative value tolerance defining near-optima.
    pub cluster_tol: f64,
    /// Riesz grid density: points per unit of `λ·(√β_hi - √β_lo)`.
    pub points_per_unit: f64,
    pub min_grid: usize,
    pub grid_cap: usize,
    /// Number of grid local maxima refined by golden section.
    pub refine_candidates: usize,
    /// Golden-section stopping width in log β.
    pub refine_tol: f64,
    /// Initial half-width (multiplicative) of the heat scan window around β = 1.
    pub heat_window: f64,
    pub heat_grid: usize,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            cluster_tol: 1e-9,
            points_per_unit: 8.0,
            min_grid: 1025,
            grid_cap: 200_000,
            refine_candidates: 16,
            refine_tol: 1e-12,
            heat_window: 100.0,
            heat_grid: 4001,
        }
    }
}

impl MaximizeOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.cluster_tol >= 0.0 && self.cluster_tol < 1.0) {
            return Err(Error::param("cluster_tol", self.cluster_tol, "must lie in [0, 1)"));
        }
        if !(self.points_per_unit > 0.0) {
            return Err(Error::param("points_per_unit", self.points_per_unit, "must be > 0"));
        }
        if self.min_grid < 3 || self.grid_cap < self.min_grid {
            return Err(Error::param("grid_cap", self.grid_cap as f64, "need 3 <= min_grid <= grid_cap"));
        }
        if self.refine_candidates == 0 {
            return Err(Error::param("refine_candidates", 0.0, "must be >= 1"));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::param("refine_tol", self.refine_tol, "must be > 0"));
        }
        if !(self.heat_window > 1.0 && self.heat_window.is_finite()) {
            return Err(Error::param("heat_window", self.heat_window, "must be finite and > 1"));
        }
        if self.heat_grid < 3 {
            return Err(Error::param("heat_grid", self.heat_grid as f64, "must be >= 3"));
        }
        Ok(())
    }
}

const INVPHI: f64 = 0.618_033_988_749_894_9;

/// A refined point replaces its grid point only if it is better by more than
/// this relative amount; flat maxima otherwise drift with rounding noise.
const NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Golden-section maximization of `f` on `[a, b]`; returns `(x, f(x), evaluations)`.
fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64, usize) {
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evals = 2;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    if fc >= fd {
        (c, fc, evals)
    } else {
        (d, fd, evals)
    }
}

/// Uniform grid on `[lo, hi]` with `n` points, built from the midpoint so that
/// a bracket symmetric in log β gives an exactly symmetric grid.
fn symmetric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let m = (n - 1) as f64 / 2.0;
    (0..n).map(|i| mid + half * ((i as f64 - m) / m)).collect()
}

/// Indices of grid local maxima (endpoints included), best first; ties go to
/// the smaller index.
fn local_maxima(v: &[f64]) -> Vec<usize> {
    let n = v.len();
    let mut idx: Vec<usize> = (0..n)
        .filter(|&i| (i == 0 || v[i] >= v[i - 1]) && (i + 1 == n || v[i] >= v[i + 1]))
        .collect();
    idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
    idx
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] > v[best] {
            best = i;
        }
    }
    best
}

fn riesz_eval(shift: &ShiftPair, gamma: f64, lambda: f64, beta: f64) -> f64 {
    let an = Anisotropy {
        beta,
        exact: None,
    };
    let fast = (gamma == gamma.round() && (1.0..=4.0).contains(&gamma)).then_some(gamma as u32);
    let r = match fast {
        Some(g) => riesz_columns(shift, g, &an, lambda),
        None => riesz_direct(shift, gamma, &an, lambda),
    };
    r.unwrap_or(f64::NAN)
}

fn riesz_reference(shift: &ShiftPair, gamma: f64, lambda: f64, beta: f64) -> Result<f64> {
    riesz_direct(shift, gamma, &Anisotropy::new(beta)?, lambda)
}

/// Maximize `β ↦ R^γ(β, λ)` over the a-priori bracket.
pub fn maximize_riesz(shift: &ShiftPair, gamma: f64, lambda: f64, opts: &MaximizeOptions) -> Result<MaximizerResult> {
    opts.validate()?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::param("gamma", gamma, "must be finite and > 0"));
    }
    let (lo, hi) = match bracket(shift, lambda)? {
        Bracket::AllBeta => {
            return Ok(MaximizerResult {
                beta_star: 1.0,
                value: 0.0,
                bracket: None,
                grid_points: 0,
                refinements: 0,
                near_optima: Vec::new(),
                degenerate: None,
                all_beta: true,
                resolution_limited: false,
                sampled_max: f64::NAN,
                warnings: vec!["lambda <= 2*sqrt((1+sigma)(1+tau)): R vanishes for every beta".into()],
            })
        }
        Bracket::Interval { lo, hi } => (lo, hi),
    };
    let mut warnings = Vec::new();
    if shift.classify() == ShiftClass::Degenerate {
        warnings.push("shift outside the convergent region: maximizers degenerate as lambda grows".into());
    }

    let wanted = (opts.points_per_unit * lambda * (hi.sqrt() - lo.sqrt())).ceil();
    let resolution_limited = wanted > opts.grid_cap as f64;
    let mut n = (wanted.max(opts.min_grid as f64) as usize).min(opts.grid_cap);
    // odd count keeps the log-β midpoint on the grid
    if n % 2 == 0 {
        n = if n < opts.grid_cap { n + 1 } else { n - 1 };
    }
    if resolution_limited {
        warnings.push(format!("grid capped at {} points ({} wanted)", opts.grid_cap, wanted));
    }
    let (ulo, uhi) = if shift.sigma == shift.tau {
        (-hi.ln(), hi.ln())
    } else {
        (lo.ln(), hi.ln())
    };
    let spacing = (uhi - ulo) / (n - 1) as f64;
    let us = symmetric_grid(ulo, uhi, n);
    let f = |u: f64| riesz_eval(shift, gamma, lambda, u.exp());
    let vals: Vec<f64> = us.par_iter().map(|&u| f(u)).collect();
    if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
        return Err(Error::param("beta", us[i].exp(), "Riesz mean evaluation failed"));
    }
    let sampled_max = vals[argmax(&vals)];

    let cands: Vec<usize> = local_maxima(&vals).into_iter().take(opts.refine_candidates).collect();
    let refined: Vec<(f64, f64, usize)> = cands
        .par_iter()
        .map(|&i| {
            let a = us[i.saturating_sub(1)];
            let b = us[(i + 1).min(n - 1)];
            let (u, v, e) = golden_max(&f, a, b, opts.refine_tol);
            if v > vals[i] + NOISE_FLOOR * vals[i].abs() {
                (u, v, e)
            } else {
                (us[i], vals[i], e)
            }
        })
        .collect();
    let refinements = refined.iter().map(|r| r.2).sum();
    let mut refined: Vec<(f64, f64)> = refined.into_iter().map(|r| (r.0, r.1)).collect();
    let symmetric = shift.sigma == shift.tau;
    if symmetric {
        // fold onto u <= 0, merge there, mirror afterwards
        for r in refined.iter_mut() {
            if r.0 > 0.0 {
                *r = (-r.0, f(-r.0));
            }
        }
    }

    let best = refined.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let mut near: Vec<(f64, f64)> = refined
        .into_iter()
        .filter(|r| r.1 >= best - opts.cluster_tol * best.abs())
        .collect();
    near.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (u, v) in near {
        match merged.last_mut() {
            // refinements from neighbouring cells that met at the same peak
            Some(last) if u - last.0 <= spacing => {
                if v > last.1 {
                    *last = (u, v);
                }
            }
            _ => merged.push((u, v)),
        }
    }
    if symmetric {
        let mirrored: Vec<(f64, f64)> = merged.iter().rev().filter(|r| r.0 < 0.0).map(|&(u, v)| (-u, v)).collect();
        merged.extend(mirrored);
    }
    let near_optima = merged
        .iter()
        .map(|&(u, _)| {
            let b = u.exp();
            Ok((b, riesz_reference(shift, gamma, lambda, b)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (beta_star, value) = near_optima[0];
    Ok(MaximizerResult {
        beta_star,
        value,
        bracket: Some((lo, hi)),
        grid_points: n,
        refinements,
        near_optima,
        degenerate: None,
        all_beta: false,
        resolution_limited,
        sampled_max,
        warnings,
    })
}

/// `(σ - e^{tx}(1+σ))/(e^{tx}-1) - x^{-2}(τ - e^{t/x}(1+τ))/(e^{t/x}-1)`,
/// i.e. `t^{-1} ∂_x log H(x², t)`, written with `expm1` so it stays finite for
/// large `tx` or `t/x`.
pub fn heat_stationarity(shift: &ShiftPair, x: f64, t: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::param("x", x, "must be finite and > 0"));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::param("t", t, "must be finite and > 0"));
    }
    let a = -(1.0 + shift.sigma) - 1.0 / (t * x).exp_m1();
    let b = (1.0 + shift.tau + 1.0 / (t / x).exp_m1()) / (x * x);
    Ok(a + b)
}

fn log_heat(shift: &ShiftPair, t: f64, u: f64) -> f64 {
    let x = (0.5 * u).exp();
    -t * ((1.0 + shift.sigma) * x + (1.0 + shift.tau) / x) - (-(-t * x).exp_m1()).ln() - (-(-t / x).exp_m1()).ln()
}

/// Maximize `β ↦ H(β, t)`.
pub fn maximize_heat(shift: &ShiftPair, t: f64, opts: &MaximizeOptions) -> Result<MaximizerResult> {
    opts.validate()?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::param("t", t, "must be finite and > 0"));
    }
    if shift.sigma >= -0.5 && shift.tau >= -0.5 {
        heat_root(shift, t)
    } else {
        heat_scan(shift, t, opts)
    }
}

/// Unique stationary point for σ, τ ≥ -1/2: g > 0 near x = 0, g → -(1+σ) < 0.
fn heat_root(shift: &ShiftPair, t: f64) -> Result<MaximizerResult> {
    let g = |x: f64| heat_stationarity(shift, x, t);
    let (mut lo, mut hi) = (0.5, 2.0);
    let mut glo = g(lo)?;
    let mut ghi = g(hi)?;
    let mut widen = 0;
    while glo < 0.0 || ghi > 0.0 {
        if glo < 0.0 {
            lo *= 0.25;
            glo = g(lo)?;
        }
        if ghi > 0.0 {
            hi *= 4.0;
            ghi = g(hi)?;
        }
        widen += 1;
        if widen > 400 {
            return Err(Error::SeriesNotConverged {
                estimate: hi,
                tol: 0.0,
            });
        }
    }
    let bracket = (lo * lo, hi * hi);
    // Illinois-modified regula falsi with a bisection fallback.
    let mut iters = 0;
    let mut x = 0.5 * (lo + hi);
    let mut side = 0i8;
    let (mut flo, mut fhi) = (glo, ghi);
    while hi - lo > 4.0 * f64::EPSILON * hi && iters < 400 {
        iters += 1;
        let sec = (lo * fhi - hi * flo) / (fhi - flo);
        x = if sec.is_finite() && sec > lo && sec < hi && iters % 4 != 0 {
            sec
        } else {
            0.5 * (lo + hi)
        };
        let gx = g(x)?;
        if gx == 0.0 {
            lo = x;
            hi = x;
            break;
        }
        if gx > 0.0 {
            lo = x;
            flo = gx;
            if side == 1 {
                fhi *= 0.5;
            }
            side = 1;
        } else {
            hi = x;
            fhi = gx;
            if side == -1 {
                flo *= 0.5;
            }
            side = -1;
        }
    }
    if lo == hi {
        x = lo;
    }
    let beta_star = x * x;
    let value = heat_closed(shift, &Anisotropy::new(beta_star)?, t)?;
    Ok(MaximizerResult {
        beta_star,
        value,
        bracket: Some(bracket),
        grid_points: 0,
        refinements: iters,
        near_optima: vec![(beta_star, value)],
        degenerate: None,
        all_beta: false,
        resolution_limited: false,
        sampled_max: f64::NAN,
        warnings: Vec::new(),
    })
}

/// Grid scan in log β over `[1/W, W]`; if the argmax sits on a boundary the
/// window is widened once to `[1/W², W²]`, and a second hit on the same
/// boundary flags degeneration.
fn heat_scan(shift: &ShiftPair, t: f64, opts: &MaximizeOptions) -> Result<MaximizerResult> {
    let f = |u: f64| log_heat(shift, t, u);
    let mut w = opts.heat_window.ln();
    let mut prev_edge: Option<Direction> = None;
    let mut total_points = 0;
    let mut warnings = Vec::new();
    loop {
        let us = symmetric_grid(-w, w, opts.heat_grid | 1);
        let n = us.len();
        total_points += n;
        let vals: Vec<f64> = us.par_iter().map(|&u| f(u)).collect();
        let i = argmax(&vals);
        let edge = if i == 0 {
            Some(Direction::ToZero)
        } else if i == n - 1 {
            Some(Direction::ToInfinity)
        } else {
            None
        };
        let bracket = ((-w).exp(), w.exp());
        match edge {
            Some(d) if prev_edge == Some(d) => {
                let beta_star = us[i].exp();
                let value = heat_closed(shift, &Anisotropy::new(beta_star)?, t)?;
                warnings.push("maximum on the scan boundary after widening: degenerate".into());
                return Ok(MaximizerResult {
                    beta_star,
                    value,
                    bracket: Some(bracket),
                    grid_points: total_points,
                    refinements: 0,
                    near_optima: vec![(beta_star, value)],
                    degenerate: Some(d),
                    all_beta: false,
                    resolution_limited: false,
                    sampled_max: value,
                    warnings,
                });
            }
            Some(d) => {
                prev_edge = Some(d);
                w *= 2.0;
            }
            None => {
                let cands: Vec<usize> = local_maxima(&vals).into_iter().take(opts.refine_candidates).collect();
                let mut refinements = 0;
                let mut found: Vec<(f64, f64)> = Vec::new();
                for &c in &cands {
                    let (u, v, e) = golden_max(&f, us[c.saturating_sub(1)], us[(c + 1).min(n - 1)], opts.refine_tol);
                    refinements += e;
                    found.push(if v >= vals[c] { (u, v) } else { (us[c], vals[c]) });
                }
                let best = found.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
                // log-values: a relative tolerance on H is an absolute one on log H
                let mut near: Vec<(f64, f64)> = found
                    .into_iter()
                    .filter(|p| p.1 >= best - opts.cluster_tol)
                    .collect();
                near.sort_by(|a, b| a.0.total_cmp(&b.0));
                let near_optima = near
                    .iter()
                    .map(|&(u, _)| {
                        let b = u.exp();
                        Ok((b, heat_closed(shift, &Anisotropy::new(b)?, t)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let (beta_star, value) = near_optima[0];
                return Ok(MaximizerResult {
                    beta_star,
                    value,
                    bracket: Some(bracket),
                    grid_points: total_points,
                    refinements,
                    near_optima,
                    degenerate: None,
                    all_beta: false,
                    resolution_limited: false,
                    sampled_max: vals[i].exp(),
                    warnings,
                });
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    Riesz,
    Heat,
}

/// One maximization per grid value (λ for Riesz, t for heat). The grid must
/// be strictly monotone.
pub fn trajectory(
    kind: TrajectoryKind,
    shift: &ShiftPair,
    gamma: Option<f64>,
    grid: &[f64],
    opts: &MaximizeOptions,
) -> Result<Vec<(f64, MaximizerResult)>> {
    let up = grid.windows(2).all(|w| w[0] < w[1]);
    let down = grid.windows(2).all(|w| w[0] > w[1]);
    if !(up || down) {
        return Err(Error::Mismatch("trajectory grid must be strictly monotone".into()));
    }
    grid.iter()
        .map(|&p| {
            let r = match kind {
                TrajectoryKind::Riesz => {
                    let g = gamma.ok_or_else(|| Error::Mismatch("riesz trajectory needs gamma".into()))?;
                    maximize_riesz(shift, g, p, opts)?
                }
                TrajectoryKind::Heat => maximize_heat(shift, p, opts)?,
            };
            Ok((p, r))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    RieszGammaGt0,
    OscillatorGammaGt1,
    HeatTTo0,
    HeatTToInf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Limit {
    Value { beta: f64 },
    /// `direction` is `None` when both ends are favoured (σ, τ < -1/2).
    Degenerate { direction: Option<Direction> },
}

/// Direction favoured by the first-order term `-(1/2+σ)√β - (1/2+τ)/√β`.
fn degenerate_direction(shift: &ShiftPair) -> Option<Direction> {
    let (a, b) = (0.5 + shift.sigma, 0.5 + shift.tau);
    let inf = a < 0.0 || (a == 0.0 && b > 0.0);
    let zero = b < 0.0 || (b == 0.0 && a > 0.0);
    match (inf, zero) {
        (true, false) => Some(Direction::ToInfinity),
        (false, true) => Some(Direction::ToZero),
        _ => None,
    }
}

pub fn predicted_limit(shift: &ShiftPair, regime: Regime) -> Result<Limit> {
    let (s, t) = (shift.sigma, shift.tau);
    let class = shift.classify();
    let interior = Limit::Value {
        beta: (1.0 + 2.0 * t) / (1.0 + 2.0 * s),
    };
    let degenerate = Limit::Degenerate {
        direction: degenerate_direction(shift),
    };
    match regime {
        Regime::RieszGammaGt0 => match class {
            ShiftClass::Interior => Ok(interior),
            ShiftClass::Degenerate => Ok(degenerate),
            ShiftClass::Oscillator => Err(Error::Mismatch(
                "oscillator shift: use the oscillator_gamma_gt1 regime".into(),
            )),
        },
        Regime::OscillatorGammaGt1 => match class {
            ShiftClass::Oscillator => Ok(Limit::Value { beta: 1.0 }),
            _ => Err(Error::Mismatch("oscillator_gamma_gt1 requires sigma = tau = -1/2".into())),
        },
        Regime::HeatTToInf => Ok(Limit::Value {
            beta: (1.0 + t) / (1.0 + s),
        }),
        Regime::HeatTTo0 => {
            if class == ShiftClass::Interior {
                Ok(interior)
            } else if s == t && s >= -0.5 {
                Ok(Limit::Value { beta: 1.0 })
            } else {
                Ok(degenerate)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: f64, t: f64) -> ShiftPair {
        ShiftPair::new(s, t).unwrap()
    }

    #[test]
    fn stationarity_examples() {
        assert_eq!(heat_stationarity(&sp(0.4, 0.4), 1.0, 3.0).unwrap(), 0.0);
        assert!(heat_stationarity(&sp(0.0, 1.0), 1.0, 1.0).unwrap() > 0.0);
        assert!(heat_stationarity(&sp(0.0, 1.0), 2.0, 1.0).unwrap() < 0.0);
        assert!(heat_stationarity(&sp(0.0, 1.0), 50.0, 1000.0).unwrap().is_finite());
    }

    #[test]
    fn heat_equal_shifts() {
        for t in [0.1, 1.0, 10.0] {
            let r = maximize_heat(&sp(0.3, 0.3), t, &MaximizeOptions::default()).unwrap();
            assert!((r.beta_star - 1.0).abs() < 1e-10, "{t}: {}", r.beta_star);
        }
    }

    #[test]
    fn heat_degenerate() {
        let r = maximize_heat(&sp(-0.8, 0.0), 0.01, &MaximizeOptions::default()).unwrap();
        assert_eq!(r.degenerate, Some(Direction::ToInfinity));
    }

    #[test]
    fn heat_scan_interior() {
        // large t: converges even with a shift below -1/2
        let r = maximize_heat(&sp(-0.8, 0.0), 50.0, &MaximizeOptions::default()).unwrap();
        assert_eq!(r.degenerate, None);
        assert!((r.beta_star - 5.0).abs() < 0.05, "{}", r.beta_star);
    }

    #[test]
    fn riesz_all_beta() {
        let r = maximize_riesz(&sp(0.0, 0.0), 1.0, 1.5, &MaximizeOptions::default()).unwrap();
        assert!(r.all_beta);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn riesz_small() {
        let o = MaximizeOptions::default();
        let r = maximize_riesz(&sp(0.0, 0.0), 1.0, 40.0, &o).unwrap();
        assert!((r.beta_star - 1.0).abs() < 0.1, "{r:?}");
        let (lo, hi) = r.bracket.unwrap();
        assert!(lo < r.beta_star && r.beta_star < hi);
        assert!(r.value >= r.sampled_max * (1.0 - 1e-12));
    }

    #[test]
    fn limits() {
        assert_eq!(predicted_limit(&sp(0.0, 1.5), Regime::RieszGammaGt0).unwrap(), Limit::Value { beta: 4.0 });
        assert_eq!(
            predicted_limit(&ShiftPair::oscillator(), Regime::OscillatorGammaGt1).unwrap(),
            Limit::Value { beta: 1.0 }
        );
        assert_eq!(
            predicted_limit(&sp(-0.7, 0.0), Regime::RieszGammaGt0).unwrap(),
            Limit::Degenerate { direction: Some(Direction::ToInfinity) }
        );
        assert!(predicted_limit(&sp(0.0, 0.0), Regime::OscillatorGammaGt1).is_err());
    }
}
