//! Verification suites behind `verify {bounds,identities,asymptotics,limits}`.
//! Suites: `default` (full size) and `quick`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::RunConfig;
use crate::asymptotics::{residual_report, ExpansionSpec};
use crate::bounds::{bound_sweep, BoundId, GridSpec, RandomGrid};
use crate::domain::{Anisotropy, ShiftPair};
use crate::optimize::{maximize_heat, maximize_riesz, predicted_limit, Direction, Limit, Regime};
use crate::sums::{verify_identity, IdentityParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Bounds,
    Identities,
    Asymptotics,
    Limits,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Bounds => "bounds",
            Target::Identities => "identities",
            Target::Asymptotics => "asymptotics",
            Target::Limits => "limits",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

pub fn run_suite(target: Target, suite: &str, cfg: &RunConfig) -> Result<SuiteReport, String> {
    let quick = match suite {
        "default" => false,
        "quick" => true,
        other => return Err(format!("unknown suite {other:?} (expected default or quick)")),
    };
    let checks = match target {
        Target::Bounds => bounds(quick, cfg)?,
        Target::Identities => identities(quick, cfg)?,
        Target::Asymptotics => asymptotics(quick, cfg)?,
        Target::Limits => limits(quick, cfg)?,
    };
    Ok(SuiteReport {
        suite: suite.to_string(),
        checks,
    })
}

fn bounds(quick: bool, cfg: &RunConfig) -> Result<Vec<Check>, String> {
    BoundId::ALL
        .iter()
        .map(|&id| {
            let grid = RandomGrid {
                points: if quick { 500 } else { 10_000 },
                seed: cfg.seed,
                ..RandomGrid::default()
            };
            let r = bound_sweep(id, &GridSpec::Random(grid)).map_err(|e| e.to_string())?;
            Ok(Check {
                name: id.name().to_string(),
                passed: !r.summary.any_failure,
                detail: serde_json::to_value(r.summary).unwrap(),
            })
        })
        .collect()
}

fn identities(quick: bool, cfg: &RunConfig) -> Result<Vec<Check>, String> {
    let draws = if quick { 3 } else { 10 };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for i in 0..2 * draws {
        let shift = ShiftPair::new(rng.gen_range(-0.9..1.0), rng.gen_range(-0.9..1.0)).map_err(|e| e.to_string())?;
        let an = Anisotropy::new(rng.gen_range(0.3f64.ln()..3f64.ln()).exp()).map_err(|e| e.to_string())?;
        let params = if i < draws {
            let g1 = (i % 2) as f64;
            IdentityParams::AizenmanLieb {
                shift,
                anisotropy: an,
                gamma1: g1,
                gamma2: g1 + 1.0,
                lambda: rng.gen_range(1.0..10.0),
            }
        } else {
            IdentityParams::Laplace {
                shift,
                anisotropy: an,
                gamma: rng.gen_range(0.5..2.5),
                t: rng.gen_range(0.5..3.0),
            }
        };
        let r = verify_identity(&params, cfg.quadrature_tol).map_err(|e| e.to_string())?;
        let kind = if i < draws { "aizenman_lieb" } else { "laplace" };
        out.push(Check {
            name: format!("{kind}[{}]", i % draws),
            passed: r.discrepancy < 1e-6,
            detail: json!({ "params": params, "report": r }),
        });
    }
    Ok(out)
}

/// For integer γ and rational β the expansion (with `M ≥ γ + 1`) is exact,
/// so direct sum and expansion must agree to rounding.
fn asymptotics(quick: bool, cfg: &RunConfig) -> Result<Vec<Check>, String> {
    let spec = ExpansionSpec {
        m: cfg.m.max(4),
        ..cfg.expansion()
    };
    let lambdas: &[f64] = if quick { &[20.3, 40.3] } else { &[20.3, 40.3, 80.3, 160.3] };
    let mut out = Vec::new();
    for (s, t, g) in [(0.0, 0.0, 1.0), (-0.5, -0.5, 2.0)] {
        for (mu, nu) in [(1, 1), (1, 2), (2, 3)] {
            let shift = ShiftPair::new(s, t).unwrap();
            let an = Anisotropy::rational(mu, nu).unwrap();
            let rows = residual_report(&shift, g, &an, lambdas, &spec).map_err(|e| e.to_string())?;
            let worst = rows
                .iter()
                .map(|r| r.residual.abs() / r.direct.abs().max(1.0))
                .fold(0.0, f64::max);
            out.push(Check {
                name: format!("exact_expansion(sigma={s},tau={t},gamma={g},beta={mu}/{nu})"),
                passed: worst < 1e-9,
                detail: json!({ "max_relative_residual": worst, "rows": rows }),
            });
        }
    }
    Ok(out)
}

fn limits(quick: bool, cfg: &RunConfig) -> Result<Vec<Check>, String> {
    let opts = cfg.maximize();
    let e = |x: crate::Error| x.to_string();
    let mut out = Vec::new();
    let sp = |a, b| ShiftPair::new(a, b).unwrap();
    let mut push = |name: &str, passed: bool, detail: Value| {
        out.push(Check {
            name: name.to_string(),
            passed,
            detail,
        })
    };

    let s = sp(0.3, 0.7);
    let big = maximize_heat(&s, 100.0, &opts).map_err(e)?;
    push("heat_t_to_inf", (big.beta_star - 17.0 / 13.0).abs() < 1e-3, json!({ "beta_star": big.beta_star }));
    let small = maximize_heat(&s, 0.01, &opts).map_err(e)?;
    push("heat_t_to_0", (small.beta_star - 1.5).abs() < 1e-2, json!({ "beta_star": small.beta_star }));
    for t in [0.1, 1.0, 10.0] {
        let r = maximize_heat(&sp(0.3, 0.3), t, &opts).map_err(e)?;
        push(&format!("heat_equal_shifts(t={t})"), (r.beta_star - 1.0).abs() < 1e-10, json!({ "beta_star": r.beta_star }));
    }
    let d = maximize_heat(&sp(-0.8, 0.0), 0.01, &opts).map_err(e)?;
    push("heat_degenerate", d.degenerate == Some(Direction::ToInfinity), json!({ "degenerate": d.degenerate }));

    let lambda = if quick { 100.0 } else { 200.0 };
    let r = maximize_riesz(&sp(0.0, 1.5), 1.0, lambda, &opts).map_err(e)?;
    let want = match predicted_limit(&sp(0.0, 1.5), Regime::RieszGammaGt0).map_err(e)? {
        Limit::Value { beta } => beta,
        Limit::Degenerate { .. } => f64::NAN,
    };
    push("riesz_interior", (r.beta_star - want).abs() < 0.2, json!({ "lambda": lambda, "beta_star": r.beta_star, "predicted": want }));
    let lambda = if quick { 100.0 } else { 400.0 };
    let r = maximize_riesz(&ShiftPair::oscillator(), 2.0, lambda, &opts).map_err(e)?;
    push("riesz_oscillator", (r.beta_star - 1.0).abs() < 0.1, json!({ "lambda": lambda, "beta_star": r.beta_star }));
    Ok(out)
}
