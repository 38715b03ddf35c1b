use proptest::prelude::*;

use riesz_lattice::asymptotics::{asymptotic_eval, osc_rational, residual_report, ExpansionSpec};
use riesz_lattice::bounds::{bracket, check_bound, BoundId, Bracket};
use riesz_lattice::domain::rational_detect;
use riesz_lattice::optimize::{
    heat_stationarity, maximize_heat, maximize_riesz, trajectory, MaximizeOptions, TrajectoryKind,
};
use riesz_lattice::special::{bernoulli_poly, expansion_coeffs, hurwitz_zeta};
use riesz_lattice::sums::{counting_direct, heat_closed, heat_direct, one_d_closed, riesz_direct, OneDKind};
use riesz_lattice::{fractional_part, Anisotropy, ShiftClass, ShiftPair};

fn shift() -> impl Strategy<Value = ShiftPair> {
    (-0.95f64..2.0, -0.95f64..2.0).prop_map(|(s, t)| ShiftPair::new(s, t).unwrap())
}

fn beta() -> impl Strategy<Value = f64> {
    (0.1f64.ln()..10f64.ln()).prop_map(f64::exp)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Independent enumerator: every (k₁, k₂) in a box, no early exits.
fn count_brute(s: &ShiftPair, b: f64, lambda: f64) -> u64 {
    let sb = b.sqrt();
    let k1_max = (lambda / sb).ceil() as u64 + 2;
    let k2_max = (lambda * sb).ceil() as u64 + 2;
    let mut n = 0;
    for k1 in 1..=k1_max {
        for k2 in 1..=k2_max {
            if (k1 as f64 + s.sigma) * sb + (k2 as f64 + s.tau) / sb <= lambda {
                n += 1;
            }
        }
    }
    n
}

fn riesz_brute(s: &ShiftPair, gamma: f64, b: f64, lambda: f64) -> f64 {
    let sb = b.sqrt();
    let k1_max = (lambda / sb).ceil() as u64 + 2;
    let k2_max = (lambda * sb).ceil() as u64 + 2;
    let mut total = 0.0;
    for k1 in 1..=k1_max {
        for k2 in 1..=k2_max {
            let v = lambda - (k1 as f64 + s.sigma) * sb - (k2 as f64 + s.tau) / sb;
            if v > 0.0 {
                total += v.powf(gamma);
            }
        }
    }
    total
}

fn one_d_brute(square: bool, sigma: f64, sb: f64, lambda: f64) -> f64 {
    (1..100_000u64)
        .map(|k| lambda - (k as f64 + sigma) * sb)
        .take_while(|&v| v > 0.0)
        .map(|v| if square { v * v } else { v })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn classification_is_total(s in -0.99f64..3.0, t in -0.99f64..3.0) {
        let c = ShiftPair::new(s, t).unwrap().classify();
        let interior = s > -0.5 && t > -0.5;
        let osc = s == -0.5 && t == -0.5;
        prop_assert_eq!(c == ShiftClass::Interior, interior);
        prop_assert_eq!(c == ShiftClass::Oscillator, osc);
        prop_assert_eq!(c == ShiftClass::Degenerate, !interior && !osc);
    }

    #[test]
    fn rational_roundtrip(mu in 1u64..500, nu in 1u64..500) {
        let g = gcd(mu, nu);
        let a = Anisotropy::rational(mu, nu).unwrap();
        let (m, n) = rational_detect(a.beta, 1000).unwrap();
        prop_assert_eq!((m, n), (mu / g, nu / g));
        prop_assert_eq!(m as f64 / n as f64, a.beta);
    }

    #[test]
    fn hurwitz_bernoulli(n in 0usize..=10, a in 0.01f64..1.0) {
        let want = -bernoulli_poly(n + 1, a).unwrap() / (n + 1) as f64;
        prop_assert!((hurwitz_zeta(-(n as f64), a).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn coefficient_symmetry(s in shift(), b in beta(), gamma in 0.0f64..4.0) {
        let x = expansion_coeffs(&Anisotropy::new(b).unwrap(), &s, gamma, 12).unwrap();
        let y = expansion_coeffs(&Anisotropy::new(b).unwrap().inverse(), &s.swapped(), gamma, 12).unwrap();
        for k in 0..=12 {
            prop_assert!(rel_close(x.b[k], y.b[k], 1e-12), "b_{}", k);
            prop_assert!(rel_close(x.a[k], y.a[k], 1e-12), "a_{}", k);
            prop_assert!(rel_close(x.alpha[k], y.alpha[k], 1e-12), "alpha_{}", k);
        }
    }

    #[test]
    fn alpha_lipschitz(s in shift(), b in 0.5f64..2.0, gamma in 0.1f64..3.0) {
        let h = 1e-6;
        let x = expansion_coeffs(&Anisotropy::new(b).unwrap(), &s, gamma, 6).unwrap();
        let y = expansion_coeffs(&Anisotropy::new(b + h).unwrap(), &s, gamma, 6).unwrap();
        for k in 0..=6 {
            prop_assert!((x.alpha[k] - y.alpha[k]).abs() <= 100.0 * h, "alpha_{}", k);
        }
    }

    #[test]
    fn evaluator_swap_symmetry(s in shift(), b in beta(), gamma in 0.1f64..3.0, lambda in 0.0f64..30.0, t in 0.1f64..5.0) {
        let a = Anisotropy::new(b).unwrap();
        let ai = a.inverse();
        let q = s.swapped();
        prop_assert!(rel_close(riesz_direct(&s, gamma, &a, lambda).unwrap(), riesz_direct(&q, gamma, &ai, lambda).unwrap(), 1e-13));
        // boundary-inclusive counts may differ only when a point sits on the line to rounding
        let (n1, n2) = (counting_direct(&s, &a, lambda).unwrap(), counting_direct(&q, &ai, lambda).unwrap());
        prop_assert_eq!(n1, n2);
        prop_assert!(rel_close(heat_closed(&s, &a, t).unwrap(), heat_closed(&q, &ai, t).unwrap(), 1e-13));
        prop_assert!(rel_close(heat_direct(&s, &a, t, 1e-15).unwrap(), heat_direct(&q, &ai, t, 1e-15).unwrap(), 1e-13));
    }

    #[test]
    fn monotonicity(s in shift(), b in beta(), gamma in 0.1f64..3.0, l1 in 0.0f64..30.0, dl in 0.0f64..5.0, t1 in 0.1f64..5.0, dt in 0.01f64..2.0) {
        let a = Anisotropy::new(b).unwrap();
        prop_assert!(riesz_direct(&s, gamma, &a, l1 + dl).unwrap() >= riesz_direct(&s, gamma, &a, l1).unwrap());
        prop_assert!(counting_direct(&s, &a, l1 + dl).unwrap() >= counting_direct(&s, &a, l1).unwrap());
        prop_assert!(heat_closed(&s, &a, t1 + dt).unwrap() < heat_closed(&s, &a, t1).unwrap());
    }

    #[test]
    fn counting_matches_enumeration(s in shift(), b in beta(), lambda in 0.0f64..40.0) {
        prop_assert_eq!(counting_direct(&s, &Anisotropy::new(b).unwrap(), lambda).unwrap(), count_brute(&s, b, lambda));
    }

    #[test]
    fn one_d_closed_vs_brute(sigma in -0.99f64..2.0, b in beta(), lambda in 0.0f64..40.0) {
        let sb = b.sqrt();
        let lin = one_d_closed(OneDKind::Linear, sigma, sb, lambda).unwrap();
        prop_assert!((lin - one_d_brute(false, sigma, sb, lambda)).abs() <= 1e-10 * lin.abs().max(1.0));
        let sq = one_d_closed(OneDKind::Square, -0.5, sb, lambda).unwrap();
        prop_assert!((sq - one_d_brute(true, -0.5, sb, lambda)).abs() <= 1e-10 * sq.abs().max(1.0));
    }

    #[test]
    fn expansion_swap_symmetry(s in shift(), mu in 1u64..6, nu in 1u64..6, gamma in 0.3f64..3.0, lambda in 5.0f64..60.0) {
        let spec = ExpansionSpec::default();
        let a = Anisotropy::rational(mu, nu).unwrap();
        let x = asymptotic_eval(&s, gamma, &a, lambda, &spec).unwrap();
        let y = asymptotic_eval(&s.swapped(), gamma, &a.inverse(), lambda, &spec).unwrap();
        prop_assert!((x.value - y.value).abs() <= 1e-10 * x.value.abs().max(1.0) + 10.0 * spec.series_tol);
        // exact rationals never take the irrational branch
        prop_assert_eq!(x.diagnostics.terms, [0, 0]);
    }

    #[test]
    fn osc_period(s in shift(), mu in 1u64..5, nu in 1u64..5, gamma in 0.3f64..3.0, lambda in 5.0f64..40.0) {
        prop_assume!(gcd(mu, nu) == 1);
        let spec = ExpansionSpec::default();
        let r = ((mu * nu) as f64).sqrt();
        let x = r * lambda - mu as f64 * s.sigma - nu as f64 * s.tau;
        let frac = fractional_part(x).unwrap();
        prop_assume!(frac > 0.05 && frac < 0.95);
        // λ ↦ λ + √(μν) moves x by μν: sine series and ζ arguments repeat, the
        // λ-prefactor term grows by ζ(-γ,{x})·√(μν)/(μν)^{(1+γ)/2}
        let a = osc_rational(&s, gamma, mu, nu, lambda, &spec).unwrap().value;
        let b = osc_rational(&s, gamma, mu, nu, lambda + r, &spec).unwrap().value;
        let want = hurwitz_zeta(-gamma, frac).unwrap() * r / ((mu * nu) as f64).powf((1.0 + gamma) / 2.0);
        prop_assert!((b - a - want).abs() <= 1e-8 * a.abs().max(1.0), "{} vs {}", b - a, want);
    }

    #[test]
    fn bound_lhs_matches_brute(s in (-0.49f64..2.0, -0.49f64..2.0), b in beta(), lambda in 0.0f64..30.0, gamma in 1.0f64..3.0) {
        let p = ShiftPair::new(s.0, s.1).unwrap();
        let a = Anisotropy::new(b).unwrap();
        let l22 = check_bound(BoundId::L22ii, &p, gamma, &a, lambda, 0.0).unwrap();
        prop_assert!((l22.lhs - one_d_brute(false, p.sigma, b.sqrt(), lambda)).abs() <= 1e-10 * l22.lhs.max(1.0));
        let l23 = check_bound(BoundId::L23, &p, gamma, &a, lambda, 0.0).unwrap();
        prop_assert_eq!(l23.lhs, count_brute(&p, b, lambda) as f64);
        let c25 = check_bound(BoundId::C25i, &p, gamma, &a, lambda, 0.0).unwrap();
        prop_assert!((c25.lhs - riesz_brute(&p, gamma, b, lambda)).abs() <= 1e-10 * c25.lhs.max(1.0));
        let osc = ShiftPair::oscillator();
        let l24 = check_bound(BoundId::L24, &osc, gamma, &a, lambda, 0.0).unwrap();
        prop_assert!((l24.lhs - riesz_brute(&osc, 1.0, b, lambda)).abs() <= 1e-10 * l24.lhs.max(1.0));
        let l22iii = check_bound(BoundId::L22iii, &osc, gamma, &a, lambda, 0.0).unwrap();
        prop_assert!((l22iii.lhs - one_d_brute(true, -0.5, b.sqrt(), lambda)).abs() <= 1e-10 * l22iii.lhs.max(1.0));
    }

    #[test]
    fn outside_bracket_vanishes(s in shift(), lambda in 0.5f64..40.0, gamma in 0.2f64..3.0) {
        if let Bracket::Interval { lo, hi } = bracket(&s, lambda).unwrap() {
            for i in 1..=25 {
                let f = 1.0 + 0.2 * i as f64;
                for b in [lo / f, hi * f] {
                    prop_assert_eq!(riesz_direct(&s, gamma, &Anisotropy::new(b).unwrap(), lambda).unwrap(), 0.0);
                }
            }
        }
    }

    #[test]
    fn b_zero_gives_one_term_bound(sigma in -0.49f64..2.0, b in beta(), lambda in 0.0f64..40.0) {
        let a = Anisotropy::new(b).unwrap();
        let p = ShiftPair::new(sigma, 0.0).unwrap();
        let one = check_bound(BoundId::L22i, &p, 1.0, &a, lambda, 0.0).unwrap().rhs;
        prop_assert_eq!(check_bound(BoundId::L22ii, &p, 1.0, &a, lambda, 0.0).unwrap().rhs, one);
        let sq = check_bound(BoundId::L22iii, &ShiftPair::oscillator(), 1.0, &a, lambda, 0.0).unwrap().rhs;
        prop_assert_eq!(sq, lambda.powi(3) / (3.0 * b.sqrt()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn riesz_maximizer_invariants(s in shift(), gamma in 0.3f64..3.0, lambda in 2.0f64..14.0) {
        let r = maximize_riesz(&s, gamma, lambda, &MaximizeOptions::default()).unwrap();
        if r.all_beta {
            return Ok(());
        }
        let (lo, hi) = r.bracket.unwrap();
        prop_assert!(lo <= r.beta_star && r.beta_star <= hi);
        prop_assert!(r.value >= r.sampled_max - 1e-12 * r.sampled_max.abs().max(1.0));
        prop_assert_eq!(r.value, riesz_direct(&s, gamma, &Anisotropy::new(r.beta_star).unwrap(), lambda).unwrap());
    }

    #[test]
    fn riesz_maximizer_symmetric_shift(sigma in -0.95f64..2.0, gamma in 0.3f64..3.0, lambda in 3.0f64..14.0) {
        let s = ShiftPair::new(sigma, sigma).unwrap();
        let r = maximize_riesz(&s, gamma, lambda, &MaximizeOptions::default()).unwrap();
        if r.all_beta {
            return Ok(());
        }
        let at = |b: f64| riesz_direct(&s, gamma, &Anisotropy::new(b).unwrap(), lambda).unwrap();
        prop_assert!(rel_close(at(r.beta_star), at(1.0 / r.beta_star), 1e-12));
        for &(b, _) in &r.near_optima {
            let mirrored = r.near_optima.iter().any(|&(c, _)| rel_close(c, 1.0 / b, 1e-9));
            prop_assert!(mirrored, "{} has no mirror in {:?}", b, r.near_optima);
        }
    }

    #[test]
    fn heat_maximizer_invariants(s in (-0.5f64..2.0, -0.5f64..2.0), t in 0.05f64..20.0) {
        let p = ShiftPair::new(s.0, s.1).unwrap();
        let r = maximize_heat(&p, t, &MaximizeOptions::default()).unwrap();
        prop_assert!(heat_stationarity(&p, r.beta_star.sqrt(), t).unwrap().abs() < 1e-10);
        prop_assert_eq!(r.value, heat_closed(&p, &Anisotropy::new(r.beta_star).unwrap(), t).unwrap());
        let (lo, hi) = r.bracket.unwrap();
        prop_assert!(lo <= r.beta_star && r.beta_star <= hi);
    }
}

#[test]
fn residuals_decay_for_fractional_orders() {
    let spec = ExpansionSpec::default();
    let grid: Vec<f64> = (0..8).map(|i| 20.0 * 1.35f64.powi(i) + 0.123).collect();
    for (s, t, g) in [(0.0, 0.0, 0.5), (0.2, -0.1, 1.5), (-0.5, -0.5, 2.5)] {
        for (mu, nu) in [(1, 1), (1, 2), (2, 3)] {
            let rows = residual_report(
                &ShiftPair::new(s, t).unwrap(),
                g,
                &Anisotropy::rational(mu, nu).unwrap(),
                &grid,
                &spec,
            )
            .unwrap();
            let max = |r: &[riesz_lattice::ResidualRecord]| r.iter().map(|x| x.normalized.abs()).fold(0.0, f64::max);
            let (low, high) = rows.split_at(rows.len() / 2);
            assert!(max(high) <= max(low), "({s},{t},{g}) {mu}/{nu}");
        }
    }
}

#[test]
fn trajectory_is_deterministic() {
    let o = MaximizeOptions::default();
    let s = ShiftPair::new(0.1, 0.4).unwrap();
    let grid = [6.0, 9.0, 12.0];
    let a = serde_json::to_string(&trajectory(TrajectoryKind::Riesz, &s, Some(1.5), &grid, &o).unwrap()).unwrap();
    let b = serde_json::to_string(&trajectory(TrajectoryKind::Riesz, &s, Some(1.5), &grid, &o).unwrap()).unwrap();
    assert_eq!(a, b);
    let h = [0.1, 1.0, 10.0];
    let a = serde_json::to_string(&trajectory(TrajectoryKind::Heat, &s, None, &h, &o).unwrap()).unwrap();
    let b = serde_json::to_string(&trajectory(TrajectoryKind::Heat, &s, None, &h, &o).unwrap()).unwrap();
    assert_eq!(a, b);
}
