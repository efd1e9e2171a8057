mod common;

use blowuplab::closed_forms::{ClosedForm, ClosedFormValue};
use blowuplab::elliptic::{k_agm, lemniscate_quarter_period, sl, LemniscaticTable};
use blowuplab::{integrate, quadrature_blowup_time, IntegrateOptions, IntegratorKind, OdeParams, State, Termination};
use common::{fixture, lemniscate_quarter_period_oracle, quartic_escape_oracle, tanh_sinh};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn quarter_period_matches_oracles() {
    let q = lemniscate_quarter_period();
    assert!((q - fixture("lemniscate_quarter_period")).abs() < 1e-15);
    assert!((q - lemniscate_quarter_period_oracle()).abs() < 1e-13);
    assert_eq!(LemniscaticTable::get().quarter_period, q);
}

#[test]
fn sl_bounded_with_first_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    for _ in 0..10_000 {
        let t = rng.gen_range(-100.0..100.0);
        let (y, dy) = sl(t);
        assert!(y.abs() <= 1.0 + 1e-15, "sl({t}) = {y}");
        assert!((dy * dy + y.powi(4) - 1.0).abs() <= 1e-9, "first integral at {t}");
    }
}

#[test]
fn sl_odd_and_periodic() {
    let w = 2.0 * lemniscate_quarter_period();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..2000 {
        let t = rng.gen_range(-50.0..50.0);
        assert!((sl(-t).0 + sl(t).0).abs() <= 1e-10);
        assert!((sl(t + 2.0 * w).0 - sl(t).0).abs() <= 1e-9);
        assert!((sl(t + w).0 + sl(t).0).abs() <= 1e-9);
    }
}

#[test]
fn sl_matches_direct_integration() {
    let w = 2.0 * lemniscate_quarter_period();
    let p = OdeParams::from_coeffs(0.0, -2.0);
    let opts = IntegrateOptions::new(4.0 * w).with_tol(1e-12);
    let traj = integrate(&p, &State::new(0.0, 0.0, 1.0), IntegratorKind::Gauss6, &opts).unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    for s in &traj.states {
        let (y, dy) = sl(s.t);
        assert!((y - s.u).abs() <= 1e-8 && (dy - s.v).abs() <= 1e-8, "t = {}", s.t);
    }
}

#[test]
fn quartic_escape_time() {
    let oracle = quartic_escape_oracle();
    assert!((oracle - fixture("quartic_blowup_integral")).abs() < 1e-14);
    let t = quadrature_blowup_time(1.0, 1.0, 0.0).unwrap();
    assert!((t - oracle).abs() <= 1e-4 * oracle);
    assert!((t - oracle).abs() <= 1e-12);
}

proptest! {
    #[test]
    fn k_agm_matches_quadrature(k in 0.0f64..0.99) {
        let oracle = tanh_sinh(
            |th, _, _| {
                let s = (std::f64::consts::FRAC_PI_2 * th).sin();
                std::f64::consts::FRAC_PI_2 / (1.0 - k * k * s * s).sqrt()
            },
            0.0,
            1.0,
            1e-15,
        );
        prop_assert!((k_agm(k).unwrap() - oracle).abs() <= 1e-12 * oracle);
    }
}

fn closed_form_point(cf: &ClosedForm, p: &OdeParams, t: f64) -> Option<(f64, f64)> {
    cf.eval(p, t).ok().and_then(ClosedFormValue::point)
}

/// Initial data for every solution branch.
fn branch_cases() -> Vec<(&'static str, OdeParams, f64, f64)> {
    let m4 = OdeParams::from_dimension(4.0).unwrap();
    let m8 = OdeParams::from_dimension(8.0).unwrap();
    let k = (m8.b() / 2.0).sqrt();
    vec![
        ("tanh", m4, 0.3, -1.0),
        ("tan", m4, 0.0, 1.0),
        ("reciprocal tanh", m4, 2.0, 1.0),
        ("rational C=0", m4, 0.5, 0.25),
        ("constant", m4, 1.3, 0.0),
        ("rational e=0 +", m8, 1.0, -k),
        ("rational e=0 -", m8, -0.8, -k * 0.64),
        ("lemniscatic", OdeParams::from_coeffs(0.0, -1.0), 0.4, -0.9),
        ("tanh A<0", OdeParams::from_coeffs(-1.5, 0.0), 0.2, 0.6),
    ]
}

#[test]
fn closed_forms_solve_the_ode() {
    let h = 1e-4;
    for (name, p, u0, v0) in branch_cases() {
        let cf = ClosedForm::from_initial(&p, u0, v0).unwrap_or_else(|e| panic!("{name}: {e}"));
        let mut checked = 0;
        for i in 0..100 {
            let t = -1.0 + 2.0 * i as f64 / 99.0;
            let pts: Option<Vec<(f64, f64)>> = [t - h, t, t + h].iter().map(|&s| closed_form_point(&cf, &p, s)).collect();
            let Some(pts) = pts else { continue };
            let (u, v) = pts[1];
            if u.abs() > 10.0 {
                continue;
            }
            let d2 = (pts[0].0 - 2.0 * u + pts[2].0) / (h * h);
            let d1 = (pts[2].0 - pts[0].0) / (2.0 * h);
            let (_, a) = p.rhs(&State::new(t, u, v));
            let scale = u.abs().max(1.0).powi(3);
            assert!((d2 - a).abs() <= 1e-6 * scale.max(a.abs()), "{name} at t = {t}: {d2} vs {a}");
            assert!((d1 - v).abs() <= 1e-6 * scale, "{name} slope at t = {t}");
            checked += 1;
        }
        assert!(checked >= 30, "{name}: only {checked} regular points");
        let (u, v) = closed_form_point(&cf, &p, 0.0).unwrap();
        assert!((u - u0).abs() < 1e-12 && (v - v0).abs() < 1e-9, "{name} initial data");
    }
}

#[test]
fn integrator_reproduces_closed_forms() {
    for (name, p, u0, v0) in branch_cases() {
        let cf = ClosedForm::from_initial(&p, u0, v0).unwrap();
        let kind = if p.disc() < 0.0 { IntegratorKind::Gauss6 } else { IntegratorKind::Rk4 };
        for t_end in [3.0, -3.0] {
            let traj = integrate(&p, &State::new(0.0, u0, v0), kind, &IntegrateOptions::new(t_end)).unwrap();
            let pole = matches!(cf.eval(&p, t_end), Ok(ClosedFormValue::PoleAt(_)));
            assert_eq!(traj.termination.is_blowup(), pole, "{name} towards {t_end}");
            for s in traj.states.iter().filter(|s| s.u.abs() < 1e2) {
                let (u, _) = closed_form_point(&cf, &p, s.t).unwrap();
                assert!((u - s.u).abs() <= 1e-6 * u.abs().max(1.0), "{name} at {}: {u} vs {}", s.t, s.u);
            }
        }
    }
}

#[test]
fn m4_grid_global_or_blowup_or_constant() {
    let p = OdeParams::from_dimension(4.0).unwrap();
    let axis: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
    for &v0 in &axis {
        for &u0 in &axis {
            let s0 = State::new(0.0, u0, v0);
            let fwd = integrate(&p, &s0, IntegratorKind::Rk4, &IntegrateOptions::new(50.0)).unwrap();
            let bwd = integrate(&p, &s0, IntegratorKind::Rk4, &IntegrateOptions::new(-50.0)).unwrap();
            let blew = fwd.termination.is_blowup() || bwd.termination.is_blowup();
            if v0 > 0.0 {
                assert!(blew, "({u0}, {v0})");
            } else if v0 == 0.0 {
                assert!(fwd.states.iter().chain(&bwd.states).all(|s| s.u == u0 && s.v == 0.0));
            } else {
                assert!(!blew, "({u0}, {v0})");
                let cf = ClosedForm::from_initial(&p, u0, v0).unwrap();
                assert!(matches!(cf, ClosedForm::Tanh { .. }), "({u0}, {v0}) -> {cf:?}");
            }
        }
    }
}
