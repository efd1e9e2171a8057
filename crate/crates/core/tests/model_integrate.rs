mod common;

use blowuplab::diagnostics::{energy, g_k};
use blowuplab::integrate::integrate_fixed;
use blowuplab::{
    integrate, quadrature_blowup_time, IntegrateOptions, IntegratorKind, OdeParams, State, Termination,
};
use common::fitted_order;
use proptest::prelude::*;

fn dim(m: f64) -> OdeParams {
    OdeParams::from_dimension(m).unwrap()
}

#[test]
fn root_signs_over_dimensions() {
    for m in [3.0, 3.5, 5.0, 8.0, 100.0] {
        let p = dim(m);
        assert!(p.disc() > 0.0);
        let (km, kp) = p.roots().unwrap();
        assert_eq!(km.signum(), -1.0);
        assert_eq!(kp.signum(), (m - 4.0f64).signum());
        assert!((p.disc() - (m / (m - 2.0)).powi(2)).abs() < 1e-12);
    }
    assert_eq!(dim(4.0).k_plus(), Some(0.0));
}

#[test]
fn sign_table() {
    let expected = [(3.0, 1.0, -1.0), (4.0, 1.0, 0.0), (5.0, 1.0, 1.0), (8.0, 0.0, 1.0), (9.0, -1.0, 1.0)];
    for (m, sa, sb) in expected {
        let p = dim(m);
        let sign = |x: f64| if x == 0.0 { 0.0 } else { x.signum() };
        assert_eq!((sign(p.a()), sign(p.b())), (sa, sb), "m = {m}");
    }
}

proptest! {
    #[test]
    fn stored_roots_solve_the_quadratic(a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let p = OdeParams::from_coeffs(a, b);
        if let Some((km, kp)) = p.roots() {
            prop_assert!(km <= kp);
            for k in [km, kp] {
                prop_assert!((2.0 * k * k + a * k - b).abs() <= 1e-12 * (1.0 + a.abs() + b.abs()).powi(2));
            }
        } else {
            prop_assert!(p.disc() < 0.0);
        }
    }

    #[test]
    fn dimension_roots_solve_the_quadratic(m in 2.05f64..200.0) {
        let p = OdeParams::from_dimension(m).unwrap();
        let (km, kp) = p.roots().unwrap();
        for k in [km, kp] {
            prop_assert!(p.root_residual(k).abs() <= 1e-12);
        }
    }
}

/// Central second difference of samples against the right-hand side of
/// `params`.
fn ode_residual(params: &OdeParams, t: &[f64], u: &[f64]) -> f64 {
    let h = t[1] - t[0];
    let mut worst = 0.0f64;
    for i in 2..u.len() - 2 {
        let d1 = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h);
        let d2 = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h * h);
        let (_, a) = params.rhs(&State::new(t[i], u[i], d1));
        worst = worst.max((d2 - a).abs() / u[i].abs().max(1.0).powi(3));
    }
    worst
}

#[test]
fn time_reversal_conjugacies() {
    let h = 1e-2;
    for (a, b, u0, v0) in [(3.0, -0.5, 0.3, -0.2), (1.0 / 3.0, 2.0 / 9.0, -0.4, 0.1), (-0.4, 0.1, 0.5, 0.5)] {
        let p = OdeParams::from_coeffs(a, b);
        let back = integrate_fixed(&p, &State::new(0.0, u0, v0), IntegratorKind::Gauss6, -h, 200).unwrap();
        let t: Vec<f64> = back.iter().map(|s| -s.t).collect();
        let mirrored: Vec<f64> = back.iter().map(|s| -s.u).collect();
        let reversed: Vec<f64> = back.iter().map(|s| s.u).collect();
        assert!(ode_residual(&p, &t, &mirrored) < 1e-6, "-u(-t) for ({a}, {b})");
        assert!(ode_residual(&OdeParams::from_coeffs(-a, b), &t, &reversed) < 1e-6, "u(-t) for ({a}, {b})");
        assert!(ode_residual(&p, &t, &reversed) > 1e-3, "u(-t) should not solve ({a}, {b})");
    }
}

#[test]
fn orders_on_tanh() {
    let p = dim(4.0);
    let hs = [0.1, 0.05, 0.025];
    for (kind, nominal) in [(IntegratorKind::Rk4, 4.0), (IntegratorKind::Gauss6, 6.0)] {
        let errs: Vec<f64> = hs
            .iter()
            .map(|&h| {
                let n = (2.0f64 / h).round() as usize;
                let st = integrate_fixed(&p, &State::new(0.0, 0.0, -1.0), kind, h, n).unwrap();
                (st[n].u + 2.0f64.tanh()).abs()
            })
            .collect();
        let order = fitted_order(&hs, &errs);
        assert!((order - nominal).abs() <= 0.3, "{kind:?}: {order}");
    }
}

#[test]
fn gauss6_energy_fidelity_before_blowup() {
    let p = dim(8.0);
    let s0 = State::new(0.0, 1.0, 0.0);
    let t_blow = quadrature_blowup_time(p.b() / 2.0, 2.0 * energy(&p, &s0), 1.0).unwrap();
    let traj = integrate(&p, &s0, IntegratorKind::Gauss6, &IntegrateOptions::new(0.9 * t_blow)).unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    let e0 = energy(&p, &s0);
    let drift = traj.states.iter().map(|s| (energy(&p, s) - e0).abs() / e0.abs()).fold(0.0, f64::max);
    assert!(drift <= 1e-10, "{drift}");
}

#[test]
fn comparison_bound_m5() {
    let p = dim(5.0);
    let kp = p.k_plus().unwrap();
    for (u0, v0) in [(-1.0, -1.0), (-0.5, -2.0), (-2.0, -0.7)] {
        let s0 = State::new(0.0, u0, v0);
        assert!(g_k(&s0, kp) < 0.0);
        let traj = integrate(&p, &s0, IntegratorKind::Rk4, &IntegrateOptions::new(50.0)).unwrap();
        let t_bound = -1.0 / (kp * u0);
        let tb = traj.termination.blowup_time().expect("blow-up");
        assert!(tb <= t_bound * (1.0 + 1e-9));
        for s in &traj.states {
            let bound = u0 / (1.0 + kp * u0 * s.t);
            assert!(s.u <= bound * (1.0 - 1e-9) + 1e-12, "t = {}: {} vs {}", s.t, s.u, bound);
        }
    }
}

#[test]
fn forward_then_backward_returns() {
    let p = dim(3.0);
    let s0 = State::new(0.0, 0.0, -0.5);
    let opts = IntegrateOptions::new(20.0).with_tol(1e-12);
    let fwd = integrate(&p, &s0, IntegratorKind::Rk4, &opts).unwrap();
    let end = *fwd.last();
    let back = integrate(&p, &end, IntegratorKind::Rk4, &opts.with_t_end(0.0)).unwrap();
    let r = back.last();
    assert_eq!(back.termination, Termination::Completed);
    assert!(r.t.abs() < 1e-12);
    assert!((r.u - s0.u).abs() < 1e-6 && (r.v - s0.v).abs() < 1e-6, "{r:?}");
}

#[test]
fn backward_run_mirrors_forward() {
    let p = dim(5.0);
    let s0 = State::new(0.0, 0.7, 0.2);
    let fwd = integrate(&p, &s0, IntegratorKind::Rk4, &IntegrateOptions::new(10.0)).unwrap();
    let mirrored = integrate(&p, &State::new(0.0, -0.7, 0.2), IntegratorKind::Rk4, &IntegrateOptions::new(-10.0)).unwrap();
    let (tf, tb) = (fwd.termination.blowup_time().unwrap(), mirrored.termination.blowup_time().unwrap());
    assert!((tf + tb).abs() < 1e-9 * tf.abs(), "{tf} vs {tb}");
}

#[test]
fn invalid_options_are_rejected() {
    let p = dim(5.0);
    let s0 = State::new(0.0, 1.0, 0.0);
    let mut o = IntegrateOptions::new(1.0);
    o.local_tol = 0.0;
    assert!(integrate(&p, &s0, IntegratorKind::Rk4, &o).is_err());
    let mut o = IntegrateOptions::new(1.0);
    o.step_cap = Some(0.5);
    assert!(integrate(&p, &s0, IntegratorKind::Rk4, &o).is_err());
    assert!(integrate(&p, &State::new(0.0, f64::NAN, 0.0), IntegratorKind::Rk4, &IntegrateOptions::new(1.0)).is_err());
}
