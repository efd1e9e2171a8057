use blowuplab::classify::{verify_grid, VerdictDetail};
use blowuplab::diagnostics::{check_energy_law, check_gk_identity, energy, g_k};
use blowuplab::integrate::integrate_fixed;
use blowuplab::{
    classify, integrate, quadrature_blowup_time, DiagnosticsReport, IntegrateOptions, IntegratorKind, OdeParams,
    State, VerdictKind,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dim(m: f64) -> OdeParams {
    OdeParams::from_dimension(m).unwrap()
}

#[test]
fn g_k_sign_is_preserved() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let dims = [3.0, 5.0, 8.0, 9.0];
    for i in 0..50 {
        let p = dim(dims[i % 4]);
        let s0 = State::new(0.0, rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let traj = integrate(&p, &s0, IntegratorKind::Rk4, &IntegrateOptions::new(10.0))
            .unwrap()
            .truncate_at_magnitude(1e3);
        let (km, kp) = p.roots().unwrap();
        for k in [km, kp] {
            let sign0 = g_k(&s0, k).signum();
            // near the invariant manifold g_k = 0 the sign is below rounding
            let resolved = |s: &State| g_k(s, k).abs() > 1e-6 * (s.v.abs() + k.abs() * s.u * s.u);
            assert!(
                traj.states.iter().filter(|s| resolved(s)).all(|s| g_k(s, k).signum() == sign0),
                "{s0:?}, k = {k}"
            );
        }
    }
}

#[test]
fn energy_nondecreasing_m5_first_quadrant() {
    let p = dim(5.0);
    for (u0, v0) in [(0.5, 0.5), (1.0, 0.1), (0.1, 2.0)] {
        let traj = integrate(&p, &State::new(0.0, u0, v0), IntegratorKind::Rk4, &IntegrateOptions::new(10.0)).unwrap();
        assert!(traj.termination.is_blowup());
        assert!(traj.states.iter().all(|s| s.u > 0.0 && s.v > 0.0));
        for w in traj.states.windows(2) {
            let (e0, e1) = (energy(&p, &w[0]), energy(&p, &w[1]));
            assert!(e1 >= e0 - 1e-9 * e0.abs().max(1.0), "t = {}", w[1].t);
        }
    }
}

#[test]
fn m8_energy_law_before_blowup() {
    let p = dim(8.0);
    let s0 = State::new(0.0, 1.0, 0.0);
    let t_blow = quadrature_blowup_time(p.b() / 2.0, 2.0 * energy(&p, &s0), 1.0).unwrap();
    let traj = integrate(&p, &s0, IntegratorKind::Gauss6, &IntegrateOptions::new(0.9 * t_blow)).unwrap();
    assert!(check_energy_law(&p, &traj).unwrap() <= 1e-8);
    let report = DiagnosticsReport::for_trajectory(&p, &traj).unwrap();
    assert!(report.energy_drift_rel.unwrap() <= 1e-10);
}

#[test]
fn energy_law_trivial_and_tanh() {
    let p = dim(4.0);
    let trivial = integrate(&p, &State::new(0.0, 0.0, 0.0), IntegratorKind::Rk4, &IntegrateOptions::new(5.0)).unwrap();
    assert!(check_energy_law(&p, &trivial).unwrap() <= 1e-15);
    let s0 = State::new(0.0, 0.0, -1.0);
    let mut tanh = integrate(&p, &s0, IntegratorKind::Rk4, &IntegrateOptions::new(5.0)).unwrap();
    tanh.states = integrate_fixed(&p, &s0, IntegratorKind::Rk4, 1e-3, 5000).unwrap();
    assert!(check_energy_law(&p, &tanh).unwrap() <= 1e-6);
}

#[test]
fn g_k_examples_along_runs() {
    let p5 = dim(5.0);
    let kp = p5.k_plus().unwrap();
    let traj = integrate(&p5, &State::new(0.0, -1.0, -1.0), IntegratorKind::Rk4, &IntegrateOptions::new(10.0))
        .unwrap()
        .truncate_at_magnitude(1e3);
    assert!(check_gk_identity(&p5, &traj, kp).unwrap() <= 1e-6);

    let p3 = dim(3.0);
    let km = p3.k_minus().unwrap();
    let traj = integrate(&p3, &State::new(0.0, 0.0, -0.5), IntegratorKind::Rk4, &IntegrateOptions::new(50.0)).unwrap();
    assert!(check_gk_identity(&p3, &traj, km).unwrap() <= 1e-6);

    // invariant manifold g_k = 0, on its attracting side
    let (km5, u0) = (p5.k_minus().unwrap(), -0.8);
    let opts = IntegrateOptions::new(50.0).with_tol(1e-12);
    let traj = integrate(&p5, &State::new(0.0, u0, -km5 * u0 * u0), IntegratorKind::Rk4, &opts).unwrap();
    assert!(traj.states.iter().all(|s| g_k(s, km5).abs() <= 1e-9));
}

#[test]
fn verdicts_agree_with_numerics_on_grids() {
    let axis: Vec<f64> = (0..8).map(|i| -2.0 + 4.0 * i as f64 / 7.0).collect();
    for m in [3.0, 4.0, 5.0, 8.0, 9.0] {
        let p = dim(m);
        for (u0, v0, verdict, report) in verify_grid(&p, &axis, &axis) {
            if verdict.kind == VerdictKind::Unclassified {
                continue;
            }
            let report = report.unwrap_or_else(|e| panic!("m={m} ({u0},{v0}): {e}"));
            assert!(report.pass, "m={m} ({u0},{v0}) {:?}: {}", verdict.kind, report.message);
            if m >= 5.0 {
                assert!(report.forward.is_blowup() || report.backward.is_blowup());
                assert_ne!(verdict.kind, VerdictKind::GlobalBounded);
            }
        }
    }
}

fn swapped(kind: VerdictKind) -> VerdictKind {
    match kind {
        VerdictKind::BlowUpForward => VerdictKind::BlowUpBackward,
        VerdictKind::BlowUpBackward => VerdictKind::BlowUpForward,
        other => other,
    }
}

proptest! {
    #[test]
    fn reversal_consistency(m in prop::sample::select(vec![3.0, 4.0, 5.0, 6.5, 8.0, 9.0, 12.0]),
                            u0 in -3.0f64..3.0, v0 in -3.0f64..3.0) {
        let p = dim(m);
        let q = OdeParams::from_coeffs(-p.a(), p.b());
        let a = classify(&p, u0, v0);
        let b = classify(&q, u0, -v0);
        prop_assert_eq!(a.kind, swapped(b.kind));
        if let (Some(VerdictDetail::BlowUpBound { t_bound: ta }), Some(VerdictDetail::BlowUpBound { t_bound: tb })) =
            (a.detail, b.detail)
        {
            prop_assert!((ta + tb).abs() <= 1e-12 * ta.abs().max(1.0));
        }
    }

    #[test]
    fn mirror_consistency(m in prop::sample::select(vec![3.0, 5.0, 6.5, 8.0, 9.0]),
                          u0 in -3.0f64..3.0, v0 in -3.0f64..3.0) {
        // -u(-t) solves the same equation
        let p = dim(m);
        let a = classify(&p, u0, v0);
        let b = classify(&p, -u0, v0);
        prop_assert_eq!(a.kind, swapped(b.kind));
    }
}
