//! Qualitative classification of initial conditions, numeric confirmation of
//! verdicts, and detection of periodic orbits.
//!
//! Directions rely on two conjugacies of `u'' = A u u' + B u^3`:
//! `-u(-t)` solves the same equation (phase map `(u, v) -> (-u, v)` with time
//! reversed), and `u(-t)` solves the equation with `A` replaced by `-A`
//! (phase map `(u, v) -> (u, -v)`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{ClosedForm, ClosedFormValue};
use crate::diagnostics::energy;
use crate::error::{Error, Result};
use crate::integrate::{integrate, step_gauss6, IntegrateOptions, IntegratorKind, Termination, Trajectory};
use crate::model::{OdeParams, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictKind {
    Trivial,
    Stationary,
    GlobalBounded,
    BlowUpForward,
    BlowUpBackward,
    NoGlobalSolution,
    Unclassified,
}

impl VerdictKind {
    pub fn name(self) -> &'static str {
        match self {
            VerdictKind::Trivial => "trivial",
            VerdictKind::Stationary => "stationary",
            VerdictKind::GlobalBounded => "global_bounded",
            VerdictKind::BlowUpForward => "blowup_forward",
            VerdictKind::BlowUpBackward => "blowup_backward",
            VerdictKind::NoGlobalSolution => "no_global_solution",
            VerdictKind::Unclassified => "unclassified",
        }
    }

    fn reversed(self) -> VerdictKind {
        match self {
            VerdictKind::BlowUpForward => VerdictKind::BlowUpBackward,
            VerdictKind::BlowUpBackward => VerdictKind::BlowUpForward,
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VerdictDetail {
    /// Exact solution through the initial data.
    ClosedForm(ClosedForm),
    /// The blow-up time lies strictly between `0` and `t_bound` (or at
    /// `t_bound` on the invariant curve `g_k = 0`).
    BlowUpBound { t_bound: f64 },
    /// `A = 0`, `B > 0`: conserved energy and the exact blow-up time (signed).
    Energy { e0: f64, t_blowup: f64 },
    /// Directions in which `u -> 0` is proven.
    Decay { forward: bool, backward: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub basis: String,
    pub detail: Option<VerdictDetail>,
}

impl Verdict {
    fn new(kind: VerdictKind, basis: &str, detail: Option<VerdictDetail>) -> Verdict {
        Verdict {
            kind,
            basis: basis.to_string(),
            detail,
        }
    }

    /// The verdict for the time-reversed problem.
    fn reversed(self) -> Verdict {
        self.reversed_by("time reversal of the A > 0 case")
    }

    fn mirrored(self) -> Verdict {
        self.reversed_by("mirror u -> -u(-t)")
    }

    fn reversed_by(self, how: &str) -> Verdict {
        let detail = self.detail.map(|d| match d {
            VerdictDetail::BlowUpBound { t_bound } => VerdictDetail::BlowUpBound { t_bound: -t_bound },
            VerdictDetail::Energy { e0, t_blowup } => VerdictDetail::Energy { e0, t_blowup: -t_blowup },
            VerdictDetail::Decay { forward, backward } => VerdictDetail::Decay {
                forward: backward,
                backward: forward,
            },
            other => other,
        });
        Verdict {
            kind: self.kind.reversed(),
            basis: format!("{how}; {}", self.basis),
            detail,
        }
    }
}

pub fn classify(p: &OdeParams, u0: f64, v0: f64) -> Verdict {
    let (a, b) = (p.a(), p.b());
    if u0 == 0.0 && v0 == 0.0 {
        return Verdict::new(VerdictKind::Trivial, "u = 0 is a solution", None);
    }
    if b == 0.0 {
        return classify_b_zero(p, u0, v0);
    }
    if a < 0.0 {
        return classify(&p.time_reversed(), u0, -v0).reversed();
    }
    if a == 0.0 {
        return if b > 0.0 {
            classify_conservative_blowup(p, u0, v0)
        } else {
            let cf = ClosedForm::from_initial(p, u0, v0).ok();
            Verdict::new(
                VerdictKind::GlobalBounded,
                "A = 0, B < 0: scaled lemniscatic sine, periodic",
                cf.map(VerdictDetail::ClosedForm),
            )
        };
    }
    if b > 0.0 {
        return classify_positive(p, u0, v0);
    }
    if p.disc() >= 0.0 {
        return classify_damped(p, u0, v0);
    }
    Verdict::new(
        VerdictKind::Unclassified,
        "A^2 + 8B < 0: no theorem; solutions are conjectured periodic",
        None,
    )
}

fn classify_b_zero(p: &OdeParams, u0: f64, v0: f64) -> Verdict {
    if v0 == 0.0 {
        return Verdict::new(VerdictKind::Stationary, "B = 0: the right-hand side vanishes on v = 0", None);
    }
    if p.a() == 0.0 {
        return Verdict::new(VerdictKind::Unclassified, "A = B = 0: linear, global but unbounded", None);
    }
    match ClosedForm::from_initial(p, u0, v0) {
        Ok(cf @ ClosedForm::Tanh { .. }) => Verdict::new(
            VerdictKind::GlobalBounded,
            "B = 0, C < 0, u0^2 < |C|: tanh family",
            Some(VerdictDetail::ClosedForm(cf)),
        ),
        Ok(cf) => {
            let basis = match cf {
                ClosedForm::TanBranch { .. } => "B = 0, C > 0: tan branch, not globally defined",
                ClosedForm::RecipTanhBranch { .. } => "B = 0, C < 0, u0^2 > |C|: coth branch, not globally defined",
                ClosedForm::RationalC0 { .. } => "B = 0, C = 0: rational branch, not globally defined",
                _ => "B = 0",
            };
            Verdict::new(VerdictKind::NoGlobalSolution, basis, Some(VerdictDetail::ClosedForm(cf)))
        }
        Err(_) => Verdict::new(VerdictKind::Unclassified, "B = 0: no branch matched", None),
    }
}

/// `A = 0`, `B > 0`. The energy is conserved, and the solution escapes in the
/// time direction in which `u` and `u'` share a sign; the escape time is the
/// quadrature `\int_{|u0|}^\infty du / sqrt(B/2 u^4 + 2 e0)`.
fn classify_conservative_blowup(p: &OdeParams, u0: f64, v0: f64) -> Verdict {
    let e0 = energy(p, &State::new(0.0, u0, v0));
    let forward = u0 * v0 > 0.0 || u0 == 0.0 || v0 == 0.0;
    let magnitude = crate::integrate::quadrature_blowup_time(0.5 * p.b(), 2.0 * e0, u0.abs());
    let basis = if e0 == 0.0 {
        "A = 0, B > 0, zero energy: rational solution"
    } else {
        "A = 0, B > 0: conserved energy, escape-time quadrature"
    };
    let detail = magnitude.ok().map(|t| VerdictDetail::Energy {
        e0,
        t_blowup: if forward { t } else { -t },
    });
    let mut v = Verdict::new(VerdictKind::NoGlobalSolution, basis, detail);
    if detail.is_none() {
        v.basis.push_str(" (quadrature unavailable)");
    }
    v
}

/// `A > 0`, `B > 0`.
fn classify_positive(p: &OdeParams, u0: f64, v0: f64) -> Verdict {
    let k = p.k_plus().expect("A, B > 0 has real roots");
    let g = v0 + k * u0 * u0;
    if v0 >= 0.0 {
        let basis = "A, B > 0, u' >= 0: increasing energy, comparison with an escaping first-order equation";
        return if u0 >= 0.0 {
            Verdict::new(VerdictKind::BlowUpForward, basis, None)
        } else {
            Verdict::new(VerdictKind::BlowUpForward, basis, None).mirrored()
        };
    }
    if g <= 0.0 {
        let basis = "A, B > 0, u' < 0, g_k+ <= 0: comparison with u' = -k+ u^2";
        let detail = (u0 != 0.0).then(|| VerdictDetail::BlowUpBound {
            t_bound: 1.0 / (k * u0.abs()),
        });
        let v = Verdict::new(VerdictKind::BlowUpForward, basis, detail);
        return if u0 <= 0.0 { v } else { v.mirrored() };
    }
    // g > 0 and v0 < 0 force u0 != 0
    let basis = "A, B > 0, u' < 0, g_k+ > 0: comparison with the logistic equation w' = g0 - k+ w^2";
    let r = (g / k).sqrt();
    let lambda = (g * k).sqrt();
    let t_pole = (r / u0.abs()).atanh() / lambda;
    let v = Verdict::new(
        VerdictKind::BlowUpForward,
        basis,
        Some(VerdictDetail::BlowUpBound { t_bound: t_pole }),
    );
    if u0 < 0.0 {
        v
    } else {
        v.mirrored()
    }
}

/// `A > 0 > B`, `A^2 + 8B >= 0`.
fn classify_damped(p: &OdeParams, u0: f64, v0: f64) -> Verdict {
    let (_, k1) = p.roots().expect("non-negative discriminant");
    let g = |u: f64, v: f64| v + k1 * u * u;
    let decay = |forward: bool, backward: bool| Some(VerdictDetail::Decay { forward, backward });
    if u0 == 0.0 && v0 < 0.0 {
        return Verdict::new(
            VerdictKind::GlobalBounded,
            "A > 0 > B: u reaches a minimum with u' = 0, then g_k1 < 0 forces decay; both directions",
            decay(true, true),
        );
    }
    if u0 < 0.0 && v0 < 0.0 {
        return Verdict::new(
            VerdictKind::GlobalBounded,
            "A > 0 > B, u <= 0, u' < 0: minimum reached, then decay under g_k1 < 0",
            decay(true, false),
        );
    }
    if u0 < 0.0 && v0 >= 0.0 && g(u0, v0) < 0.0 {
        return Verdict::new(
            VerdictKind::GlobalBounded,
            "A > 0 > B, u <= 0, u' >= 0, g_k1 < 0: comparison with u' = -k1 u^2",
            decay(true, false),
        );
    }
    // mirror (u, v) -> (-u, v), time reversed
    if u0 > 0.0 && (v0 < 0.0 || g(u0, v0) < 0.0) {
        return classify_damped(p, -u0, v0).mirrored();
    }
    Verdict::new(
        VerdictKind::Unclassified,
        "A > 0 > B: sign pattern not covered by the decay results",
        None,
    )
}

/// Outcome of [`verify_verdict`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub forward: Termination,
    pub backward: Termination,
    pub max_abs_u: f64,
    pub u_forward_end: f64,
    pub u_backward_end: f64,
    /// Max deviation from the closed form at the two ends, when the verdict carries one.
    pub closed_form_error: Option<f64>,
    pub message: String,
}

/// Tolerance for agreement with a closed form at the ends of the run.
pub const CLOSED_FORM_TOL: f64 = 1e-6;
/// Relative slack when comparing a measured blow-up time with a bound or an
/// exact value.
pub const BLOWUP_TIME_RTOL: f64 = 1e-6;
/// Bound on `|u|` at the ends of a run whose verdict claims decay.
pub const DECAY_TOL: f64 = 0.05;

/// Horizon used for numeric confirmation of a verdict kind.
pub fn default_horizon(kind: VerdictKind) -> f64 {
    match kind {
        VerdictKind::GlobalBounded | VerdictKind::Stationary | VerdictKind::Trivial => 200.0,
        _ => 50.0,
    }
}

fn inconclusive(t: &Termination) -> bool {
    matches!(t, Termination::StepUnderflow { .. } | Termination::MaxSteps)
}

/// Integrates to `+horizon` and `-horizon` with RK4 and checks the verdict
/// against the runs.
pub fn verify_verdict(p: &OdeParams, u0: f64, v0: f64, verdict: &Verdict, horizon: f64) -> Result<VerifyReport> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidOptions(format!("horizon must be positive, got {horizon}")));
    }
    let s0 = State::new(0.0, u0, v0);
    let fwd = integrate(p, &s0, IntegratorKind::Rk4, &IntegrateOptions::new(horizon))?;
    let bwd = integrate(p, &s0, IntegratorKind::Rk4, &IntegrateOptions::new(-horizon))?;
    let mut report = VerifyReport {
        pass: false,
        forward: fwd.termination,
        backward: bwd.termination,
        max_abs_u: fwd.max_abs_u().max(bwd.max_abs_u()),
        u_forward_end: fwd.last().u,
        u_backward_end: bwd.last().u,
        closed_form_error: None,
        message: String::new(),
    };
    let completed = |t: &Trajectory| t.termination == Termination::Completed;
    let mut relevant: Vec<&Trajectory> = vec![];

    let (pass, message) = match verdict.kind {
        VerdictKind::Unclassified => (true, "nothing to verify".to_string()),
        VerdictKind::Trivial | VerdictKind::Stationary => {
            relevant = vec![&fwd, &bwd];
            let drift = [&fwd, &bwd]
                .iter()
                .flat_map(|t| t.states.iter())
                .map(|s| (s.u - u0).abs() + s.v.abs())
                .fold(0.0, f64::max);
            let ok = completed(&fwd) && completed(&bwd) && drift <= 1e-12 * u0.abs().max(1.0);
            (ok, format!("max deviation from the rest state {drift:e}"))
        }
        VerdictKind::GlobalBounded => {
            relevant = vec![&fwd, &bwd];
            let mut ok = completed(&fwd) && completed(&bwd) && report.max_abs_u.is_finite();
            let mut msg = format!("completed both ways, sup|u| = {:.6e}", report.max_abs_u);
            match verdict.detail {
                Some(VerdictDetail::Decay { forward, backward }) => {
                    if forward {
                        ok &= fwd.last().u.abs() <= DECAY_TOL;
                    }
                    if backward {
                        ok &= bwd.last().u.abs() <= DECAY_TOL;
                    }
                    msg.push_str(&format!(
                        ", |u(+h)| = {:.3e}, |u(-h)| = {:.3e}",
                        fwd.last().u.abs(),
                        bwd.last().u.abs()
                    ));
                }
                Some(VerdictDetail::ClosedForm(cf)) if ok => {
                    let err = [fwd.last(), bwd.last()]
                        .iter()
                        .map(|s| match cf.eval(p, s.t) {
                            Ok(ClosedFormValue::Point { u, .. }) => (u - s.u).abs(),
                            _ => f64::INFINITY,
                        })
                        .fold(0.0, f64::max);
                    report.closed_form_error = Some(err);
                    ok &= err <= CLOSED_FORM_TOL;
                    msg.push_str(&format!(", closed-form endpoint error {err:.3e}"));
                }
                _ => {}
            }
            (ok, msg)
        }
        VerdictKind::BlowUpForward | VerdictKind::BlowUpBackward => {
            let run = if verdict.kind == VerdictKind::BlowUpForward { &fwd } else { &bwd };
            relevant = vec![run];
            match run.termination.blowup_time() {
                None => (false, format!("expected blow-up, run ended with {}", run.termination.label())),
                Some(t) => {
                    let mut ok = true;
                    let mut msg = format!("blow-up at {t:.10}");
                    if let Some(VerdictDetail::BlowUpBound { t_bound }) = verdict.detail {
                        let slack = BLOWUP_TIME_RTOL * t_bound.abs();
                        ok = t.abs() <= t_bound.abs() + slack && t * t_bound > 0.0;
                        msg.push_str(&format!(", bound {t_bound:.10}"));
                    }
                    (ok, msg)
                }
            }
        }
        VerdictKind::NoGlobalSolution => {
            relevant = vec![&fwd, &bwd];
            let expected = match verdict.detail {
                Some(VerdictDetail::Energy { t_blowup, .. }) => Some(t_blowup),
                Some(VerdictDetail::ClosedForm(cf)) => closed_form_pole(p, &cf, horizon),
                _ => None,
            };
            match expected {
                Some(te) => {
                    let run = if te > 0.0 { &fwd } else { &bwd };
                    relevant = vec![run];
                    match run.termination.blowup_time() {
                        Some(t) => {
                            let ok = (t - te).abs() <= BLOWUP_TIME_RTOL * te.abs().max(1.0);
                            (ok, format!("blow-up at {t:.10}, expected {te:.10}"))
                        }
                        None => (false, format!("expected blow-up near {te}, run ended with {}", run.termination.label())),
                    }
                }
                None => {
                    let ok = fwd.termination.is_blowup() || bwd.termination.is_blowup();
                    (ok, format!("forward {}, backward {}", fwd.termination.label(), bwd.termination.label()))
                }
            }
        }
    };
    if !pass && relevant.iter().any(|t| inconclusive(&t.termination)) {
        return Err(Error::Inconclusive(format!(
            "run ended early without crossing the blow-up threshold ({message})"
        )));
    }
    report.pass = pass;
    report.message = message;
    Ok(report)
}

/// First pole of a closed form within `[-horizon, horizon]`, forward first.
fn closed_form_pole(p: &OdeParams, cf: &ClosedForm, horizon: f64) -> Option<f64> {
    for t in [horizon, -horizon] {
        if let Ok(ClosedFormValue::PoleAt(tp)) = cf.eval(p, t) {
            return Some(tp);
        }
    }
    None
}

/// Verdicts for every point of a grid, in row-major order (`v` outer).
pub fn classify_grid(p: &OdeParams, us: &[f64], vs: &[f64]) -> Vec<(f64, f64, Verdict)> {
    let points: Vec<(f64, f64)> = vs.iter().flat_map(|&v| us.iter().map(move |&u| (u, v))).collect();
    points
        .into_par_iter()
        .map(|(u, v)| (u, v, classify(p, u, v)))
        .collect()
}

/// Classification and confirmation for every point, with the horizon from
/// [`default_horizon`].
pub fn verify_grid(p: &OdeParams, us: &[f64], vs: &[f64]) -> Vec<(f64, f64, Verdict, Result<VerifyReport>)> {
    classify_grid(p, us, vs)
        .into_par_iter()
        .map(|(u, v, verdict)| {
            let report = verify_verdict(p, u, v, &verdict, default_horizon(verdict.kind));
            (u, v, verdict, report)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub periodic: bool,
    pub period: Option<f64>,
    /// Scaled phase-space distance to the start at the best return found
    /// (infinite when the section was never crossed).
    pub closure_error: f64,
}

/// Looks for a return of the orbit through `s0` to its starting point.
///
/// The section is `u = u0` crossed in the direction of `v0` (or `v = 0`
/// crossed in the direction of `u''(0)` when `v0 = 0`); each crossing is
/// located by bisection on the step size and compared with `s0` in the norm
/// `sqrt(du^2 + dv^2 / max(1, v0^2))`.
pub fn detect_period(p: &OdeParams, s0: &State, t_max: f64, tol: f64) -> Result<PeriodReport> {
    if !(t_max > 0.0 && tol > 0.0) {
        return Err(Error::InvalidOptions("need t_max > 0 and tol > 0".into()));
    }
    if s0.u == 0.0 && s0.v == 0.0 {
        return Ok(PeriodReport {
            periodic: false,
            period: None,
            closure_error: 0.0,
        });
    }
    let on_u = s0.v != 0.0;
    let direction = if on_u { s0.v.signum() } else { p.rhs(s0).1.signum() };
    if direction == 0.0 {
        return Ok(PeriodReport {
            periodic: false,
            period: None,
            closure_error: 0.0,
        });
    }
    let section = |s: &State| direction * if on_u { s.u - s0.u } else { s.v };
    let vscale = s0.v.abs().max(1.0);
    let distance = |s: &State| ((s.u - s0.u).powi(2) + ((s.v - s0.v) / vscale).powi(2)).sqrt();

    let opts = IntegrateOptions::new(s0.t + t_max).with_tol(1e-12);
    let traj = integrate(p, s0, IntegratorKind::Gauss6, &opts)?;
    let mut best = f64::INFINITY;
    for w in traj.states.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if !(section(a) < 0.0 && section(b) >= 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (0.0, b.t - a.t);
        let mut hit = *b;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let s = step_gauss6(p, a, mid, opts.stage_tol, opts.stage_max_iter)?;
            if section(&s) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
                hit = s;
            }
            if hi - lo <= 1e-15 * hit.t.abs().max(1.0) {
                break;
            }
        }
        let d = distance(&hit);
        best = best.min(d);
        if d <= tol {
            return Ok(PeriodReport {
                periodic: true,
                period: Some(hit.t - s0.t),
                closure_error: d,
            });
        }
    }
    match traj.termination {
        Termination::Completed => Ok(PeriodReport {
            periodic: false,
            period: None,
            closure_error: best,
        }),
        other => Err(Error::Inconclusive(format!(
            "run ended with {} before any return to the start",
            other.label()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(m: f64) -> OdeParams {
        OdeParams::from_dimension(m).unwrap()
    }

    #[test]
    fn trivial_everywhere() {
        for m in [3.0, 4.0, 5.0, 8.0, 9.0] {
            assert_eq!(classify(&dim(m), 0.0, 0.0).kind, VerdictKind::Trivial);
        }
    }

    #[test]
    fn m8_is_not_global() {
        let v = classify(&dim(8.0), 1.0, 1.0);
        assert_eq!(v.kind, VerdictKind::NoGlobalSolution);
        assert!(matches!(v.detail, Some(VerdictDetail::Energy { t_blowup, .. }) if t_blowup > 0.0));
    }

    #[test]
    fn m4_tanh_detail() {
        let v = classify(&dim(4.0), 0.0, -1.0);
        assert_eq!(v.kind, VerdictKind::GlobalBounded);
        match v.detail {
            Some(VerdictDetail::ClosedForm(ClosedForm::Tanh { b, c })) => assert!(b == 1.0 && c == 0.0),
            other => panic!("{other:?}"),
        }
        assert_eq!(classify(&dim(4.0), 0.7, 0.0).kind, VerdictKind::Stationary);
        assert_eq!(classify(&dim(4.0), 0.0, 1.0).kind, VerdictKind::NoGlobalSolution);
    }

    #[test]
    fn m5_bound() {
        let v = classify(&dim(5.0), -1.0, -1.0);
        assert_eq!(v.kind, VerdictKind::BlowUpForward);
        match v.detail {
            Some(VerdictDetail::BlowUpBound { t_bound }) => assert!((t_bound - 6.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn m3_quadrants() {
        let p = dim(3.0);
        let v = classify(&p, 0.0, -0.5);
        assert_eq!(v.kind, VerdictKind::GlobalBounded);
        assert_eq!(v.detail, Some(VerdictDetail::Decay { forward: true, backward: true }));
        assert_eq!(classify(&p, 0.0, 0.5).kind, VerdictKind::Unclassified);
        let v = classify(&p, 1.0, -1.0);
        assert_eq!(v.detail, Some(VerdictDetail::Decay { forward: false, backward: true }));
    }

    #[test]
    fn negative_a_mirrors_positive_a() {
        let p = dim(6.0);
        let q = p.time_reversed();
        for (u, v) in [(-1.0, -1.0), (1.0, 0.5), (0.3, -2.0), (-0.5, 0.2)] {
            let a = classify(&p, u, v);
            let b = classify(&q, u, -v);
            assert_eq!(a.kind.reversed(), b.kind);
        }
    }

    #[test]
    fn disc_negative_unclassified() {
        let p = OdeParams::from_coeffs(2.0, -4.0);
        assert_eq!(classify(&p, 0.0, 1.0).kind, VerdictKind::Unclassified);
    }

    #[test]
    fn period_inputs_validated() {
        let p = dim(3.0);
        assert!(detect_period(&p, &State::new(0.0, 0.0, 1.0), 0.0, 1e-5).is_err());
        let r = detect_period(&p, &State::new(0.0, 0.0, 0.0), 1.0, 1e-5).unwrap();
        assert!(!r.periodic);
    }

    #[test]
    fn verify_rejects_bad_horizon() {
        let p = dim(5.0);
        let v = classify(&p, -1.0, -1.0);
        assert!(verify_verdict(&p, -1.0, -1.0, &v, 0.0).is_err());
    }
}
