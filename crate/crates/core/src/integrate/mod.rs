//! Time-steppers, the adaptive driver with blow-up detection, and blow-up
//! time estimation.

mod gauss6;
mod rk4;

pub use gauss6::{step_gauss6, MATRIX as GAUSS6_MATRIX, NODES as GAUSS6_NODES, WEIGHTS as GAUSS6_WEIGHTS};
pub use rk4::step_rk4;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{OdeParams, State};
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntegratorKind {
    Rk4,
    Gauss6,
}

impl IntegratorKind {
    pub fn order(self) -> i32 {
        match self {
            IntegratorKind::Rk4 => 4,
            IntegratorKind::Gauss6 => 6,
        }
    }

    /// Default of [`IntegrateOptions::step_cap`]. The implicit scheme uses a
    /// tighter cap so that the energy of conservative runs stays at rounding
    /// level up to close to the singularity.
    pub fn default_step_cap(self) -> f64 {
        match self {
            IntegratorKind::Rk4 => 0.1,
            IntegratorKind::Gauss6 => 0.025,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IntegratorKind::Rk4 => "rk4",
            IntegratorKind::Gauss6 => "gauss6",
        }
    }
}

impl std::str::FromStr for IntegratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rk4" => Ok(IntegratorKind::Rk4),
            "gauss6" => Ok(IntegratorKind::Gauss6),
            other => Err(Error::InvalidOptions(format!("unknown integrator {other:?}"))),
        }
    }
}

/// Driver settings. `t_end` may lie before the initial time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub h0: f64,
    pub t_end: f64,
    /// `|u|` beyond this (or `|u'|` beyond its square) terminates with blow-up.
    pub blowup_threshold: f64,
    /// Step-doubling tolerance, relative to `max(1, |y|)` per component.
    pub local_tol: f64,
    pub h_min: f64,
    pub max_steps: usize,
    pub record_every: usize,
    pub stage_tol: f64,
    pub stage_max_iter: usize,
    /// Where `|u| > 1` the step is capped at `step_cap / |u|`; `None` uses
    /// the integrator default.
    pub step_cap: Option<f64>,
}

impl IntegrateOptions {
    pub fn new(t_end: f64) -> Self {
        Self {
            h0: 1e-2,
            t_end,
            blowup_threshold: 1e8,
            local_tol: 1e-10,
            h_min: 1e-14,
            max_steps: 10_000_000,
            record_every: 1,
            stage_tol: 1e-13,
            stage_max_iter: 50,
            step_cap: None,
        }
    }

    pub fn with_tol(mut self, local_tol: f64) -> Self {
        self.local_tol = local_tol;
        self
    }

    pub fn with_record_every(mut self, n: usize) -> Self {
        self.record_every = n;
        self
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("h0", self.h0),
            ("blowup_threshold", self.blowup_threshold),
            ("local_tol", self.local_tol),
            ("h_min", self.h_min),
            ("stage_tol", self.stage_tol),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidOptions(format!("{name} must be positive, got {value}")));
            }
        }
        if let Some(c) = self.step_cap {
            if !(c.is_finite() && c > 0.0 && c <= 0.1) {
                return Err(Error::InvalidOptions(format!("step_cap must lie in (0, 0.1], got {c}")));
            }
        }
        if !self.t_end.is_finite() {
            return Err(Error::InvalidOptions("t_end must be finite".into()));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidOptions("record_every must be >= 1".into()));
        }
        if self.max_steps == 0 || self.stage_max_iter == 0 {
            return Err(Error::InvalidOptions("step and iteration budgets must be >= 1".into()));
        }
        Ok(())
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Termination {
    Completed,
    /// `direction` is the time direction of the run (+1 forward, -1 backward).
    BlowUp { t_estimate: f64, direction: i8 },
    StepUnderflow { t_last: f64 },
    MaxSteps,
}

impl Termination {
    pub fn label(&self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::BlowUp { .. } => "blowup",
            Termination::StepUnderflow { .. } => "underflow",
            Termination::MaxSteps => "maxsteps",
        }
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self, Termination::BlowUp { .. })
    }

    pub fn blowup_time(&self) -> Option<f64> {
        match *self {
            Termination::BlowUp { t_estimate, .. } => Some(t_estimate),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: OdeParams,
    /// Recorded states, strictly monotone in `t`.
    pub states: Vec<State>,
    pub termination: Termination,
    pub integrator: IntegratorKind,
    pub options: IntegrateOptions,
    /// Time of the initial condition (interior for two-sided runs).
    pub t0: f64,
}

impl Trajectory {
    pub fn first(&self) -> &State {
        &self.states[0]
    }

    pub fn last(&self) -> &State {
        self.states.last().expect("trajectory has at least one state")
    }

    pub fn max_abs_u(&self) -> f64 {
        self.states.iter().fold(0.0, |m, s| m.max(s.u.abs()))
    }

    /// Prefix of the run up to the first state with `|u| > u_max`.
    ///
    /// The truncated copy is marked `Completed` when anything was cut.
    pub fn truncate_at_magnitude(&self, u_max: f64) -> Trajectory {
        let n = self
            .states
            .iter()
            .position(|s| s.u.abs() > u_max)
            .unwrap_or(self.states.len());
        let mut out = self.clone();
        if n < self.states.len() {
            out.states.truncate(n.max(1));
            out.termination = Termination::Completed;
        }
        out
    }

    /// The state recorded closest to time `t`.
    pub fn nearest(&self, t: f64) -> &State {
        self.states
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
            .expect("trajectory has at least one state")
    }
}

/// Fixed-step integration (no error control); returns all `n_steps + 1` states.
pub fn integrate_fixed(
    p: &OdeParams,
    s0: &State,
    kind: IntegratorKind,
    h: f64,
    n_steps: usize,
) -> Result<Vec<State>> {
    let mut out = Vec::with_capacity(n_steps + 1);
    let mut s = *s0;
    out.push(s);
    for i in 0..n_steps {
        s = match kind {
            IntegratorKind::Rk4 => step_rk4(p, &s, h)?,
            IntegratorKind::Gauss6 => step_gauss6(p, &s, h, 1e-15, 100)?,
        };
        // avoid drift of t from repeated addition
        s.t = s0.t + (i + 1) as f64 * h;
        out.push(s);
    }
    Ok(out)
}

fn take_increment(
    p: &OdeParams,
    s: &State,
    h: f64,
    kind: IntegratorKind,
    opts: &IntegrateOptions,
) -> Result<(f64, f64)> {
    match kind {
        IntegratorKind::Rk4 => rk4::increment_rk4(p, s, h),
        IntegratorKind::Gauss6 => gauss6::increment_gauss6(p, s, h, opts.stage_tol, opts.stage_max_iter),
    }
}

/// A state carried together with the rounding error of its last update.
#[derive(Clone, Copy)]
struct Compensated {
    s: State,
    cu: f64,
    cv: f64,
}

impl Compensated {
    fn add(&self, h: f64, du: f64, dv: f64) -> Compensated {
        let au = du + self.cu;
        let av = dv + self.cv;
        let u = self.s.u + au;
        let v = self.s.v + av;
        Compensated {
            s: State::new(self.s.t + h, u, v),
            cu: au - (u - self.s.u),
            cv: av - (v - self.s.v),
        }
    }
}

/// Number of tail states (with `|u| >= TAIL_MIN_U`) used by the blow-up fit.
pub const TAIL_LEN: usize = 20;
pub const TAIL_MIN_U: f64 = 1e3;

/// Marches from `s0` to `opts.t_end` with step-doubling error control.
///
/// Backward runs (`t_end < s0.t`) integrate the reflected system
/// `s -> u(-s)` forward and map the states back.
pub fn integrate(
    p: &OdeParams,
    s0: &State,
    kind: IntegratorKind,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    opts.validate()?;
    if !s0.is_finite() {
        return Err(Error::Domain("initial state must be finite".into()));
    }
    if opts.t_end >= s0.t {
        let (states, termination) = march(p, s0, kind, opts);
        return Ok(Trajectory {
            params: *p,
            states,
            termination,
            integrator: kind,
            options: *opts,
            t0: s0.t,
        });
    }
    let reflected = p.time_reversed();
    let r0 = State::new(-s0.t, s0.u, -s0.v);
    let ropts = IntegrateOptions {
        t_end: -opts.t_end,
        ..*opts
    };
    let (states, termination) = march(&reflected, &r0, kind, &ropts);
    let states = states
        .into_iter()
        .map(|s| State::new(-s.t, s.u, -s.v))
        .collect();
    let termination = match termination {
        Termination::BlowUp { t_estimate, .. } => Termination::BlowUp {
            t_estimate: -t_estimate,
            direction: -1,
        },
        Termination::StepUnderflow { t_last } => Termination::StepUnderflow { t_last: -t_last },
        other => other,
    };
    Ok(Trajectory {
        params: *p,
        states,
        termination,
        integrator: kind,
        options: *opts,
        t0: s0.t,
    })
}

/// Integrates backward to `t_lo` and forward to `t_hi` from `s0` and joins
/// the two runs into one increasing trajectory.
///
/// The joined termination is `Completed` only when both halves completed;
/// otherwise it is the first non-completed half (backward checked first).
pub fn integrate_two_sided(
    p: &OdeParams,
    s0: &State,
    kind: IntegratorKind,
    opts: &IntegrateOptions,
    t_lo: f64,
    t_hi: f64,
) -> Result<Trajectory> {
    if !(t_lo <= s0.t && s0.t <= t_hi) {
        return Err(Error::InvalidOptions("need t_lo <= t0 <= t_hi".into()));
    }
    let back = integrate(p, s0, kind, &opts.with_t_end(t_lo))?;
    let fwd = integrate(p, s0, kind, &opts.with_t_end(t_hi))?;
    let mut states: Vec<State> = back.states.iter().rev().copied().collect();
    states.pop();
    states.extend_from_slice(&fwd.states);
    let termination = match (back.termination, fwd.termination) {
        (Termination::Completed, other) => other,
        (other, _) => other,
    };
    Ok(Trajectory {
        params: *p,
        states,
        termination,
        integrator: kind,
        options: *opts,
        t0: s0.t,
    })
}

fn march(
    p: &OdeParams,
    s0: &State,
    kind: IntegratorKind,
    opts: &IntegrateOptions,
) -> (Vec<State>, Termination) {
    let order = kind.order();
    let cap = opts.step_cap.unwrap_or(kind.default_step_cap());
    let richardson = 2f64.powi(order) - 1.0;
    let exponent = 1.0 / (order as f64 + 1.0);
    let span = opts.t_end - s0.t;
    let t_eps = 8.0 * f64::EPSILON * s0.t.abs().max(opts.t_end.abs()).max(1.0);

    let mut states = vec![*s0];
    let mut tail: Vec<State> = Vec::with_capacity(TAIL_LEN + 1);
    let mut s = *s0;
    let mut acc = Compensated { s, cu: 0.0, cv: 0.0 };
    let mut h = opts.h0.min(span.max(0.0));
    let mut accepted = 0usize;
    let mut attempts = 0usize;

    let finish = |mut states: Vec<State>, s: State, term: Termination| {
        if states.last().map(|x| x.t) != Some(s.t) {
            states.push(s);
        }
        (states, term)
    };

    loop {
        let remaining = opts.t_end - s.t;
        if remaining <= t_eps {
            return finish(states, s, Termination::Completed);
        }
        if attempts >= opts.max_steps {
            return finish(states, s, Termination::MaxSteps);
        }
        attempts += 1;

        if s.u.abs() > 1.0 {
            h = h.min(cap / s.u.abs());
        }
        let last_step = h >= remaining;
        if last_step {
            h = remaining;
        } else if h < opts.h_min {
            return finish(states, s, Termination::StepUnderflow { t_last: s.t });
        }

        let full = take_increment(p, &s, h, kind, opts);
        let half = take_increment(p, &s, 0.5 * h, kind, opts).and_then(|d1| {
            let mid = acc.add(0.5 * h, d1.0, d1.1);
            take_increment(p, &mid.s, 0.5 * h, kind, opts).map(|d2| (d1, mid, d2))
        });
        let (full, (d1, mid, d2)) = match (full, half) {
            (Ok(f), Ok(c)) => (f, c),
            _ => {
                h *= 0.5;
                if h < opts.h_min && !(h >= remaining) {
                    return finish(states, s, Termination::StepUnderflow { t_last: s.t });
                }
                continue;
            }
        };
        let fine_acc = mid.add(0.5 * h, d2.0, d2.1);
        let fine = fine_acc.s;
        let err = [(d1.0 + d2.0 - full.0, fine.u, s.u), (d1.1 + d2.1 - full.1, fine.v, s.v)]
            .iter()
            .map(|&(diff, a, old)| diff.abs() / richardson / (opts.local_tol * a.abs().max(old.abs()).max(1.0)))
            .fold(0.0f64, f64::max);

        if err <= 1.0 {
            let mut next = fine;
            next.t = if last_step { opts.t_end } else { s.t + h };
            let thr = opts.blowup_threshold;
            if next.u.abs() > thr || next.v.abs() > thr * thr {
                let t_estimate = fit_tail(&tail)
                    .map(|t| t.max(s.t))
                    .unwrap_or(s.t);
                return finish(
                    states,
                    s,
                    Termination::BlowUp {
                        t_estimate,
                        direction: 1,
                    },
                );
            }
            s = next;
            acc = Compensated { s, ..fine_acc };
            accepted += 1;
            if s.u.abs() >= TAIL_MIN_U {
                if tail.len() == TAIL_LEN {
                    tail.remove(0);
                }
                tail.push(s);
            }
            if accepted % opts.record_every == 0 && !last_step {
                states.push(s);
            }
            let growth = if err == 0.0 { 4.0 } else { (0.9 * err.powf(-exponent)).clamp(0.2, 4.0) };
            if !last_step {
                h *= growth;
            }
        } else {
            h *= (0.9 * err.powf(-exponent)).clamp(0.2, 0.9);
        }
    }
}

/// Least-squares fit of `1/u` affine in `t` over the given tail; returns the
/// zero crossing `T` of the fitted line.
fn fit_tail(tail: &[State]) -> Result<f64> {
    if tail.len() < 4 {
        return Err(Error::FitFailure(format!(
            "need at least 4 tail samples with |u| >= {TAIL_MIN_U}, got {}",
            tail.len()
        )));
    }
    let t_ref = tail.last().unwrap().t;
    let n = tail.len() as f64;
    let xs: Vec<f64> = tail.iter().map(|s| s.t - t_ref).collect();
    let ys: Vec<f64> = tail.iter().map(|s| 1.0 / s.u).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= 0.0 || sxy == 0.0 || !sxy.is_finite() {
        return Err(Error::FitFailure("degenerate tail fit".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let t = t_ref - intercept / slope;
    if !t.is_finite() {
        return Err(Error::FitFailure("non-finite blow-up time".into()));
    }
    Ok(t)
}

/// Blow-up time of a trajectory that terminated with `BlowUp`, by fitting
/// `u ~ c/(T - t)` on the last recorded states with `|u| >= 1e3`.
pub fn estimate_blowup_time(traj: &Trajectory) -> Result<f64> {
    let direction = match traj.termination {
        Termination::BlowUp { direction, .. } => direction,
        other => {
            return Err(Error::FitFailure(format!(
                "trajectory terminated with {}, not blow-up",
                other.label()
            )))
        }
    };
    let tail: Vec<State> = traj
        .states
        .iter()
        .rev()
        .take_while(|s| s.u.abs() >= TAIL_MIN_U)
        .take(TAIL_LEN)
        .copied()
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    let t = fit_tail(&tail)?;
    let t_last = traj.last().t;
    Ok(if direction > 0 { t.max(t_last) } else { t.min(t_last) })
}

/// `T = \int_a^\infty dv / sqrt(acoef v^4 + c)`, the escape time of
/// `v' = sqrt(acoef v^4 + c)` started at `v = a`.
///
/// The half-line is mapped onto `[0, 1)` by `v = a + y^2/(1 - y^2)`, which
/// removes both the `v^-2` tail and an inverse-square-root zero of the
/// radicand at `v = a`.
pub fn quadrature_blowup_time(acoef: f64, c: f64, a: f64) -> Result<f64> {
    if !(acoef > 0.0 && acoef.is_finite() && c.is_finite() && a.is_finite()) {
        return Err(Error::Domain("need acoef > 0 and finite c, a".into()));
    }
    let radicand = |v: f64| acoef * v.powi(4) + c;
    // minimum of the radicand over [a, inf)
    let v_min = if a < 0.0 { 0.0 } else { a };
    let r_min = radicand(v_min);
    let r_a = radicand(a);
    let scale = acoef * a.powi(4) + c.abs();
    if r_min < -1e-14 * scale || (r_min <= 1e-14 * scale && v_min != a) {
        return Err(Error::Domain(format!(
            "radicand acoef*v^4 + c vanishes or is negative on [{a}, inf)"
        )));
    }
    if r_a.abs() <= 1e-14 * scale && acoef * a.powi(3) == 0.0 {
        return Err(Error::Domain("non-integrable singularity at the left endpoint".into()));
    }
    let integrand = |y: f64| {
        let one_minus = 1.0 - y * y;
        let v = a + y * y / one_minus;
        let dv = 2.0 * y / (one_minus * one_minus);
        let r = radicand(v).max(0.0);
        if dv == 0.0 {
            return 0.0;
        }
        if r == 0.0 || !dv.is_finite() {
            // v rounded onto a zero of the radicand; such y are within
            // rounding of an endpoint and contribute nothing measurable
            return 0.0;
        }
        dv / r.sqrt()
    };
    quadrature::integrate(integrand, 0.0, 1.0, 1e-13)
}
