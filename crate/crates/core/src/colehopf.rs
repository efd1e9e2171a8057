//! The conformal factor `f = C exp(\int u)` and the third-order equation
//!
//! ```text
//! f^2 f''' - 2 (m+1)/(m-2) f f' f'' + m^2/(m-2)^2 f'^3 = 0
//! ```
//!
//! it satisfies exactly when `u = f'/f` solves the second-order equation.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{cumulative_integral, DiagnosticsReport};
use crate::error::{Error, Result};
use crate::integrate::{integrate_fixed, step_gauss6, IntegratorKind, Termination, Trajectory};
use crate::model::{OdeParams, State};

/// Samples of `f` with `f(anchor) = c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileF {
    /// `(x, f(x))`, strictly increasing in `x`.
    pub samples: Vec<(f64, f64)>,
    pub c: f64,
    pub anchor: f64,
}

impl ProfileF {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The same profile multiplied by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> ProfileF {
        ProfileF {
            samples: self.samples.iter().map(|&(x, f)| (x, lambda * f)).collect(),
            c: lambda * self.c,
            anchor: self.anchor,
        }
    }
}

fn check_reconstructable(traj: &Trajectory, c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("C must be positive, got {c}")));
    }
    if matches!(traj.termination, Termination::BlowUp { .. }) {
        return Err(Error::BlownUpTrajectory);
    }
    if traj.states.is_empty() {
        return Err(Error::InsufficientData("empty trajectory".into()));
    }
    Ok(())
}

fn profile_from_states(p: &OdeParams, states: &[State], c: f64, anchor: f64) -> ProfileF {
    let integral = cumulative_integral(p, states);
    // shift so that the integral vanishes at the anchor
    let i_anchor = states
        .iter()
        .zip(&integral)
        .min_by(|a, b| (a.0.t - anchor).abs().total_cmp(&(b.0.t - anchor).abs()))
        .map(|(_, &i)| i)
        .unwrap_or(0.0);
    let samples = states
        .iter()
        .zip(&integral)
        .map(|(s, &i)| (s.t, c * (i - i_anchor).exp()))
        .collect();
    ProfileF { samples, c, anchor }
}

/// `f = C exp(\int_{t0}^x u)` at the recorded states of `traj`, with `t0` the
/// time of its initial condition.
pub fn reconstruct_f(traj: &Trajectory, c: f64) -> Result<ProfileF> {
    check_reconstructable(traj, c)?;
    Ok(profile_from_states(&traj.params, &traj.states, c, traj.t0))
}

/// States on the uniform grid `t0 + j h` covering the recorded range.
///
/// The grid is filled by a single fixed-step Gauss–Legendre flow from the
/// initial condition in both directions, so that neighbouring samples are
/// consistent to rounding, as high-order differences of `f` require.
pub fn resample_uniform(traj: &Trajectory, h: f64) -> Result<Vec<State>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidOptions(format!("resample step must be positive, got {h}")));
    }
    let st = &traj.states;
    let (first, last) = (st[0].t, st[st.len() - 1].t);
    let t0 = traj.t0;
    let slack = 1e-9 * h;
    let n_back = ((t0 - first) / h + slack).floor().max(0.0) as usize;
    let n_fwd = ((last - t0) / h + slack).floor().max(0.0) as usize;
    let mut start = *traj.nearest(t0);
    if (start.t - t0).abs() > slack {
        start = step_gauss6(&traj.params, &start, t0 - start.t, 1e-15, 100)?;
    }
    start.t = t0;
    let back = integrate_fixed(&traj.params, &start, IntegratorKind::Gauss6, -h, n_back)?;
    let fwd = integrate_fixed(&traj.params, &start, IntegratorKind::Gauss6, h, n_fwd)?;
    let mut out: Vec<State> = back.into_iter().skip(1).rev().collect();
    out.extend(fwd);
    Ok(out)
}

/// [`reconstruct_f`] on the uniform grid of [`resample_uniform`].
pub fn reconstruct_f_uniform(traj: &Trajectory, c: f64, h: f64) -> Result<ProfileF> {
    check_reconstructable(traj, c)?;
    let states = resample_uniform(traj, h)?;
    if states.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    Ok(profile_from_states(&traj.params, &states, c, traj.t0))
}

/// `a + (m-8)/(m-2) u v - 2(m-4)/(m-2)^2 u^3`: the third-order residual divided
/// by `f^3`, written in terms of `u = f'/f`, `v = u'` and `a = u''`.
pub fn eq0_residual_from_u(m: f64, u: f64, v: f64, a: f64) -> Result<f64> {
    if !(m > 2.0) {
        return Err(Error::Domain(format!("need m > 2, got {m}")));
    }
    let d = m - 2.0;
    Ok(a + (m - 8.0) / d * u * v - 2.0 * (m - 4.0) / (d * d) * u.powi(3))
}

/// `f^2 f''' - 2 (m+1)/(m-2) f f' f'' + m^2/(m-2)^2 f'^3`.
pub fn eq0_lhs(m: f64, f: f64, f1: f64, f2: f64, f3: f64) -> f64 {
    let d = m - 2.0;
    f * f * f3 - 2.0 * (m + 1.0) / d * f * f1 * f2 + m * m / (d * d) * f1.powi(3)
}

fn uniform_step(profile: &ProfileF, needed: usize) -> Result<f64> {
    let s = &profile.samples;
    if s.len() < needed {
        return Err(Error::InsufficientSamples { needed, got: s.len() });
    }
    let h = (s[s.len() - 1].0 - s[0].0) / (s.len() - 1) as f64;
    let uniform = h > 0.0 && s.windows(2).all(|w| ((w[1].0 - w[0].0) - h).abs() <= 1e-9 * h);
    if !uniform {
        return Err(Error::NonUniformGrid);
    }
    Ok(h)
}

/// Fourth-order central differences `(f', f'', f''')` at interior index `i`
/// (needs three neighbours on each side).
fn derivatives(f: &[f64], i: usize, h: f64) -> (f64, f64, f64) {
    let (m3, m2, m1, z, p1, p2, p3) = (f[i - 3], f[i - 2], f[i - 1], f[i], f[i + 1], f[i + 2], f[i + 3]);
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
    let d3 = (m3 - 8.0 * m2 + 13.0 * m1 - 13.0 * p1 + 8.0 * p2 - p3) / (8.0 * h * h * h);
    (d1, d2, d3)
}

/// Pointwise `(x, lhs, scale)` of the third-order equation at interior samples,
/// with derivatives from fourth-order central differences and
/// `scale = f^3 max(1, |u|)^3`, `u = f'/f`.
pub fn eq0_residuals_fd(profile: &ProfileF, m: f64) -> Result<Vec<(f64, f64, f64)>> {
    if !(m > 2.0) {
        return Err(Error::Domain(format!("need m > 2, got {m}")));
    }
    let h = uniform_step(profile, 7)?;
    let f: Vec<f64> = profile.samples.iter().map(|&(_, f)| f).collect();
    Ok((3..f.len() - 3)
        .map(|i| {
            let (d1, d2, d3) = derivatives(&f, i, h);
            let u = d1 / f[i];
            let scale = f[i].powi(3) * u.abs().max(1.0).powi(3);
            (profile.samples[i].0, eq0_lhs(m, f[i], d1, d2, d3), scale)
        })
        .collect())
}

/// Max over interior samples of the third-order residual with derivatives
/// from finite differences, relative to `max(1, f^3 max(1, |u|)^3)`.
pub fn eq0_residual_fd(profile: &ProfileF, m: f64) -> Result<f64> {
    Ok(eq0_residuals_fd(profile, m)?
        .into_iter()
        .map(|(_, r, scale)| r.abs() / scale.max(1.0))
        .fold(0.0, f64::max))
}

/// `u = (ln f)'` by fourth-order central differences at interior samples.
pub fn log_derivative(profile: &ProfileF) -> Result<Vec<(f64, f64)>> {
    let h = uniform_step(profile, 5)?;
    let g: Vec<f64> = profile.samples.iter().map(|&(_, f)| f.ln()).collect();
    Ok((2..g.len() - 2)
        .map(|i| {
            let d = (g[i - 2] - 8.0 * g[i - 1] + 8.0 * g[i + 1] - g[i + 2]) / (12.0 * h);
            (profile.samples[i].0, d)
        })
        .collect())
}

/// Stores the finite-difference residual of `profile` in the report.
pub fn attach_eq0_residual(report: &mut DiagnosticsReport, profile: &ProfileF, m: f64) -> Result<()> {
    report.eq0_residual_max = Some(eq0_residual_fd(profile, m)?);
    Ok(())
}
