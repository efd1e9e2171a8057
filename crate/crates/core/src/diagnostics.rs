//! The energy `e = v^2/2 - (B/4) u^4` and the Riccati combination
//! `g_k = v + k u^2` along solutions, with their evolution laws
//!
//! ```text
//! de/dt = A u v^2,        g_k(t) = g_k(0) exp((A + 2k) \int_0^t u)
//! ```
//!
//! (the second for roots `k` of `2k^2 + Ak - B = 0`), and residual reports for
//! trajectories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::Trajectory;
use crate::model::{OdeParams, State};

/// Largest allowed `|2k^2 + Ak - B|` for `k` to count as a characteristic root.
pub const ROOT_TOL: f64 = 1e-10;

pub fn energy(p: &OdeParams, s: &State) -> f64 {
    0.5 * s.v * s.v - 0.25 * p.b() * s.u.powi(4)
}

pub fn g_k(s: &State, k: f64) -> f64 {
    s.v + k * s.u * s.u
}

/// Size of the two terms of the energy, `v^2/2 + |B| u^4/4`.
fn energy_scale(p: &OdeParams, s: &State) -> f64 {
    0.5 * s.v * s.v + 0.25 * p.b().abs() * s.u.powi(4)
}

/// `\int_{t_0}^{t_i} u` at every recorded state.
///
/// Each interval uses the exact integral of the quintic Hermite interpolant
/// through `u`, `u'` and `u''` at its ends, so the error is `O(h^7)` per
/// interval on any (non-uniform) grid.
pub fn cumulative_integral(p: &OdeParams, states: &[State]) -> Vec<f64> {
    let mut out = Vec::with_capacity(states.len());
    let mut acc = 0.0;
    let mut comp = 0.0;
    out.push(0.0);
    for w in states.windows(2) {
        let (s0, s1) = (&w[0], &w[1]);
        let h = s1.t - s0.t;
        let a0 = p.rhs(s0).1;
        let a1 = p.rhs(s1).1;
        let piece = 0.5 * h * (s0.u + s1.u) + h * h / 10.0 * (s0.v - s1.v) + h * h * h / 120.0 * (a0 + a1);
        // compensated running sum
        let y = piece - comp;
        let next = acc + y;
        comp = (next - acc) - y;
        acc = next;
        out.push(acc);
    }
    out
}

/// Max over interior recorded states of `|de/dt - A u v^2| / max(1, |e|)`,
/// with `de/dt` from the three-point difference on the recorded grid.
pub fn check_energy_law(p: &OdeParams, traj: &Trajectory) -> Result<f64> {
    let st = &traj.states;
    if st.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "energy law needs at least 3 states, got {}",
            st.len()
        )));
    }
    let e: Vec<f64> = st.iter().map(|s| energy(p, s)).collect();
    let mut worst = 0.0f64;
    for i in 1..st.len() - 1 {
        let h1 = st[i].t - st[i - 1].t;
        let h2 = st[i + 1].t - st[i].t;
        let de = -h2 / (h1 * (h1 + h2)) * e[i - 1] + (h2 - h1) / (h1 * h2) * e[i] + h1 / (h2 * (h1 + h2)) * e[i + 1];
        let s = &st[i];
        let law = p.a() * s.u * s.v * s.v;
        worst = worst.max((de - law).abs() / e[i].abs().max(1.0));
    }
    Ok(worst)
}

/// Max over recorded states of
/// `|g_k(t) - g_k(t_0) exp((A + 2k) \int_{t_0}^t u)|`, with `t_0` the first
/// recorded time, relative to `max(1, |g_k(t_0)|, |v| + |k| u^2)`.
pub fn check_gk_identity(p: &OdeParams, traj: &Trajectory, k: f64) -> Result<f64> {
    let residual = p.root_residual(k);
    if !(residual.abs() <= ROOT_TOL) {
        return Err(Error::NotACharacteristicRoot { k, residual });
    }
    let st = &traj.states;
    if st.is_empty() {
        return Err(Error::InsufficientData("empty trajectory".into()));
    }
    let integral = cumulative_integral(p, st);
    let g0 = g_k(&st[0], k);
    let rate = p.a() + 2.0 * k;
    let base = g0.abs().max(1.0);
    Ok(st
        .iter()
        .zip(&integral)
        .map(|(s, i)| {
            let norm = base.max(s.v.abs() + k.abs() * s.u * s.u);
            (g_k(s, k) - g0 * (rate * i).exp()).abs() / norm
        })
        .fold(0.0, f64::max))
}

/// Max of `|e - e_0| / max(|e_0|, v^2/2 + |B| u^4/4)` over recorded states.
///
/// The denominator equals `|e|` while the two terms of the energy do not
/// cancel; close to a singularity it is the size of the terms themselves.
pub fn energy_drift_rel(p: &OdeParams, traj: &Trajectory) -> f64 {
    let Some(first) = traj.states.first() else {
        return 0.0;
    };
    let e0 = energy(p, first);
    traj.states
        .iter()
        .map(|s| {
            let scale = e0.abs().max(energy_scale(p, s)).max(f64::MIN_POSITIVE);
            (energy(p, s) - e0).abs() / scale
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub energy_law_residual_max: f64,
    /// Worst over the real characteristic roots.
    pub gk_identity_residual_max: Option<f64>,
    /// Only for `A = 0`.
    pub energy_drift_rel: Option<f64>,
    /// Filled in by [`crate::colehopf`].
    pub eq0_residual_max: Option<f64>,
}

impl DiagnosticsReport {
    pub fn for_trajectory(p: &OdeParams, traj: &Trajectory) -> Result<DiagnosticsReport> {
        let energy_law_residual_max = check_energy_law(p, traj)?;
        let gk_identity_residual_max = match p.roots() {
            Some((k1, k2)) => Some(check_gk_identity(p, traj, k1)?.max(check_gk_identity(p, traj, k2)?)),
            None => None,
        };
        let energy_drift_rel = (p.a() == 0.0).then(|| energy_drift_rel(p, traj));
        Ok(DiagnosticsReport {
            energy_law_residual_max,
            gk_identity_residual_max,
            energy_drift_rel,
            eq0_residual_max: None,
        })
    }
}
