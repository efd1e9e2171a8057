use crate::error::{Error, Result};
use crate::model::{OdeParams, State};

/// One classical fourth-order Runge–Kutta step of size `h` (may be negative).
pub fn step_rk4(p: &OdeParams, s: &State, h: f64) -> Result<State> {
    let (du, dv) = increment_rk4(p, s, h)?;
    let out = State::new(s.t + h, s.u + du, s.v + dv);
    if !out.is_finite() {
        return Err(Error::NonFinite { t: s.t });
    }
    Ok(out)
}

pub(crate) fn increment_rk4(p: &OdeParams, s: &State, h: f64) -> Result<(f64, f64)> {
    let (u, v) = (s.u, s.v);
    let (k1u, k1v) = p.rhs_uv(u, v);
    let (k2u, k2v) = p.rhs_uv(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    let (k3u, k3v) = p.rhs_uv(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    let (k4u, k4v) = p.rhs_uv(u + h * k3u, v + h * k3v);
    let du = h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    let dv = h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if !(du.is_finite() && dv.is_finite()) {
        return Err(Error::NonFinite { t: s.t });
    }
    Ok((du, dv))
}
