//! Exact solution families used as oracles.
//!
//! For `B = 0` the equation integrates once to `u' = (A/2)(u^2 + C)` with
//! `C = (2/A)(u'(0) - (A/2)u(0)^2)`, and every solution is one of a tanh, coth,
//! tan or rational profile. For `A = 0` the energy is conserved: zero energy
//! with `B > 0` gives a rational solution, `B < 0` gives scaled lemniscatic
//! sines. `Logistic` is the comparison solution of `w' = g0 - k w^2`.
//!
//! All families are parameterized by their data at `t = 0`.

use serde::{Deserialize, Serialize};

use crate::elliptic::{lemniscate_quarter_period, sl};
use crate::error::{Error, Result};
use crate::model::OdeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClosedForm {
    /// `u = -b tanh((A/2) b t + c)`; global. `B = 0`.
    Tanh { b: f64, c: f64 },
    /// `u = u0 / (1 + sign sqrt(B/2) u0 t)`; `A = 0`, `B > 0`, zero energy.
    RationalE0 { u0: f64, sign: Sign },
    /// `u = sqrt(C) tan((A/2) sqrt(C) t + arctan(u0/sqrt(C)))`; `B = 0`, `C > 0`.
    TanBranch { c: f64, u0: f64 },
    /// `u = -sqrt(|C|) coth((A/2) sqrt(|C|) t - artanh(sqrt(|C|)/u0))`;
    /// `B = 0`, `C < 0`, `|u0| > sqrt(|C|)`.
    RecipTanhBranch { c: f64, u0: f64 },
    /// `u = u0 / (1 - (A/2) u0 t)`; `B = 0`, `C = 0`.
    RationalC0 { u0: f64 },
    /// `u = u0`; requires `B u0^3 = 0`.
    Constant { u0: f64 },
    /// `w' = g0 - k w^2`, `w(0) = v0`, `k > 0`. Not a solution of the ODE.
    Logistic { g0: f64, k: f64, v0: f64 },
    /// `u = Cc sl(Cc kappa (t + t0))`; `A = 0`, `B = -2 kappa^2 < 0`.
    Lemniscatic { cc: f64, kappa: f64, t0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClosedFormValue {
    Point { u: f64, v: f64 },
    /// The branch is singular at this time, which lies between `0` and the
    /// requested time (inclusive).
    PoleAt(f64),
}

impl ClosedFormValue {
    pub fn point(self) -> Option<(f64, f64)> {
        match self {
            ClosedFormValue::Point { u, v } => Some((u, v)),
            ClosedFormValue::PoleAt(_) => None,
        }
    }
}

fn near_zero(x: f64, scale: f64) -> bool {
    x.abs() <= 1e-14 * scale.max(1.0)
}

fn mismatch(family: &'static str, p: &OdeParams) -> Error {
    Error::BranchMismatch {
        family,
        a: p.a(),
        b: p.b(),
    }
}

fn require_b_zero(family: &'static str, p: &OdeParams) -> Result<()> {
    if near_zero(p.b(), p.a().abs()) && p.a() != 0.0 {
        Ok(())
    } else {
        Err(mismatch(family, p))
    }
}

/// `PoleAt(tp)` when `tp` lies in `(0, t]` or `[t, 0)`.
fn pole_reached(tp: f64, t: f64) -> bool {
    tp.is_finite() && ((tp > 0.0 && t >= tp) || (tp < 0.0 && t <= tp))
}

/// `C = (2/A)(v0 - (A/2) u0^2)`, the constant of `u' = (A/2)(u^2 + C)`.
pub fn m4_constant_c(u0: f64, v0: f64, a: f64) -> Result<f64> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::Domain(format!("need A != 0, got {a}")));
    }
    Ok((2.0 / a) * (v0 - 0.5 * a * u0 * u0))
}

/// `A sqrt(|C|)`. The branches for `B = 0` run at half this rate.
pub fn a_c(a: f64, c: f64) -> f64 {
    a * c.abs().sqrt()
}

/// `a / cosh(b x + c)`, the conformal factor whose log-derivative is the tanh
/// solution.
pub fn sech_profile(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("need a > 0, got {a}")));
    }
    Ok(a / (b * x + c).cosh())
}

/// Inverse of `sl` on one period: the phase `phi` in `(-2q, 2q]` with
/// `sl(phi) = y`, `sign(sl'(phi)) = sign(d)`.
fn sl_phase(y: f64, d: f64) -> f64 {
    let q = lemniscate_quarter_period();
    let ya = y.abs().min(1.0);
    // the table is increasing in value and decreasing in slope on [0, q];
    // invert whichever is better conditioned
    let by_value = ya.powi(4) <= 0.5;
    let (mut lo, mut hi) = (0.0, q);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let (sy, sd) = sl(mid);
        let below = if by_value { sy < ya } else { sd > d.abs() };
        if below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let phi = 0.5 * (lo + hi);
    match (y >= 0.0, d >= 0.0) {
        (true, true) => phi,
        (true, false) => 2.0 * q - phi,
        (false, true) => -phi,
        (false, false) => -(2.0 * q - phi),
    }
}

impl ClosedForm {
    /// The family through `(u0, v0)` at `t = 0`, for the parameter sets that
    /// admit one: `B = 0`, or `A = 0` with `B < 0`, or `A = 0`, `B > 0` on the
    /// zero-energy curve.
    pub fn from_initial(p: &OdeParams, u0: f64, v0: f64) -> Result<ClosedForm> {
        let (a, b) = (p.a(), p.b());
        if !(u0.is_finite() && v0.is_finite()) {
            return Err(Error::Domain("initial data must be finite".into()));
        }
        if a == 0.0 && b == 0.0 {
            return if v0 == 0.0 {
                Ok(ClosedForm::Constant { u0 })
            } else {
                Err(mismatch("linear", p))
            };
        }
        if a != 0.0 && near_zero(b, a.abs()) {
            let c = m4_constant_c(u0, v0, a)?;
            let s = c.abs().sqrt();
            let scale = u0 * u0 + (2.0 * v0 / a).abs();
            if near_zero(c, scale) {
                return Ok(if u0 == 0.0 {
                    ClosedForm::Constant { u0 }
                } else {
                    ClosedForm::RationalC0 { u0 }
                });
            }
            if c > 0.0 {
                return Ok(ClosedForm::TanBranch { c, u0 });
            }
            if v0 == 0.0 || near_zero(u0.abs() - s, s) {
                return Ok(ClosedForm::Constant { u0 });
            }
            if u0.abs() < s {
                return Ok(ClosedForm::Tanh {
                    b: s,
                    c: -(u0 / s).atanh(),
                });
            }
            return Ok(ClosedForm::RecipTanhBranch { c, u0 });
        }
        if a == 0.0 && b < 0.0 {
            let kappa = (-0.5 * b).sqrt();
            let r4 = v0 * v0 + kappa * kappa * u0.powi(4);
            if r4 == 0.0 {
                return Ok(ClosedForm::Constant { u0: 0.0 });
            }
            let cc = r4.powf(0.25) / kappa.sqrt();
            let phi = sl_phase(u0 / cc, v0 / (cc * cc * kappa));
            return Ok(ClosedForm::Lemniscatic {
                cc,
                kappa,
                t0: phi / (cc * kappa),
            });
        }
        if a == 0.0 && b > 0.0 {
            let e = 0.5 * v0 * v0 - 0.25 * b * u0.powi(4);
            if u0 == 0.0 && v0 == 0.0 {
                return Ok(ClosedForm::Constant { u0 });
            }
            if near_zero(e, 0.5 * v0 * v0 + 0.25 * b * u0.powi(4)) && u0 != 0.0 {
                // v = -sign sqrt(B/2) u^2
                let sign = if v0 > 0.0 { Sign::Minus } else { Sign::Plus };
                return Ok(ClosedForm::RationalE0 { u0, sign });
            }
            return Err(mismatch("zero-energy rational", p));
        }
        Err(mismatch("closed form", p))
    }

    /// Value and derivative at time `t`, or the pole that cuts the branch off
    /// before `t`.
    pub fn eval(&self, p: &OdeParams, t: f64) -> Result<ClosedFormValue> {
        let (a, b) = (p.a(), p.b());
        let point = |u: f64, v: f64| Ok(ClosedFormValue::Point { u, v });
        match *self {
            ClosedForm::Tanh { b: bb, c } => {
                require_b_zero("tanh", p)?;
                let th = (0.5 * a * bb * t + c).tanh();
                point(-bb * th, -0.5 * a * bb * bb * (1.0 - th * th))
            }
            ClosedForm::RationalE0 { u0, sign } => {
                if !(a == 0.0 && b > 0.0) || u0 == 0.0 {
                    return Err(mismatch("zero-energy rational", p));
                }
                let r = (0.5 * b).sqrt();
                let tp = -1.0 / (sign.value() * r * u0);
                if pole_reached(tp, t) {
                    return Ok(ClosedFormValue::PoleAt(tp));
                }
                let u = u0 / (1.0 + sign.value() * r * u0 * t);
                point(u, -sign.value() * r * u * u)
            }
            ClosedForm::TanBranch { c, u0 } => {
                require_b_zero("tan", p)?;
                if !(c > 0.0) {
                    return Err(Error::Domain(format!("tan branch needs C > 0, got {c}")));
                }
                let s = c.sqrt();
                let w = 0.5 * a * s;
                let phase0 = (u0 / s).atan();
                let half_pi = std::f64::consts::FRAC_PI_2;
                // nearest poles on either side of t = 0
                let (fwd, bwd) = if w > 0.0 {
                    ((half_pi - phase0) / w, (-half_pi - phase0) / w)
                } else {
                    ((-half_pi - phase0) / w, (half_pi - phase0) / w)
                };
                for tp in [fwd, bwd] {
                    if pole_reached(tp, t) {
                        return Ok(ClosedFormValue::PoleAt(tp));
                    }
                }
                let u = s * (w * t + phase0).tan();
                point(u, 0.5 * a * (u * u + c))
            }
            ClosedForm::RecipTanhBranch { c, u0 } => {
                require_b_zero("reciprocal tanh", p)?;
                let s = (-c).sqrt();
                if !(c < 0.0 && u0.abs() > s) {
                    return Err(Error::Domain(format!(
                        "reciprocal tanh branch needs C < 0 and |u0| > sqrt(|C|), got C={c}, u0={u0}"
                    )));
                }
                let w = 0.5 * a * s;
                let phase0 = -(s / u0).atanh();
                let tp = -phase0 / w;
                if pole_reached(tp, t) {
                    return Ok(ClosedFormValue::PoleAt(tp));
                }
                let u = -s / (w * t + phase0).tanh();
                point(u, 0.5 * a * (u * u + c))
            }
            ClosedForm::RationalC0 { u0 } => {
                require_b_zero("rational", p)?;
                let tp = 2.0 / (a * u0);
                if pole_reached(tp, t) {
                    return Ok(ClosedFormValue::PoleAt(tp));
                }
                let u = u0 / (1.0 - 0.5 * a * u0 * t);
                point(u, 0.5 * a * u * u)
            }
            ClosedForm::Constant { u0 } => {
                if !near_zero(b * u0.powi(3), 1.0) {
                    return Err(mismatch("constant", p));
                }
                point(u0, 0.0)
            }
            ClosedForm::Logistic { g0, k, v0 } => logistic(g0, k, v0, t),
            ClosedForm::Lemniscatic { cc, kappa, t0 } => {
                if !(a == 0.0 && b < 0.0) || !(kappa > 0.0) {
                    return Err(mismatch("lemniscatic", p));
                }
                if (2.0 * kappa * kappa + b).abs() > 1e-12 * b.abs() {
                    return Err(mismatch("lemniscatic (kappa^2 != -B/2)", p));
                }
                let (y, d) = sl(cc * kappa * (t + t0));
                point(cc * y, cc * cc * kappa * d)
            }
        }
    }
}

fn logistic(g0: f64, k: f64, v0: f64, t: f64) -> Result<ClosedFormValue> {
    if !(k > 0.0 && g0.is_finite() && v0.is_finite()) {
        return Err(Error::Domain(format!("logistic needs k > 0, got {k}")));
    }
    let point = |w: f64| Ok(ClosedFormValue::Point { u: w, v: g0 - k * w * w });
    if g0 == 0.0 {
        let tp = -1.0 / (k * v0);
        if pole_reached(tp, t) {
            return Ok(ClosedFormValue::PoleAt(tp));
        }
        return point(v0 / (1.0 + k * v0 * t));
    }
    let r = (g0.abs() / k).sqrt();
    let lambda = (g0.abs() * k).sqrt();
    if g0 > 0.0 {
        if v0.abs() < r {
            return point(r * (lambda * t + (v0 / r).atanh()).tanh());
        }
        if v0.abs() == r {
            return point(v0);
        }
        let phase0 = (r / v0).atanh();
        let tp = -phase0 / lambda;
        if pole_reached(tp, t) {
            return Ok(ClosedFormValue::PoleAt(tp));
        }
        return point(r / (lambda * t + phase0).tanh());
    }
    // w = -r tan(lambda t - arctan(v0/r))
    let phase0 = -(v0 / r).atan();
    let half_pi = std::f64::consts::FRAC_PI_2;
    for tp in [(half_pi - phase0) / lambda, (-half_pi - phase0) / lambda] {
        if pole_reached(tp, t) {
            return Ok(ClosedFormValue::PoleAt(tp));
        }
    }
    point(-r * (lambda * t + phase0).tan())
}
