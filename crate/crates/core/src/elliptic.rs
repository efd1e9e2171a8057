//! The lemniscatic sine `sl` on the real line, the complete elliptic integral
//! of the first kind and the lemniscate quarter period.
//!
//! `sl` is the solution of `(y')^2 = 1 - y^4`, `y(0) = 0`, `y'(0) = 1`, i.e. the
//! restriction of `sn(i, .)` to the real axis. It is odd, satisfies
//! `sl(2q - t) = sl(t)` with `q` the quarter period, and has period `4q`.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::integrate::{integrate_fixed, IntegratorKind};
use crate::model::{OdeParams, State};
use crate::quadrature;

/// Number of steps of the reference table on `[0, q]`.
const TABLE_STEPS: usize = 4096;

/// `q = \int_0^1 dy / sqrt(1 - y^4)`, the first maximum of `sl`.
///
/// Computed as `\int_0^{pi/2} d theta / sqrt(1 + sin^2 theta)`, which has a
/// smooth integrand.
pub fn lemniscate_quarter_period() -> f64 {
    static Q: OnceLock<f64> = OnceLock::new();
    *Q.get_or_init(|| {
        quadrature::integrate(|th: f64| 1.0 / (1.0 + th.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-15)
            .expect("smooth integrand on a finite interval")
    })
}

/// Complete elliptic integral of the first kind `K(k)` by the
/// arithmetic-geometric mean.
pub fn k_agm(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("K(k) needs 0 <= k < 1, got {k}")));
    }
    let mut a = 1.0;
    let mut g = (1.0 - k * k).sqrt();
    for _ in 0..64 {
        if (a - g).abs() <= 1e-16 * a {
            break;
        }
        (a, g) = (0.5 * (a + g), (a * g).sqrt());
    }
    Ok(FRAC_PI_2 / a)
}

/// Dense samples of `sl` on one quarter period, built once.
#[derive(Debug, Clone)]
pub struct LemniscaticTable {
    pub quarter_period: f64,
    /// `(t, sl(t), sl'(t))` on a uniform grid from `0` to `quarter_period`.
    pub samples: Vec<(f64, f64, f64)>,
}

impl LemniscaticTable {
    /// The shared table.
    pub fn get() -> &'static LemniscaticTable {
        static TABLE: OnceLock<LemniscaticTable> = OnceLock::new();
        TABLE.get_or_init(LemniscaticTable::build)
    }

    fn build() -> LemniscaticTable {
        let q = lemniscate_quarter_period();
        let h = q / TABLE_STEPS as f64;
        // y'' = -2 y^3
        let p = OdeParams::from_coeffs(0.0, -2.0);
        let states = integrate_fixed(&p, &State::new(0.0, 0.0, 1.0), IntegratorKind::Gauss6, h, TABLE_STEPS)
            .expect("bounded oscillation integrates without failure");
        let mut samples: Vec<(f64, f64, f64)> = states.iter().map(|s| (s.t, s.u, s.v)).collect();
        if let Some(last) = samples.last_mut() {
            last.0 = q;
        }
        LemniscaticTable { quarter_period: q, samples }
    }

    fn step(&self) -> f64 {
        self.quarter_period / (self.samples.len() - 1) as f64
    }

    /// Cubic Hermite interpolation of value and derivative for `t` in `[0, q]`.
    fn interpolate(&self, t: f64) -> (f64, f64) {
        let h = self.step();
        let n = self.samples.len() - 1;
        let i = ((t / h).floor().max(0.0) as usize).min(n - 1);
        let (t0, y0, d0) = self.samples[i];
        let (_, y1, d1) = self.samples[i + 1];
        let s = ((t - t0) / h).clamp(0.0, 1.0);
        let hermite = |f0: f64, f1: f64, g0: f64, g1: f64| {
            let s2 = s * s;
            let s3 = s2 * s;
            (2.0 * s3 - 3.0 * s2 + 1.0) * f0
                + (s3 - 2.0 * s2 + s) * h * g0
                + (-2.0 * s3 + 3.0 * s2) * f1
                + (s3 - s2) * h * g1
        };
        let value = hermite(y0, y1, d0, d1);
        let derivative = hermite(d0, d1, -2.0 * y0.powi(3), -2.0 * y1.powi(3));
        (value, derivative)
    }

    pub fn sl(&self, t: f64) -> (f64, f64) {
        let q = self.quarter_period;
        let tau = t.rem_euclid(4.0 * q);
        if tau <= q {
            self.interpolate(tau)
        } else if tau <= 2.0 * q {
            let (y, d) = self.interpolate(2.0 * q - tau);
            (y, -d)
        } else if tau <= 3.0 * q {
            let (y, d) = self.interpolate(tau - 2.0 * q);
            (-y, -d)
        } else {
            let (y, d) = self.interpolate(4.0 * q - tau);
            (-y, d)
        }
    }
}

/// `(sl(t), sl'(t))` for any real `t`.
pub fn sl(t: f64) -> (f64, f64) {
    LemniscaticTable::get().sl(t)
}
