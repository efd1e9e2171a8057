//! The ODE family `u'' = A u u' + B u^3`, its coefficient map from the
//! source dimension `m`, and the characteristic roots of `2k^2 + Ak - B = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of `u'' = A u u' + B u^3` together with derived quantities.
///
/// Immutable after construction. The roots are stored eagerly and are absent
/// when the discriminant `A^2 + 8B` is negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeParams {
    a: f64,
    b: f64,
    m: Option<f64>,
    disc: f64,
    roots: Option<(f64, f64)>,
}

impl OdeParams {
    /// Coefficients obtained from the Cole–Hopf reduction in dimension `m > 2`:
    /// `A = (8 - m)/(m - 2)` and `B = 2(m - 4)/(m - 2)^2`.
    pub fn from_dimension(m: f64) -> Result<Self> {
        if !(m.is_finite() && m > 2.0) {
            return Err(Error::Domain(format!("dimension m must be > 2, got {m}")));
        }
        let a = (8.0 - m) / (m - 2.0);
        let b = 2.0 * (m - 4.0) / ((m - 2.0) * (m - 2.0));
        let mut p = Self::from_coeffs(a, b);
        p.m = Some(m);
        // The closed forms k+ = (m-4)/(2(m-2)), k- = -2/(m-2) are exact roots;
        // use them directly so the m = 4 degeneracy lands on k+ = 0 exactly.
        p.roots = Some((-2.0 / (m - 2.0), (m - 4.0) / (2.0 * (m - 2.0))));
        Ok(p)
    }

    /// Arbitrary coefficients; `m` is absent.
    pub fn from_coeffs(a: f64, b: f64) -> Self {
        let disc = a * a + 8.0 * b;
        let roots = (disc >= 0.0).then(|| characteristic_roots(a, b, disc));
        Self {
            a,
            b,
            m: None,
            disc,
            roots,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn m(&self) -> Option<f64> {
        self.m
    }

    /// `A^2 + 8B`.
    pub fn disc(&self) -> f64 {
        self.disc
    }

    /// `(k_minus, k_plus)` with `k_minus <= k_plus`, when real.
    pub fn roots(&self) -> Option<(f64, f64)> {
        self.roots
    }

    pub fn k_minus(&self) -> Option<f64> {
        self.roots.map(|r| r.0)
    }

    pub fn k_plus(&self) -> Option<f64> {
        self.roots.map(|r| r.1)
    }

    /// `|2k^2 + Ak - B|`.
    pub fn root_residual(&self, k: f64) -> f64 {
        (2.0 * k * k + self.a * k - self.b).abs()
    }

    /// Right-hand side of the first-order system `(u' , v') = (v, A u v + B u^3)`.
    #[inline]
    pub fn rhs(&self, s: &State) -> (f64, f64) {
        self.rhs_uv(s.u, s.v)
    }

    #[inline]
    pub(crate) fn rhs_uv(&self, u: f64, v: f64) -> (f64, f64) {
        (v, self.a * u * v + self.b * u * u * u)
    }

    /// Parameters of the equation satisfied by `t -> u(-t)`, namely `(-A, B)`.
    ///
    /// The dimension is dropped since `-A` no longer follows the `m` formula.
    pub fn time_reversed(&self) -> Self {
        Self::from_coeffs(-self.a, self.b)
    }
}

/// Roots of `2k^2 + Ak - B = 0` by the cancellation-free quadratic formula.
fn characteristic_roots(a: f64, b: f64, disc: f64) -> (f64, f64) {
    let sq = disc.max(0.0).sqrt();
    let q = -0.5 * (a + a.signum() * sq);
    let (k1, k2) = if q == 0.0 {
        // a = 0 and disc = 0, hence b = 0 as well
        (-a / 4.0, -a / 4.0)
    } else {
        (q / 2.0, -b / q)
    };
    if k1 <= k2 {
        (k1, k2)
    } else {
        (k2, k1)
    }
}

/// A point `(t, u, u')` of extended phase space. Always finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub t: f64,
    pub u: f64,
    pub v: f64,
}

impl State {
    pub const fn new(t: f64, u: f64, v: f64) -> Self {
        Self { t, u, v }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.u.is_finite() && self.v.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dimension_examples() {
        let p3 = OdeParams::from_dimension(3.0).unwrap();
        assert_eq!((p3.a(), p3.b(), p3.disc()), (5.0, -2.0, 9.0));
        assert_eq!(p3.roots(), Some((-2.0, -0.5)));

        let p4 = OdeParams::from_dimension(4.0).unwrap();
        assert_eq!((p4.a(), p4.b(), p4.disc()), (2.0, 0.0, 4.0));
        assert_eq!(p4.roots(), Some((-1.0, 0.0)));

        let p8 = OdeParams::from_dimension(8.0).unwrap();
        assert_eq!(p8.a(), 0.0);
        assert!(close(p8.b(), 2.0 / 9.0, 1e-16));
        assert!(close(p8.disc(), 16.0 / 9.0, 1e-15));
        let (km, kp) = p8.roots().unwrap();
        assert!(close(km, -1.0 / 3.0, 1e-15) && close(kp, 1.0 / 3.0, 1e-15));

        let p5 = OdeParams::from_dimension(5.0).unwrap();
        assert_eq!(p5.a(), 1.0);
        assert!(close(p5.b(), 2.0 / 9.0, 1e-16));
        let (km, kp) = p5.roots().unwrap();
        assert!(close(km, -2.0 / 3.0, 1e-15) && close(kp, 1.0 / 6.0, 1e-15));
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(matches!(OdeParams::from_dimension(2.0), Err(Error::Domain(_))));
        assert!(OdeParams::from_dimension(1.5).is_err());
        assert!(OdeParams::from_dimension(f64::NAN).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let p = OdeParams::from_coeffs(2.0, -4.0);
        assert_eq!(p.disc(), -28.0);
        assert!(p.roots().is_none());
        assert!(p.m().is_none());

        let z = OdeParams::from_coeffs(0.0, 0.0);
        assert_eq!(z.disc(), 0.0);
        assert_eq!(z.roots(), Some((0.0, 0.0)));

        let q = OdeParams::from_coeffs(5.0, -2.0);
        let p3 = OdeParams::from_dimension(3.0).unwrap();
        assert_eq!((q.a(), q.b(), q.disc()), (p3.a(), p3.b(), p3.disc()));
        let (a, b) = (q.roots().unwrap(), p3.roots().unwrap());
        assert!(close(a.0, b.0, 1e-15) && close(a.1, b.1, 1e-15));
    }

    #[test]
    fn rhs_examples() {
        let p = OdeParams::from_coeffs(0.0, 2.0 / 9.0);
        assert_eq!(p.rhs(&State::new(0.0, 1.0, 0.0)), (0.0, 2.0 / 9.0));
        let any = OdeParams::from_coeffs(-3.7, 1.25);
        assert_eq!(any.rhs(&State::new(4.0, 0.0, 0.0)), (0.0, 0.0));
        let p4 = OdeParams::from_coeffs(2.0, 0.0);
        assert_eq!(p4.rhs(&State::new(0.0, 1.0, -1.0)), (-1.0, -2.0));
    }

    #[test]
    fn sign_table() {
        // (A, B) signs for m = 3, 4, 5, 8, 9
        let expected = [(1, -1), (1, 0), (1, 1), (0, 1), (-1, 1)];
        for (m, (sa, sb)) in [3.0, 4.0, 5.0, 8.0, 9.0].into_iter().zip(expected) {
            let p = OdeParams::from_dimension(m).unwrap();
            let sign = |x: f64| if x == 0.0 { 0 } else if x > 0.0 { 1 } else { -1 };
            assert_eq!((sign(p.a()), sign(p.b())), (sa, sb), "m = {m}");
        }
    }

    #[test]
    fn root_signs_and_discriminant() {
        for m in [3.0, 3.5, 5.0, 8.0, 100.0] {
            let p = OdeParams::from_dimension(m).unwrap();
            let expected = (m / (m - 2.0)).powi(2);
            assert!((p.disc() - expected).abs() <= 4.0 * f64::EPSILON * expected);
            assert!(p.disc() > 0.0);
            let (km, kp) = p.roots().unwrap();
            assert!(km < 0.0);
            assert_eq!(kp.signum(), (m - 4.0).signum());
            assert!(p.root_residual(km) <= 1e-12 && p.root_residual(kp) <= 1e-12);
            assert!(close(kp, (m - 4.0) / (2.0 * (m - 2.0)), 1e-12));
            assert!(close(km, -2.0 / (m - 2.0), 1e-12));
        }
        assert_eq!(OdeParams::from_dimension(4.0).unwrap().k_plus(), Some(0.0));
    }

    #[test]
    fn generic_roots_satisfy_quadratic() {
        for &(a, b) in &[(1.0, 3.0), (-4.0, 0.5), (0.0, 2.0), (7.0, -6.0), (1e-9, 1e3)] {
            let p = OdeParams::from_coeffs(a, b);
            let (km, kp) = p.roots().unwrap();
            assert!(km <= kp);
            let scale = 1.0 + a.abs() * kp.abs().max(km.abs()) + b.abs();
            assert!(p.root_residual(km) <= 1e-14 * scale);
            assert!(p.root_residual(kp) <= 1e-14 * scale);
        }
    }
}
