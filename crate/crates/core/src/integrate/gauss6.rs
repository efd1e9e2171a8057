//! Three-stage Gauss–Legendre collocation (order 6).

use nalgebra::{SMatrix, SVector};

use crate::error::{Error, Result};
use crate::model::{OdeParams, State};

const SQRT15: f64 = 3.872_983_346_207_417;

/// Collocation nodes `c_i = 1/2 -+ sqrt(15)/10, 1/2`.
pub const NODES: [f64; 3] = [0.5 - SQRT15 / 10.0, 0.5, 0.5 + SQRT15 / 10.0];

/// Quadrature weights `5/18, 4/9, 5/18`.
pub const WEIGHTS: [f64; 3] = [5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0];

/// Runge–Kutta matrix of the method.
pub const MATRIX: [[f64; 3]; 3] = [
    [5.0 / 36.0, 2.0 / 9.0 - SQRT15 / 15.0, 5.0 / 36.0 - SQRT15 / 30.0],
    [5.0 / 36.0 + SQRT15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - SQRT15 / 24.0],
    [5.0 / 36.0 + SQRT15 / 30.0, 2.0 / 9.0 + SQRT15 / 15.0, 5.0 / 36.0],
];

/// Fixed-point sweeps attempted before falling back to Newton.
const FIXED_POINT_SWEEPS: usize = 10;

type Slopes = [[f64; 2]; 3];

/// Stage values `Y_i = y0 + h sum_j a_ij K_j`.
fn stage_points(s: &State, h: f64, k: &Slopes) -> [[f64; 2]; 3] {
    let mut y = [[s.u, s.v]; 3];
    for (i, yi) in y.iter_mut().enumerate() {
        for (j, kj) in k.iter().enumerate() {
            yi[0] += h * MATRIX[i][j] * kj[0];
            yi[1] += h * MATRIX[i][j] * kj[1];
        }
    }
    y
}

fn evaluate(p: &OdeParams, y: &[[f64; 2]; 3]) -> Slopes {
    let mut f = [[0.0; 2]; 3];
    for (fi, yi) in f.iter_mut().zip(y) {
        let (du, dv) = p.rhs_uv(yi[0], yi[1]);
        *fi = [du, dv];
    }
    f
}

/// Scaled max-norm of `K - f(y0 + h A K)`; also returns `f(...)`.
fn residual(p: &OdeParams, s: &State, h: f64, k: &Slopes) -> (f64, Slopes) {
    let f = evaluate(p, &stage_points(s, h, k));
    let mut r: f64 = 0.0;
    for (ki, fi) in k.iter().zip(&f) {
        for c in 0..2 {
            let d = (ki[c] - fi[c]).abs() / ki[c].abs().max(fi[c].abs()).max(1.0);
            r = r.max(if d.is_finite() { d } else { f64::INFINITY });
        }
    }
    (r, f)
}

fn newton_update(p: &OdeParams, s: &State, h: f64, k: &Slopes, f: &Slopes) -> Option<Slopes> {
    let y = stage_points(s, h, k);
    let mut jac = SMatrix::<f64, 6, 6>::identity();
    let mut rhs = SVector::<f64, 6>::zeros();
    for i in 0..3 {
        let (u, v) = (y[i][0], y[i][1]);
        // d(f_u, f_v)/d(u, v)
        let local = [[0.0, 1.0], [p.a() * v + 3.0 * p.b() * u * u, p.a() * u]];
        for j in 0..3 {
            let w = h * MATRIX[i][j];
            for r in 0..2 {
                for c in 0..2 {
                    jac[(2 * i + r, 2 * j + c)] -= w * local[r][c];
                }
            }
        }
        rhs[2 * i] = f[i][0] - k[i][0];
        rhs[2 * i + 1] = f[i][1] - k[i][1];
    }
    let delta = jac.lu().solve(&rhs)?;
    let mut out = *k;
    for i in 0..3 {
        out[i][0] += delta[2 * i];
        out[i][1] += delta[2 * i + 1];
    }
    Some(out)
}

/// One Gauss–Legendre step of size `h`.
///
/// The stage slopes are seeded from the explicit Euler prediction, refined by
/// fixed-point sweeps and, when those fail to contract, by damped Newton
/// iterations on the six-dimensional stage system. Convergence is declared when
/// the scaled max-norm residual drops to `stage_tol`.
pub fn step_gauss6(
    p: &OdeParams,
    s: &State,
    h: f64,
    stage_tol: f64,
    max_iter: usize,
) -> Result<State> {
    let (du, dv) = increment_gauss6(p, s, h, stage_tol, max_iter)?;
    let out = State::new(s.t + h, s.u + du, s.v + dv);
    if !out.is_finite() {
        return Err(Error::NonFinite { t: s.t });
    }
    Ok(out)
}

/// The update `(du, dv)` of one Gauss–Legendre step, before it is added to `s`.
pub(crate) fn increment_gauss6(
    p: &OdeParams,
    s: &State,
    h: f64,
    stage_tol: f64,
    max_iter: usize,
) -> Result<(f64, f64)> {
    if !s.is_finite() {
        return Err(Error::NonFinite { t: s.t });
    }
    let (du0, dv0) = p.rhs(s);
    let mut seed = [[0.0; 2]; 3];
    for (i, yi) in seed.iter_mut().enumerate() {
        let (du, dv) = p.rhs_uv(s.u + NODES[i] * h * du0, s.v + NODES[i] * h * dv0);
        *yi = [du, dv];
    }
    let mut k = seed;
    let (mut res, mut f) = residual(p, s, h, &k);
    let mut iterations = 0;
    let mut converged = res <= stage_tol;

    while !converged && iterations < FIXED_POINT_SWEEPS.min(max_iter) {
        let previous = res;
        k = f;
        (res, f) = residual(p, s, h, &k);
        iterations += 1;
        converged = res <= stage_tol;
        if !res.is_finite() || res > 0.9 * previous {
            break;
        }
    }

    if !converged && (!res.is_finite()) {
        // fixed point diverged; restart Newton from the seed
        k = seed;
        (res, f) = residual(p, s, h, &k);
    }

    while !converged && iterations < max_iter {
        iterations += 1;
        let Some(candidate) = newton_update(p, s, h, &k, &f) else {
            break;
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..8 {
            let mut trial = k;
            for i in 0..3 {
                for c in 0..2 {
                    trial[i][c] = k[i][c] + lambda * (candidate[i][c] - k[i][c]);
                }
            }
            let (r_trial, f_trial) = residual(p, s, h, &trial);
            if r_trial.is_finite() && r_trial < res {
                k = trial;
                res = r_trial;
                f = f_trial;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        converged = res <= stage_tol;
        if !accepted {
            break;
        }
    }

    if !converged {
        if !res.is_finite() {
            return Err(Error::NonFinite { t: s.t });
        }
        return Err(Error::StageSolveFailure {
            iterations,
            residual: res,
        });
    }

    let mut du = 0.0;
    let mut dv = 0.0;
    for i in 0..3 {
        du += WEIGHTS[i] * k[i][0];
        dv += WEIGHTS[i] * k[i][1];
    }
    let (du, dv) = (h * du, h * dv);
    if !(du.is_finite() && dv.is_finite()) {
        return Err(Error::NonFinite { t: s.t });
    }
    Ok((du, dv))
}
