#![allow(dead_code)]

use std::path::Path;

/// Tanh-sinh quadrature of `f` over `[a, b]`.
///
/// `f` receives the abscissa together with its distances to `a` and to `b`,
/// computed without cancellation, so that endpoint singularities such as
/// `1/sqrt(1 - y^4)` can be evaluated accurately.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let pi2 = std::f64::consts::FRAC_PI_2;
    let node = |t: f64| -> Option<(f64, f64, f64, f64)> {
        let s = pi2 * t.sinh();
        let c = pi2 * t.cosh();
        // 1 - tanh(s) and 1 + tanh(s) without cancellation
        let e = (-2.0 * s.abs()).exp();
        let small = 2.0 * e / (1.0 + e);
        let (to_b, to_a) = if s >= 0.0 { (small, 2.0 - small) } else { (2.0 - small, small) };
        let w = c / (s.cosh() * s.cosh());
        if !(w.is_finite()) || w == 0.0 || to_a == 0.0 || to_b == 0.0 {
            return None;
        }
        let x = if s >= 0.0 { b - half * to_b } else { a + half * to_a };
        Some((x, half * to_a, half * to_b, w))
    };
    let sum_level = |h: f64, odd_only: bool| -> f64 {
        let mut total = 0.0;
        let mut k = if odd_only { 1 } else { 0 };
        loop {
            let t = k as f64 * h;
            let mut part = 0.0;
            let mut any = false;
            for tt in if k == 0 { vec![0.0] } else { vec![t, -t] } {
                if let Some((x, da, db, w)) = node(tt) {
                    part += w * f(x, da, db);
                    any = true;
                }
            }
            total += part;
            if !any || t > 6.5 {
                break;
            }
            k += if odd_only { 2 } else { 1 };
        }
        total
    };
    let mut h = 0.5;
    let mut sum = sum_level(h, false);
    let mut estimate = half * h * sum;
    for _ in 0..12 {
        h *= 0.5;
        sum += sum_level(h, true);
        let next = half * h * sum;
        if (next - estimate).abs() <= tol * next.abs() {
            return next;
        }
        estimate = next;
    }
    estimate
}

pub fn fixture(key: &str) -> f64 {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/oracles.json");
    let text = std::fs::read_to_string(path).expect("fixture file");
    let v: serde_json::Value = serde_json::from_str(&text).expect("fixture json");
    v[key].as_f64().unwrap_or_else(|| panic!("missing fixture {key}"))
}

/// `\int_0^1 dy / sqrt(1 - y^4)`.
pub fn lemniscate_quarter_period_oracle() -> f64 {
    tanh_sinh(|y, _, to_one| 1.0 / (to_one * (1.0 + y) * (1.0 + y * y)).sqrt(), 0.0, 1.0, 1e-15)
}

/// `\int_0^\infty dw / sqrt(1 + w^4)`, folded onto `[0, 1]` by `w -> 1/w`.
pub fn quartic_escape_oracle() -> f64 {
    2.0 * tanh_sinh(|y, _, _| 1.0 / (1.0 + y.powi(4)).sqrt(), 0.0, 1.0, 1e-15)
}

/// Least-squares slope of `log err` against `log h`.
pub fn fitted_order(hs: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
