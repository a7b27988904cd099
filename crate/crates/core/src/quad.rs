//! Double-exponential quadrature.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub error: f64,
    pub evals: usize,
}

const TS_TMAX: f64 = 6.0;
const MIN_LEVEL: usize = 3;
const MAX_LEVEL: usize = 11;

/// Tanh-sinh quadrature of `f` over `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)` with both distances computed
/// without cancellation, so endpoint singularities like `(b - x)^(-0.7)` can
/// be evaluated accurately.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadResult>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::QuadratureFailure(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, evals: 0 });
    }
    let len = b - a;
    let mut evals = 0usize;
    let node = |t: f64, evals: &mut usize| -> Result<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // distance from the nearer endpoint
        let near = len * e / (1.0 + e);
        if near == 0.0 {
            return Ok(0.0);
        }
        let far = len - near;
        let (x, da, db) = if t >= 0.0 {
            (b - near, far, near)
        } else {
            (a + near, near, far)
        };
        let cu = u.cosh();
        let w = 0.5 * len * FRAC_PI_2 * t.cosh() / (cu * cu);
        if w == 0.0 {
            return Ok(0.0);
        }
        *evals += 1;
        let y = f(x, da, db);
        if !y.is_finite() {
            return Err(Error::QuadratureFailure(format!("non-finite integrand at x = {x}")));
        }
        Ok(w * y)
    };

    let mut sum = node(0.0, &mut evals)?;
    let mut j = 1usize;
    loop {
        let t = j as f64;
        if t > TS_TMAX {
            break;
        }
        sum += node(t, &mut evals)? + node(-t, &mut evals)?;
        j += 1;
    }
    let mut h = 1.0;
    let mut prev = sum * h;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut k = 1usize;
        loop {
            let t = k as f64 * h;
            if t > TS_TMAX {
                break;
            }
            sum += node(t, &mut evals)? + node(-t, &mut evals)?;
            k += 2;
        }
        let cur = sum * h;
        let err = (cur - prev).abs();
        if level >= MIN_LEVEL && err <= rel_tol * cur.abs() {
            return Ok(QuadResult { value: cur, error: err, evals });
        }
        if level >= MIN_LEVEL && cur == 0.0 && prev == 0.0 {
            return Ok(QuadResult { value: 0.0, error: 0.0, evals });
        }
        prev = cur;
    }
    Err(Error::QuadratureFailure(format!(
        "tanh-sinh did not reach relative tolerance {rel_tol:e} (estimate {prev:e})"
    )))
}

const ES_TMIN: f64 = -6.5;
const ES_TMAX: f64 = 4.5;

/// Exp-sinh quadrature of `f` over `(0, ∞)`. The integrand should decay at
/// least exponentially; it may be integrably singular at zero.
pub fn exp_sinh<F>(f: F, rel_tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let mut evals = 0usize;
    let node = |t: f64, evals: &mut usize| -> Result<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let x = u.exp();
        if x == 0.0 || !x.is_finite() {
            return Ok(0.0);
        }
        *evals += 1;
        let y = f(x);
        if y == 0.0 {
            return Ok(0.0);
        }
        if !y.is_finite() {
            return Err(Error::QuadratureFailure(format!("non-finite integrand at x = {x}")));
        }
        Ok(FRAC_PI_2 * t.cosh() * x * y)
    };
    let sweep = |h: f64, step: usize, start: usize, evals: &mut usize| -> Result<f64> {
        let mut s = 0.0;
        let mut k = start;
        loop {
            let t = k as f64 * h;
            if t > ES_TMAX {
                break;
            }
            s += node(t, evals)?;
            k += step;
        }
        let mut k = start.max(1);
        loop {
            let t = -(k as f64) * h;
            if t < ES_TMIN {
                break;
            }
            s += node(t, evals)?;
            k += step;
        }
        Ok(s)
    };

    let mut sum = sweep(1.0, 1, 0, &mut evals)?;
    let mut h = 1.0;
    let mut prev = sum;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        sum += sweep(h, 2, 1, &mut evals)?;
        let cur = sum * h;
        let err = (cur - prev).abs();
        if level >= MIN_LEVEL && err <= rel_tol * cur.abs() {
            return Ok(QuadResult { value: cur, error: err, evals });
        }
        prev = cur;
    }
    Err(Error::QuadratureFailure(format!(
        "exp-sinh did not reach relative tolerance {rel_tol:e} (estimate {prev:e})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::gamma;

    #[test]
    fn beta_integral_with_endpoint_singularities() {
        // ∫_0^1 x^(-0.7) (1-x)^(-0.4) dx = B(0.3, 0.6)
        let r = tanh_sinh(|_, da, db| da.powf(-0.7) * db.powf(-0.4), 0.0, 1.0, 1e-12).unwrap();
        let exact = gamma(0.3) * gamma(0.6) / gamma(0.9);
        assert!(((r.value - exact) / exact).abs() < 1e-12, "{r:?} {exact}");
    }

    #[test]
    fn smooth_integral_on_shifted_interval() {
        let r = tanh_sinh(|x, _, _| x.cos(), 1.0, 3.0, 1e-13).unwrap();
        let exact = 3f64.sin() - 1f64.sin();
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn half_line_gamma_integral() {
        // ∫_0^∞ x^(-0.5) e^(-2x) dx = Γ(1/2)/√2
        let r = exp_sinh(|x| x.powf(-0.5) * (-2.0 * x).exp(), 1e-12).unwrap();
        let exact = gamma(0.5) / 2f64.sqrt();
        assert!(((r.value - exact) / exact).abs() < 1e-12, "{r:?}");
    }
}
