use std::f64::consts::PI;

use super::gamma::{is_pole, ln_gamma_sign, rgamma};
use super::series::{sum_series, SeriesSum};
use crate::error::{invalid, Error, Result};
use crate::quad::tanh_sinh;

/// Indices of the Wright function `W_{a,b}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrightParams {
    pub a: f64,
    pub b: f64,
}

/// `pψq` parameters: numerator pairs `(a_m, α_m)` and denominator pairs
/// `(b_j, β_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenWrightSpec {
    pub upper: Vec<(f64, f64)>,
    pub lower: Vec<(f64, f64)>,
}

const WRIGHT_CANCELLATION_LIMIT: f64 = 1e14;

/// Below this argument the M-Wright power series is summed directly.
const M_WRIGHT_SERIES_RADIUS: f64 = 0.5;

/// Wright function `W_{a,b}(x) = Σ x^r / (r! Γ(ar + b))`.
pub fn wright(w: WrightParams, x: f64) -> Result<f64> {
    let s = wright_series(w, x)?;
    if s.cancellation() > WRIGHT_CANCELLATION_LIMIT {
        return Err(Error::NonConvergent {
            terms: s.terms,
            context: format!("Wright series at x = {x} lost all digits to cancellation"),
        });
    }
    Ok(s.value)
}

/// The Wright series with its cancellation diagnostics.
pub fn wright_series(w: WrightParams, x: f64) -> Result<SeriesSum> {
    let WrightParams { a, b } = w;
    if !(a.is_finite() && b.is_finite() && x.is_finite()) {
        return invalid("non-finite Wright parameter");
    }
    if a == -1.0 {
        if !(b > 0.0 && x.abs() < 1.0) {
            return invalid(format!("W_{{-1,b}} needs b > 0 and |x| < 1 (b = {b}, x = {x})"));
        }
    } else if a < -1.0 {
        return invalid(format!("Wright index a = {a} must be >= -1"));
    }
    if x == 0.0 {
        let v = rgamma(b);
        return Ok(SeriesSum { value: v, max_term: v.abs(), terms: 1 });
    }
    let mut c = 1.0f64;
    let term = |r: usize| -> Result<f64> {
        if r > 0 {
            c *= x / r as f64;
        }
        if c == 0.0 {
            return Ok(0.0);
        }
        let arg = a * r as f64 + b;
        if arg.abs() < 170.0 {
            Ok(c * rgamma(arg))
        } else {
            let (lg, s) = ln_gamma_sign(arg);
            if s.is_nan() {
                return Ok(0.0);
            }
            Ok(c.signum() * s * (c.abs().ln() - lg).exp())
        }
    };
    sum_series(term, None, "Wright series")
}

/// The M-Wright (Mainardi) function `M_ν(z) = W_{-ν,1-ν}(-z)`, for
/// `0 < ν < 1` and `z ≥ 0`.
///
/// Evaluated through the Zolotarev integral of the ν-stable law,
/// `M_ν(z) = z^{ν/(1-ν)}/(π(1-ν)) ∫_0^π A(φ) exp(-z^{1/(1-ν)} A(φ)) dφ`
/// with `A(φ) = (sin νφ / sin φ)^{1/(1-ν)} sin((1-ν)φ) / sin νφ`. The power
/// series is used only near the origin.
pub fn m_wright(nu: f64, z: f64) -> Result<f64> {
    if !(nu > 0.0 && nu < 1.0) {
        return invalid(format!("M-Wright index must lie in (0, 1), got {nu}"));
    }
    if !(z >= 0.0 && z.is_finite()) {
        return invalid(format!("M-Wright argument must be non-negative, got {z}"));
    }
    if z < M_WRIGHT_SERIES_RADIUS {
        let s = wright_series(WrightParams { a: -nu, b: 1.0 - nu }, -z)?;
        return Ok(s.value);
    }
    let q = 1.0 / (1.0 - nu);
    let zq = z.powf(q);
    // A is smallest at φ = 0. Writing A = A(0) e^D with D computed from
    // ln(sin x / x) keeps A - A(0) accurate near φ = 0, where the tail mass
    // concentrates, and factoring out exp(-z^q A(0)) keeps the integrand
    // O(1) far out.
    let a0 = (1.0 - nu) * nu.powf(nu * q);
    // the integrand is bounded by about A(0) + 1/z^q, so the value
    // underflows once the Gaussian factor does
    if nu * q * z.ln() - zq * a0 + 5.0 < -745.0 {
        return Ok(0.0);
    }
    let failure = std::cell::Cell::new(false);
    let r = tanh_sinh(
        |phi, _, pi_minus| {
            let h_nu = ln_sinc(nu * phi, (nu * phi).sin());
            let d = q * (h_nu - ln_sinc(phi, pi_minus.sin())) + ln_sinc((1.0 - nu) * phi, ((1.0 - nu) * phi).sin()) - h_nu;
            let v = a0 * d.exp();
            let e = zq * a0 * d.exp_m1();
            if !v.is_finite() || e > 745.0 {
                if v.is_nan() {
                    failure.set(true);
                }
                return 0.0;
            }
            v * (-e).exp()
        },
        0.0,
        PI,
        1e-13,
    )?;
    if failure.get() {
        return Err(Error::QuadratureFailure(format!("M-Wright integrand undefined at z = {z}")));
    }
    Ok(z.powf(nu * q) / (PI * (1.0 - nu)) * r.value * (-zq * a0).exp())
}

/// `ln(sin x / x)` for `0 ≤ x ≤ π`, given `sin x`.
fn ln_sinc(x: f64, sin_x: f64) -> f64 {
    if x < 0.25 {
        // sin x / x - 1 = -x²/6 + x⁴/120 - x⁶/5040 + x⁸/362880
        let x2 = x * x;
        let d = -x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
        d.ln_1p()
    } else {
        (sin_x / x).ln()
    }
}

/// Generalized Wright function
/// `pψq(x) = Σ x^k/k! Π Γ(a_m + α_m k) / Π Γ(b_j + β_j k)`.
pub fn generalized_wright(g: &GenWrightSpec, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return invalid("non-finite argument");
    }
    let (lx, sx) = (x.abs().ln(), x.signum());
    let term = |k: usize| -> Result<f64> {
        let kf = k as f64;
        let mut sign = 1.0;
        let mut lg = 0.0;
        for &(a, al) in &g.upper {
            let arg = a + al * kf;
            if is_pole(arg) {
                return Err(Error::GammaPole(arg));
            }
            let (l, s) = ln_gamma_sign(arg);
            lg += l;
            sign *= s;
        }
        for &(b, be) in &g.lower {
            let arg = b + be * kf;
            if is_pole(arg) {
                return Ok(0.0);
            }
            let (l, s) = ln_gamma_sign(arg);
            lg -= l;
            sign *= s;
        }
        if k == 0 {
            return Ok(sign * lg.exp());
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let (lk, _) = ln_gamma_sign(kf + 1.0);
        let xs = if k % 2 == 1 { sx } else { 1.0 };
        Ok(xs * sign * (kf * lx - lk + lg).exp())
    };
    let last = if x == 0.0 { Some(0) } else { None };
    Ok(sum_series(term, last, "generalized Wright series")?.value)
}
