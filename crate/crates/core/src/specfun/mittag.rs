use num_complex::Complex64;

use super::gamma::{ln_gamma_sign, rgamma};
use super::series::{neg_integer, sum_series, SeriesSum};
use crate::error::{invalid, Error, Result};
use crate::laplace::{talbot, FnTransform, TALBOT_F64_BEST_NODES};

/// Parameters (α, η, ξ, ζ) of the generalized Mittag-Leffler kernel
/// `t^(η-1) E^ξ_{α,η}(ζ t^α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrabhakarParams {
    pub alpha: f64,
    pub eta: f64,
    pub xi: f64,
    pub zeta: f64,
}

impl PrabhakarParams {
    pub fn new(alpha: f64, eta: f64, xi: f64, zeta: f64) -> Self {
        PrabhakarParams { alpha, eta, xi, zeta }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return invalid(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.eta.is_finite() && self.xi.is_finite() && self.zeta.is_finite()) {
            return invalid("non-finite Prabhakar parameter");
        }
        Ok(())
    }
}

/// Rising factorial (ξ)_r.
pub fn pochhammer(xi: f64, r: u32) -> f64 {
    (0..r).fold(1.0, |acc, k| acc * (xi + k as f64))
}

/// Above this `max|term| / |sum|` the alternating series is replaced by
/// inversion (α ≤ 1). Fixed Talbot delivers about 1e-12, which the series
/// no longer matches past a cancellation of ~1e4.
const FALLBACK_CANCELLATION: f64 = 1e4;
/// Above this the series is rejected outright (α > 1).
const CANCELLATION_LIMIT: f64 = 1e12;

/// Raw series sum of E^ξ_{α,η}(x), with its cancellation diagnostics.
pub fn ml_series(alpha: f64, eta: f64, xi: f64, x: f64) -> Result<SeriesSum> {
    let finite = neg_integer(xi);
    // c_r = x^r (ξ)_r / r! = c · e^{scale}, rescaled before it overflows
    let mut c = 1.0f64;
    let mut scale = 0.0f64;
    let term = |r: usize| -> Result<f64> {
        if r > 0 {
            c *= x * (xi + (r - 1) as f64) / r as f64;
            if c.abs() > 1e200 {
                c *= 1e-200;
                scale += 200.0 * std::f64::consts::LN_10;
            }
        }
        if c == 0.0 {
            return Ok(0.0);
        }
        let arg = alpha * r as f64 + eta;
        if arg < 170.0 && scale == 0.0 {
            Ok(c * rgamma(arg))
        } else {
            let (lg, s) = ln_gamma_sign(arg);
            Ok(c.signum() * s * (c.abs().ln() + scale - lg).exp())
        }
    };
    sum_series(term, finite, "Prabhakar series")
}

/// Generalized (Prabhakar) Mittag-Leffler function
/// `E^ξ_{α,η}(x) = Σ x^r (ξ)_r / (r! Γ(αr + η))`. `p.zeta` is not used.
///
/// Negative arguments whose series cancels badly are evaluated by inverting
/// `p^(-η) (1 - x p^(-α))^(-ξ)` at unit time instead (only for α ≤ 1, where
/// the transform has no poles off the branch cut).
pub fn ml_prabhakar(p: &PrabhakarParams, x: f64) -> Result<f64> {
    ml_prabhakar_traced(p, x).map(|(v, _)| v)
}

/// How [`ml_prabhakar`] obtained its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlMethod {
    Series,
    Inversion,
}

impl MlMethod {
    pub fn name(self) -> &'static str {
        match self {
            MlMethod::Series => "series",
            MlMethod::Inversion => "fixed-talbot",
        }
    }

    /// Nominal accuracy of the path.
    pub fn tolerance(self) -> f64 {
        match self {
            MlMethod::Series => 1e-14,
            MlMethod::Inversion => 1e-11,
        }
    }
}

/// [`ml_prabhakar`] together with the evaluation path taken.
pub fn ml_prabhakar_traced(p: &PrabhakarParams, x: f64) -> Result<(f64, MlMethod)> {
    p.validate()?;
    if !x.is_finite() {
        return invalid("non-finite argument");
    }
    if x == 0.0 || p.xi == 0.0 {
        return Ok((rgamma(p.eta), MlMethod::Series));
    }
    let series = ml_series(p.alpha, p.eta, p.xi, x);
    let limit = if p.alpha <= 1.0 { FALLBACK_CANCELLATION } else { CANCELLATION_LIMIT };
    let cancels = match &series {
        Ok(s) => x < 0.0 && neg_integer(p.xi).is_none() && s.cancellation() > limit,
        Err(Error::NonConvergent { .. }) => x < 0.0,
        Err(_) => false,
    };
    if !cancels {
        return series.map(|s| (s.value, MlMethod::Series));
    }
    if p.alpha > 1.0 {
        return Err(Error::NonConvergent {
            terms: series.map(|s| s.terms).unwrap_or(0),
            context: format!(
                "Prabhakar series at x = {x} cancels catastrophically and alpha > 1 has no inversion fallback"
            ),
        });
    }
    ml_by_inversion(p.alpha, p.eta, p.xi, x).map(|v| (v, MlMethod::Inversion))
}

fn ml_by_inversion(alpha: f64, eta: f64, xi: f64, x: f64) -> Result<f64> {
    let f = FnTransform(move |s: Complex64| s.powf(-eta) * (1.0 - x * s.powf(-alpha)).powf(-xi));
    talbot(&f, 1.0, TALBOT_F64_BEST_NODES)
}

/// Two-parameter Mittag-Leffler function `E_{α,β}(x)`.
pub fn ml2(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    ml_prabhakar(&PrabhakarParams::new(alpha, beta, 1.0, 0.0), x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(0.7, 0), 1.0);
        assert_eq!(pochhammer(0.0, 3), 0.0);
        assert_eq!(pochhammer(3.0, 2), 12.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
    }

    #[test]
    fn exponential_and_constant_cases() {
        let e = ml_prabhakar(&PrabhakarParams::new(1.0, 1.0, 1.0, 0.0), 1.0).unwrap();
        assert!((e - std::f64::consts::E).abs() < 1e-15);
        let c = ml_prabhakar(&PrabhakarParams::new(0.3, 0.5, 0.0, 0.0), 7.0).unwrap();
        assert!((c - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn negative_integer_xi_is_a_polynomial() {
        // E^{-2}_{1,1}(x) = 1 - 2x + x^2/2
        let p = PrabhakarParams::new(1.0, 1.0, -2.0, 0.0);
        let v = ml_prabhakar(&p, 3.0).unwrap();
        assert!((v - (1.0 - 6.0 + 4.5)).abs() < 1e-14);
        assert_eq!(ml_series(1.0, 1.0, -2.0, 3.0).unwrap().terms, 3);
    }

    #[test]
    fn invalid_alpha() {
        let p = PrabhakarParams::new(0.0, 1.0, 1.0, 0.0);
        assert!(matches!(ml_prabhakar(&p, 1.0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn large_negative_argument_uses_inversion() {
        // E_{1,1}(-30) = e^{-30}; the direct series cancels completely and
        // the inversion is accurate in absolute terms
        let p = PrabhakarParams::new(1.0, 1.0, 1.0, 0.0);
        let v = ml_prabhakar(&p, -30.0).unwrap();
        assert!((v - (-30.0f64).exp()).abs() < 1e-11, "{v:e}");
        assert!(ml_series(1.0, 1.0, 1.0, -30.0).unwrap().cancellation() > 1e12);
    }
}
