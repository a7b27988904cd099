use std::cell::RefCell;

use num_complex::Complex64;

use super::gamma::{gamma, rgamma};
use super::mittag::{ml_prabhakar, PrabhakarParams};
use super::series::sum_series;
use crate::dd::Dd;
use crate::error::{invalid, Error, Result};
use crate::laplace::{invert_laplace, Field, Inversion, InversionConfig, Transform};
use crate::quad::tanh_sinh;

const CONVOLVE_TOL: f64 = 1e-10;

/// `∫_0^t (t-y)^(θ-1) E^{-ξ}_{α,θ}[ζ(t-y)^α] y^(β-1) dy` by tanh-sinh
/// quadrature. Uses `alpha`, `xi` and `zeta` from `p`; the kernel offset is
/// `theta` and `p.eta` is ignored.
pub fn prabhakar_convolve(beta: f64, p: &PrabhakarParams, theta: f64, t: f64) -> Result<f64> {
    check_convolve(beta, p, theta, t)?;
    let kernel = PrabhakarParams::new(p.alpha, theta, -p.xi, p.zeta);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    // u = t - y is the distance to the left endpoint, y the distance to
    // the right one
    let integrand = |_u: f64, u: f64, y: f64| -> f64 {
        match ml_prabhakar(&kernel, p.zeta * u.powf(p.alpha)) {
            Ok(e) => u.powf(theta - 1.0) * e * y.powf(beta - 1.0),
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                0.0
            }
        }
    };
    let r = tanh_sinh(integrand, 0.0, t, CONVOLVE_TOL);
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    Ok(r?.value)
}

/// Closed form `Γ(β) t^(θ+β-1) E^{-ξ}_{α,θ+β}(ζ t^α)` of the convolution.
pub fn prabhakar_convolve_closed(beta: f64, p: &PrabhakarParams, theta: f64, t: f64) -> Result<f64> {
    check_convolve(beta, p, theta, t)?;
    let q = PrabhakarParams::new(p.alpha, theta + beta, -p.xi, p.zeta);
    Ok(gamma(beta) * t.powf(theta + beta - 1.0) * ml_prabhakar(&q, p.zeta * t.powf(p.alpha))?)
}

fn check_convolve(beta: f64, p: &PrabhakarParams, theta: f64, t: f64) -> Result<()> {
    p.validate()?;
    if !(beta > 0.0) {
        return invalid(format!("power beta must be positive, got {beta}"));
    }
    if !(theta > 0.0) {
        return invalid(format!("theta must be positive, got {theta}"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return invalid(format!("t must be positive, got {t}"));
    }
    Ok(())
}

/// `s^η (1 - ζ s^(-α))^ξ`
fn symbol<T: Field>(p: &PrabhakarParams, s: T) -> T {
    s.powf(p.eta) * (T::from_f64(1.0) - T::from_f64(p.zeta) * s.powf(-p.alpha)).powf(p.xi)
}

struct Regularized<'a, F: ?Sized> {
    f: &'a F,
    f0: f64,
    p: PrabhakarParams,
}

impl<F: Transform + ?Sized> Transform for Regularized<'_, F> {
    fn eval(&self, s: Complex64) -> Complex64 {
        symbol(&self.p, s) * (self.f.eval(s) - self.f0 / s)
    }

    fn eval_dd(&self, s: Dd) -> Option<Dd> {
        let fs = self.f.eval_dd(s)?;
        Some(symbol(&self.p, s) * (fs - Dd::from(self.f0) / s))
    }
}

/// Regularized Prabhakar derivative of `f` at `t`, given the Laplace
/// transform of `f` and `f(0+)`, by inverting
/// `s^η (1-ζs^{-α})^ξ F(s) - f(0+) s^(η-1) (1-ζs^{-α})^ξ`.
pub fn apply_regularized_d<F: Transform + ?Sized>(
    f_transform: &F,
    f_at_zero: f64,
    p: &PrabhakarParams,
    t: f64,
    cfg: &InversionConfig,
) -> Result<Inversion> {
    p.validate()?;
    if !(p.eta > 0.0) {
        return invalid(format!("operator order eta must be positive, got {}", p.eta));
    }
    let g = Regularized { f: f_transform, f0: f_at_zero, p: *p };
    invert_laplace(&g, t, cfg)
}

/// Caputo derivative of order `q` of `t^k` (k ≥ 0) at `t`; for `q ≤ 0` this
/// is the Riemann–Liouville integral of order `-q`.
pub fn caputo_monomial(k: f64, q: f64, t: f64) -> f64 {
    if k == 0.0 && q > 0.0 {
        return 0.0;
    }
    gamma(k + 1.0) * rgamma(k + 1.0 - q) * t.powf(k - q)
}

/// Truncated Wright-operator representation of the (unregularized) Prabhakar
/// derivative applied to `t^(β-1)`:
/// `Γ(ξ+1) d^η/dt^η Σ_r (-ζ J^α)^r / (r! Γ(ξ-r+1)) t^(β-1)`.
///
/// Only meaningful where the series converges (small |ζ| t^α).
pub fn wright_operator_series(p: &PrabhakarParams, beta: f64, t: f64) -> Result<f64> {
    p.validate()?;
    if !(beta > 0.0 && t > 0.0) {
        return invalid("need beta > 0 and t > 0");
    }
    let x = -p.zeta * t.powf(p.alpha);
    // c_r = x^r Γ(ξ+1) / (r! Γ(ξ-r+1))
    let mut c = 1.0f64;
    let term = |r: usize| -> Result<f64> {
        if r > 0 {
            c *= x * (p.xi - (r - 1) as f64) / r as f64;
        }
        Ok(c * rgamma(beta + p.alpha * r as f64 - p.eta))
    };
    let finite = if p.xi >= 0.0 && p.xi == p.xi.floor() { Some(p.xi as usize) } else { None };
    let s = sum_series(term, finite, "Wright operator series")?;
    Ok(gamma(beta) * t.powf(beta - p.eta - 1.0) * s.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolution_matches_closed_form() {
        let p = PrabhakarParams::new(0.7, 0.0, 2.0, -1.0);
        let q = prabhakar_convolve(1.5, &p, 0.9, 1.0).unwrap();
        let c = prabhakar_convolve_closed(1.5, &p, 0.9, 1.0).unwrap();
        assert!(((q - c) / c).abs() < 1e-9, "{q} {c}");
    }

    #[test]
    fn xi_zero_is_riemann_liouville() {
        let p = PrabhakarParams::new(0.5, 0.0, 0.0, 3.0);
        let v = prabhakar_convolve(0.6, &p, 1.3, 2.0).unwrap();
        let expect = gamma(0.6) / gamma(1.9) * 2f64.powf(0.9);
        assert!(((v - expect) / expect).abs() < 1e-9);
    }

    #[test]
    fn caputo_of_monomials() {
        assert!((caputo_monomial(1.0, 0.5, 1.0) - 1.0 / gamma(1.5)).abs() < 1e-15);
        assert_eq!(caputo_monomial(0.0, 0.3, 2.0), 0.0);
    }
}
