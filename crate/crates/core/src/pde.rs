//! Solutions of the one-dimensional problem
//! `D g = c ∂²g/∂x²`, `g(x, 0) = δ(x)`, where `D` is the regularized
//! Prabhakar derivative with symbol `s^{γ+ν}(1 + λ s^{-ν})^δ`.
//!
//! Three routes are available: the Fourier series in β, the Wright closed
//! form at δ = 0, and numerical inversion of the x-space Laplace transform.

use std::cell::RefCell;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::laplace::outer_prabhakar_series;
use crate::laplace::{invert_laplace, CatalogTransform, Inversion, InversionConfig, InversionMethod, TransformId};
use crate::params::TimeChangeParams;
use crate::quad::exp_sinh;
use crate::specfun::gamma::gamma;
use crate::specfun::{caputo_monomial, generalized_wright, m_wright, ml2, sum_series, GenWrightSpec};

/// Order of `γ+ν` above which the x = 0 density is inverted with Talbot
/// only, since Gaver–Stehfest loses accuracy near the wave limit.
const WAVE_LIMIT_ORDER: f64 = 1.5;

/// Fourier transform in x of the solution,
/// `Σ_r (-cβ² t^{γ+ν})^r E^{rδ}_{ν, r(γ+ν)+1}(-λ t^ν)`.
pub fn g_hat_series(tc: &TimeChangeParams, beta: f64, t: f64) -> Result<f64> {
    tc.check_analytic()?;
    if !beta.is_finite() {
        return invalid("beta must be finite");
    }
    if beta == 0.0 {
        return Ok(1.0);
    }
    outer_prabhakar_series(tc, -tc.c * beta * beta, t, "Fourier series of g")
}

/// The Fourier series regrouped by powers of `Y = λt^ν`:
/// `E_{γ+ν,1}(-X) + Σ_{m≥1} (-Y)^m/m! · ₂ψ₂[(m,δ),(1,1); (0,δ),(1+νm,γ+ν)](-X)`
/// with `X = cβ²t^{γ+ν}`. The m = 0 term is written out because its
/// `Γ(δr)/Γ(δr)` ratio is 1 even at r = 0.
pub fn g_hat_double_series(tc: &TimeChangeParams, beta: f64, t: f64) -> Result<f64> {
    tc.check_analytic()?;
    if !(t > 0.0) {
        return invalid(format!("t must be positive, got {t}"));
    }
    let mu = tc.mu();
    let x = tc.c * beta * beta * t.powf(mu);
    let y = tc.lambda * t.powf(tc.nu);
    let head = ml2(mu, 1.0, -x)?;
    if tc.delta == 0.0 {
        return Ok(head);
    }
    let mut coef = 1.0;
    let tail = sum_series(
        |k| {
            let m = k + 1;
            coef *= -y / m as f64;
            let g = GenWrightSpec {
                upper: vec![(m as f64, tc.delta), (1.0, 1.0)],
                lower: vec![(0.0, tc.delta), (1.0 + tc.nu * m as f64, mu)],
            };
            Ok(coef * generalized_wright(&g, -x)?)
        },
        None,
        "double Fourier series",
    )?;
    Ok(head + tail.value)
}

/// The same quantity by inverting its Laplace transform in t,
/// `s^{γ+ν-1}(1+λs^{-ν})^δ / (s^{γ+ν}(1+λs^{-ν})^δ + cβ²)`.
pub fn g_hat_by_inversion(tc: &TimeChangeParams, beta: f64, t: f64, cfg: &InversionConfig) -> Result<Inversion> {
    let f = CatalogTransform::new(TransformId::GFourierLaplace, *tc, Complex64::new(tc.c * beta * beta, 0.0))?;
    invert_laplace(&f, t, cfg)
}

/// Fundamental solution of the time-fractional diffusion-wave equation of
/// order α, `(1/(2λt^{α/2})) W_{-α/2, 1-α/2}(-|x|/(λt^{α/2}))`.
///
/// At α = 2 the solution is a pair of travelling point masses and has no
/// pointwise value, so that order is rejected.
pub fn diffusion_wright(alpha: f64, lambda_scale: f64, x: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return invalid(format!("alpha must lie in (0, 2], got {alpha}"));
    }
    if alpha == 2.0 {
        return invalid("alpha = 2 is the wave equation, whose solution is not a function");
    }
    if !(lambda_scale > 0.0 && t > 0.0 && x.is_finite()) {
        return invalid("need lambda_scale > 0, t > 0 and finite x");
    }
    let scale = lambda_scale * t.powf(alpha / 2.0);
    Ok(m_wright(alpha / 2.0, x.abs() / scale)? / (2.0 * scale))
}

/// A density value from numerical inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityValue {
    /// Clamped at 0.
    pub value: f64,
    /// As returned by the inversion; use this for error metrics.
    pub raw: f64,
    pub method: InversionMethod,
    pub order: usize,
    pub disagreement: Option<f64>,
}

/// `g(x, t)` by inverting
/// `(1/(2s√c)) φ(s)^{1/2} exp(-|x| φ(s)^{1/2}/√c)` with
/// `φ(s) = s^{γ+ν}(1+λs^{-ν})^δ`.
///
/// At x = 0 with `γ+ν > 1.5` the configured method is replaced by an
/// unchecked Talbot inversion; `method` in the result reports what ran.
pub fn density_g(tc: &TimeChangeParams, x: f64, t: f64, cfg: &InversionConfig) -> Result<DensityValue> {
    if !x.is_finite() {
        return invalid("x must be finite");
    }
    let f = CatalogTransform::new(TransformId::GXLaplace, *tc, Complex64::new(x.abs(), 0.0))?;
    let cfg = if x == 0.0 && tc.mu() > WAVE_LIMIT_ORDER {
        InversionConfig { method: InversionMethod::FixedTalbot, ..*cfg }.unchecked()
    } else {
        *cfg
    };
    let inv = invert_laplace(&f, t, &cfg)?;
    Ok(DensityValue {
        value: inv.value.max(0.0),
        raw: inv.value,
        method: inv.method,
        order: inv.order,
        disagreement: inv.disagreement,
    })
}

/// `∫ cos(βx) g(x, t) dx` by exp-sinh quadrature of the raw inverted
/// density; at β = 0 this is the total mass.
pub fn fourier_of_density(tc: &TimeChangeParams, beta: f64, t: f64, cfg: &InversionConfig) -> Result<f64> {
    let failure = RefCell::new(None);
    let q = exp_sinh(
        |x| match density_g(tc, x, t, cfg) {
            Ok(d) => (beta * x).cos() * d.raw,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        1e-8,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(2.0 * q.value)
}

/// How a [`SolutionQuery`] is answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionMode {
    /// `ĝ(β, t)` from the series; the point is `(β, t)`.
    FourierSeries,
    /// `g(x, t)` from the Wright function, δ = 0 only.
    WrightClosedForm,
    /// `g(x, t)` by Laplace inversion.
    DensityByInversion,
}

impl SolutionMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fourier-series" => Some(SolutionMode::FourierSeries),
            "wright-closed-form" => Some(SolutionMode::WrightClosedForm),
            "density-by-inversion" => Some(SolutionMode::DensityByInversion),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionQuery {
    pub mode: SolutionMode,
    pub tc: TimeChangeParams,
    /// `(x, t)`, or `(β, t)` for the Fourier series.
    pub point: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionValue {
    pub value: f64,
    pub raw: f64,
    pub method: String,
    pub tolerance: f64,
}

impl SolutionQuery {
    pub fn evaluate(&self, cfg: &InversionConfig) -> Result<SolutionValue> {
        let (p, t) = self.point;
        match self.mode {
            SolutionMode::FourierSeries => {
                let v = g_hat_series(&self.tc, p, t)?;
                Ok(SolutionValue { value: v, raw: v, method: "series".into(), tolerance: 1e-15 })
            }
            SolutionMode::WrightClosedForm => {
                self.tc.check_analytic()?;
                if self.tc.delta != 0.0 {
                    return invalid("the Wright closed form needs delta = 0");
                }
                let v = diffusion_wright(self.tc.mu(), self.tc.c.sqrt(), p, t)?;
                Ok(SolutionValue { value: v, raw: v, method: "wright".into(), tolerance: 1e-12 })
            }
            SolutionMode::DensityByInversion => {
                let d = density_g(&self.tc, p, t, cfg)?;
                Ok(SolutionValue {
                    value: d.value,
                    raw: d.raw,
                    method: format!("{}-{}", d.method.name(), d.order),
                    tolerance: cfg.tolerance,
                })
            }
        }
    }
}

/// One term `coefficient · 𝔡^order` of a multi-term Caputo operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    pub coefficient: f64,
    pub order: f64,
}

/// For integer δ = n the operator expands as
/// `Σ_{r=0}^{n} C(n,r) λ^r 𝔡^{γ - ν(r-1)}`.
pub fn multiterm_expand(n: usize, lambda: f64, gamma_: f64, nu: f64) -> Result<Vec<Term>> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return invalid(format!("lambda must be positive, got {lambda}"));
    }
    if !(gamma_ > 0.0 && nu > 0.0 && gamma_ + nu <= 2.0) {
        return invalid(format!("need gamma, nu > 0 and gamma + nu <= 2 (gamma = {gamma_}, nu = {nu})"));
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut binom = 1.0;
    for r in 0..=n {
        let order = gamma_ - nu * (r as f64 - 1.0);
        if order <= 0.0 {
            return invalid(format!("term {r} has non-positive order {order}"));
        }
        out.push(Term { coefficient: binom * lambda.powi(r as i32), order });
        binom = binom * (n - r) as f64 / (r + 1) as f64;
    }
    Ok(out)
}

/// Applies a multi-term operator to `t^k` at `t`.
pub fn apply_terms_to_monomial(terms: &[Term], k: f64, t: f64) -> f64 {
    terms.iter().map(|m| m.coefficient * caputo_monomial(k, m.order, t)).sum()
}

/// `E X_t²` for the δ = 0 solution, `2c t^{γ+ν} / Γ(1+γ+ν)`.
pub fn second_moment_delta0(tc: &TimeChangeParams, t: f64) -> Result<f64> {
    tc.check_analytic()?;
    if tc.delta != 0.0 {
        return invalid("closed-form second moment needs delta = 0");
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParams(format!("t must be positive, got {t}")));
    }
    Ok(2.0 * tc.c * t.powf(tc.mu()) / gamma(1.0 + tc.mu()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use crate::specfun::ml2;

    #[test]
    fn series_at_zero_and_delta_zero() {
        let tc = TimeChangeParams::new(0.4, 0.3, 1.0);
        assert_eq!(g_hat_series(&tc, 0.0, 2.0).unwrap(), 1.0);
        let tc0 = TimeChangeParams::new(0.4, 0.3, 0.0).with_c(1.5);
        let v = g_hat_series(&tc0, 0.8, 1.3).unwrap();
        let e = ml2(0.7, 1.0, -1.5 * 0.64 * 1.3f64.powf(0.7)).unwrap();
        assert!((v - e).abs() < 1e-14);
    }

    #[test]
    fn double_series_matches() {
        // X = cβ²t^{γ+ν} = 0.2 and Y = λt^ν = 0.3 at t = 1
        let tc = TimeChangeParams::new(0.4, 0.4, 1.0).with_lambda(0.3).with_c(0.2);
        let a = g_hat_series(&tc, 1.0, 1.0).unwrap();
        let b = g_hat_double_series(&tc, 1.0, 1.0).unwrap();
        assert!((a - b).abs() < 1e-13, "{a} {b}");
    }

    #[test]
    fn wright_reduces_to_gaussian() {
        assert!((diffusion_wright(1.0, 1.0, 0.0, 1.0).unwrap() - 0.5 / PI.sqrt()).abs() < 1e-15);
        let g = (-0.25f64).exp() / (2.0 * PI.sqrt());
        assert!((diffusion_wright(1.0, 1.0, 1.0, 1.0).unwrap() - g).abs() < 1e-15);
        assert!(diffusion_wright(2.0, 1.0, 0.3, 1.0).is_err());
    }

    #[test]
    fn multiterm_displays() {
        let t = multiterm_expand(2, 1.0, 0.5, 0.2).unwrap();
        let got: Vec<(f64, f64)> = t.iter().map(|m| (m.coefficient, m.order)).collect();
        assert_eq!(got.len(), 3);
        for ((c, o), (ec, eo)) in got.iter().zip([(1.0, 0.7), (2.0, 0.5), (1.0, 0.3)]) {
            assert_eq!(*c, ec);
            assert!((o - eo).abs() < 1e-15);
        }
        assert!(multiterm_expand(3, 1.0, 0.3, 0.2).is_err());
    }

    #[test]
    fn heat_kernel_by_inversion() {
        let tc = TimeChangeParams::new(0.6, 0.4, 0.0).with_c(0.7);
        for x in [0.0f64, 0.5, 1.7] {
            let t = 0.9f64;
            let exact = (-x * x / (4.0 * 0.7 * t)).exp() / (4.0 * PI * 0.7 * t).sqrt();
            let d = density_g(&tc, x, t, &InversionConfig::default()).unwrap();
            assert!((d.raw - exact).abs() < 1e-9, "{x} {} {exact}", d.raw);
        }
    }
}
