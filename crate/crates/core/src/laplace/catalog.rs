use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Field, Transform};
use crate::dd::Dd;
use crate::error::{invalid, Error, Result};
use crate::params::TimeChangeParams;
use crate::specfun::{ml_prabhakar, PrabhakarParams, TERM_CAP};

/// Closed-form transforms of the time-changed processes and the PDE
/// solutions.
///
/// | id | first coordinate | variable |
/// |----|------------------|----------|
/// | `HXs` | z (Laplace in x) | s |
/// | `HTs`, `EDensTs`, `KTs`, `GXLaplace` | x | s |
/// | `HXSeries` | z | t (time domain) |
/// | `GFourierLaplace` | Ψ(ξ), or cβ² for the diffusion problem | s |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransformId {
    HXs,
    HTs,
    HXSeries,
    EDensTs,
    KTs,
    GFourierLaplace,
    GXLaplace,
}

impl TransformId {
    pub const ALL: [TransformId; 7] = [
        TransformId::HXs,
        TransformId::HTs,
        TransformId::HXSeries,
        TransformId::EDensTs,
        TransformId::KTs,
        TransformId::GFourierLaplace,
        TransformId::GXLaplace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformId::HXs => "H_XS",
            TransformId::HTs => "H_TS",
            TransformId::HXSeries => "H_X_SERIES",
            TransformId::EDensTs => "E_DENS_TS",
            TransformId::KTs => "K_TS",
            TransformId::GFourierLaplace => "G_FOURIER_LAPLACE",
            TransformId::GXLaplace => "G_X_LAPLACE",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|id| id.name().eq_ignore_ascii_case(s))
    }
}

/// `s^(γ+ν) (1 + λ s^(-ν))^δ`
fn phi<T: Field>(tc: &TimeChangeParams, s: T) -> T {
    let one = T::from_f64(1.0);
    s.powf(tc.mu()) * (one + T::from_f64(tc.lambda) * s.powf(-tc.nu)).powf(tc.delta)
}

/// `Σ_r C(n,r) s^(a_r)`, the Laplace exponent of the inner process.
fn inner_exponent<T: Field>(tc: &TimeChangeParams, s: T) -> T {
    let orders = tc.inner_orders();
    if orders.is_empty() {
        return s.powf(tc.mu());
    }
    let n = tc.n();
    let mut acc = T::from_f64(0.0);
    let mut binom = 1.0;
    for (r, a) in orders.iter().enumerate() {
        acc = acc + T::from_f64(binom) * s.powf(*a);
        binom = binom * (n - r) as f64 / (r + 1) as f64;
    }
    acc
}

fn eval_generic<T: Field>(id: TransformId, tc: &TimeChangeParams, first: T, s: T) -> T {
    match id {
        TransformId::HXs | TransformId::GFourierLaplace => {
            let p = phi(tc, s);
            p / s / (p + first)
        }
        TransformId::HTs | TransformId::EDensTs => {
            let p = phi(tc, s);
            p / s * (-(first * p)).exp()
        }
        TransformId::KTs => {
            let p = inner_exponent(tc, s);
            p / s * (-(first * p)).exp()
        }
        TransformId::GXLaplace => {
            let root = phi(tc, s).sqrt();
            let sc = T::from_f64(tc.c.sqrt());
            root / (T::from_f64(2.0) * s * sc) * (-(first * root / sc)).exp()
        }
        TransformId::HXSeries => unreachable!("H_X_SERIES is handled before dispatch"),
    }
}

fn check(id: TransformId, tc: &TimeChangeParams) -> Result<()> {
    tc.check_analytic()?;
    if id == TransformId::KTs && tc.delta < 0.0 {
        return invalid("K_TS needs delta >= 0");
    }
    Ok(())
}

/// A catalog transform with its first coordinate fixed, as a function of s.
#[derive(Debug, Clone, Copy)]
pub struct CatalogTransform {
    pub id: TransformId,
    pub tc: TimeChangeParams,
    pub first: Complex64,
}

impl CatalogTransform {
    pub fn new(id: TransformId, tc: TimeChangeParams, first: Complex64) -> Result<Self> {
        check(id, &tc)?;
        if id == TransformId::HXSeries {
            return invalid("H_X_SERIES is a time-domain series, not a transform in s");
        }
        Ok(CatalogTransform { id, tc, first })
    }
}

impl Transform for CatalogTransform {
    fn eval(&self, s: Complex64) -> Complex64 {
        eval_generic(self.id, &self.tc, self.first, s)
    }

    fn eval_dd(&self, s: Dd) -> Option<Dd> {
        if self.first.im != 0.0 {
            return None;
        }
        Some(eval_generic(self.id, &self.tc, Dd::from(self.first.re), s))
    }
}

/// Real or imaginary part of a time function whose transform has a complex
/// first coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// `Re f(t)` or `Im f(t)` for a catalog transform with complex `first`.
///
/// Each part is the transform of a real function, so both inversion
/// methods apply. The double-double path is available for the rational
/// entries (`H_XS`, `G_FOURIER_LAPLACE`).
#[derive(Debug, Clone, Copy)]
pub struct PartTransform {
    pub inner: CatalogTransform,
    pub part: Part,
}

impl PartTransform {
    pub fn new(inner: CatalogTransform, part: Part) -> Self {
        PartTransform { inner, part }
    }
}

impl Transform for PartTransform {
    fn eval(&self, s: Complex64) -> Complex64 {
        let a = self.inner.eval(s);
        let b = eval_generic(self.inner.id, &self.inner.tc, self.inner.first.conj(), s);
        match self.part {
            Part::Re => (a + b) * 0.5,
            Part::Im => (a - b) * Complex64::new(0.0, -0.5),
        }
    }

    fn eval_dd(&self, s: Dd) -> Option<Dd> {
        let first = self.inner.first;
        if first.im == 0.0 {
            return match self.part {
                Part::Re => self.inner.eval_dd(s),
                Part::Im => Some(Dd::ZERO),
            };
        }
        match self.inner.id {
            TransformId::HXs | TransformId::GFourierLaplace => {
                let p = phi(&self.inner.tc, s);
                let q = p + first.re;
                let den = q * q + first.im * first.im;
                Some(match self.part {
                    Part::Re => p * q / den / s,
                    Part::Im => -(p * first.im) / den / s,
                })
            }
            _ => None,
        }
    }
}

/// Evaluates a catalog entry at `(first, second)`: `second` is s for the
/// transforms and t for `HXSeries`.
pub fn analytic_transform(
    id: TransformId,
    tc: &TimeChangeParams,
    first: Complex64,
    second: Complex64,
) -> Result<Complex64> {
    check(id, tc)?;
    if id == TransformId::HXSeries {
        if first.im != 0.0 || second.im != 0.0 {
            return invalid("H_X_SERIES takes real (z, t)");
        }
        return h_x_series(tc, first.re, second.re).map(|v| Complex64::new(v, 0.0));
    }
    let v = eval_generic(id, tc, first, second);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::EvaluationError(format!("{second}")));
    }
    Ok(v)
}

/// Cancellation beyond which the outer series is declared divergent.
const OUTER_CANCELLATION_LIMIT: f64 = 1e12;

/// `Σ_r (-z)^r t^{r(γ+ν)} E^{rδ}_{ν, r(γ+ν)+1}(-λ t^ν)`, the x-Laplace
/// transform of the inverse-process density.
pub fn h_x_series(tc: &TimeChangeParams, z: f64, t: f64) -> Result<f64> {
    outer_prabhakar_series(tc, -z, t, "H_X_SERIES")
}

/// Shared by `H_X_SERIES` and the Fourier series of the PDE solution:
/// `Σ_r (w t^μ)^r E^{rδ}_{ν, rμ+1}(-λ t^ν)`.
pub(crate) fn outer_prabhakar_series(tc: &TimeChangeParams, w: f64, t: f64, what: &str) -> Result<f64> {
    if !(t > 0.0) {
        return invalid(format!("{what} needs t > 0, got {t}"));
    }
    let mu = tc.mu();
    let x = w * t.powf(mu);
    if x == 0.0 {
        return Ok(1.0);
    }
    let inner_arg = -tc.lambda * t.powf(tc.nu);
    let mut sum = 0.0f64;
    let mut max_term = 0.0f64;
    let mut small = 0;
    let mut prev_abs = f64::INFINITY;
    let mut growth = 0;
    let mut xr = 1.0f64;
    for r in 0..TERM_CAP {
        if r > 0 {
            xr *= x;
        }
        let kernel = PrabhakarParams::new(tc.nu, r as f64 * mu + 1.0, r as f64 * tc.delta, 0.0);
        let e = ml_prabhakar(&kernel, inner_arg)
            .map_err(|_| Error::SeriesDiverges {
                index: r,
                context: format!("{what}: inner Prabhakar function did not converge"),
            })?;
        let term = xr * e;
        if !term.is_finite() {
            return Err(Error::SeriesDiverges { index: r, context: format!("{what}: term overflow") });
        }
        sum += term;
        max_term = max_term.max(term.abs());
        let a = term.abs();
        // a run of growing terms past the first few means the outer
        // series is outside its region
        if r > 5 && a > prev_abs && a > 1e-300 {
            growth += 1;
            if growth > 50 {
                return Err(Error::SeriesDiverges { index: r, context: format!("{what}: terms keep growing") });
            }
        } else {
            growth = 0;
        }
        prev_abs = a;
        if a <= 1e-15 * sum.abs() {
            small += 1;
            if small >= 3 {
                if max_term > OUTER_CANCELLATION_LIMIT * sum.abs() {
                    return Err(Error::SeriesDiverges {
                        index: r,
                        context: format!("{what}: cancellation {:.1e} exceeds the working precision", max_term / sum.abs()),
                    });
                }
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SeriesDiverges { index: TERM_CAP, context: format!("{what}: term cap reached") })
}
