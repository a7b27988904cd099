use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Transform;
use crate::dd::Dd;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InversionMethod {
    GaverStehfest,
    FixedTalbot,
}

impl InversionMethod {
    pub fn name(self) -> &'static str {
        match self {
            InversionMethod::GaverStehfest => "gaver-stehfest",
            InversionMethod::FixedTalbot => "fixed-talbot",
        }
    }

    fn other(self) -> Self {
        match self {
            InversionMethod::GaverStehfest => InversionMethod::FixedTalbot,
            InversionMethod::FixedTalbot => InversionMethod::GaverStehfest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InversionConfig {
    pub method: InversionMethod,
    /// Gaver–Stehfest order or Talbot node count; `None` picks the default.
    pub order: Option<usize>,
    pub tolerance: f64,
    /// Also run the other method and fail on large disagreement.
    pub cross_check: bool,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            method: InversionMethod::FixedTalbot,
            order: None,
            tolerance: 1e-6,
            cross_check: true,
        }
    }
}

impl InversionConfig {
    pub fn with_method(method: InversionMethod) -> Self {
        InversionConfig { method, ..Default::default() }
    }

    pub fn unchecked(mut self) -> Self {
        self.cross_check = false;
        self
    }
}

pub const TALBOT_DEFAULT_NODES: usize = 32;
/// Node count with the smallest error in double precision: beyond it the
/// `e^{rt}` factor amplifies rounding faster than truncation error falls.
pub const TALBOT_F64_BEST_NODES: usize = 20;
/// Default order in double precision; higher orders lose every digit.
pub const GS_DEFAULT_ORDER_F64: usize = 14;
pub const GS_MAX_ORDER_F64: usize = 18;
/// Default order when the transform has a double-double path.
pub const GS_DEFAULT_ORDER_DD: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub value: f64,
    pub method: InversionMethod,
    pub order: usize,
    /// Value from the other method, when cross-checked.
    pub secondary: Option<f64>,
    pub disagreement: Option<f64>,
}

/// Numerically inverts `F` at time `t`, optionally cross-checking against
/// the other method. Disagreement above `100 * tolerance * max(1, |f|)` is
/// an [`Error::InversionFailure`].
pub fn invert_laplace<F: Transform + ?Sized>(f: &F, t: f64, cfg: &InversionConfig) -> Result<Inversion> {
    if !(t > 0.0 && t.is_finite()) {
        return invalid(format!("inversion time must be positive, got {t}"));
    }
    if !(cfg.tolerance > 0.0) {
        return invalid("inversion tolerance must be positive");
    }
    let (value, order) = run_method(f, t, cfg.method, cfg.order)?;
    if !cfg.cross_check {
        return Ok(Inversion { value, method: cfg.method, order, secondary: None, disagreement: None });
    }
    let (other, _) = run_method(f, t, cfg.method.other(), None)?;
    let gap = (value - other).abs();
    let allowed = 100.0 * cfg.tolerance * value.abs().max(1.0);
    if gap > allowed {
        return Err(Error::InversionFailure(format!(
            "{} gives {value:e} but {} gives {other:e} at t = {t} (gap {gap:e})",
            cfg.method.name(),
            cfg.method.other().name()
        )));
    }
    Ok(Inversion { value, method: cfg.method, order, secondary: Some(other), disagreement: Some(gap) })
}

fn run_method<F: Transform + ?Sized>(
    f: &F,
    t: f64,
    method: InversionMethod,
    order: Option<usize>,
) -> Result<(f64, usize)> {
    match method {
        InversionMethod::FixedTalbot => {
            let m = order.unwrap_or(TALBOT_DEFAULT_NODES);
            Ok((talbot(f, t, m)?, m))
        }
        InversionMethod::GaverStehfest => {
            let probe = f.eval_dd(Dd::ONE).is_some();
            let n = order.unwrap_or(if probe { GS_DEFAULT_ORDER_DD } else { GS_DEFAULT_ORDER_F64 });
            Ok((gaver_stehfest(f, t, n)?, n))
        }
    }
}

fn binom(n: u128, k: u128) -> u128 {
    let mut r = 1u128;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Gaver–Stehfest weights `V_k`, k = 1..=n, as exact integers over `h!`
/// with `h = n/2`. Returns `(numerators, h!)`.
fn stehfest_integers(n: usize) -> Result<(Vec<i128>, u128)> {
    if n == 0 || n % 2 == 1 {
        return invalid(format!("Gaver-Stehfest order must be even and positive, got {n}"));
    }
    let h = (n / 2) as u128;
    let overflow = || Error::InvalidParams(format!("Gaver-Stehfest order {n} is too large"));
    let mut out = Vec::with_capacity(n);
    for k in 1..=n as u128 {
        let mut acc: u128 = 0;
        for j in (k + 1) / 2..=k.min(h) {
            let term = j
                .checked_pow(h as u32 + 1)
                .and_then(|v| v.checked_mul(binom(h, j)))
                .and_then(|v| v.checked_mul(binom(2 * j, j)))
                .and_then(|v| v.checked_mul(binom(j, k - j)))
                .ok_or_else(overflow)?;
            acc = acc.checked_add(term).ok_or_else(overflow)?;
        }
        let signed = i128::try_from(acc).map_err(|_| overflow())?;
        let sign = if (k + h) % 2 == 0 { 1 } else { -1 };
        out.push(sign * signed);
    }
    let fact = (1..=h).try_fold(1u128, |a, v| a.checked_mul(v)).ok_or_else(overflow)?;
    Ok((out, fact))
}

/// Gaver–Stehfest weights in double-double.
pub fn gaver_stehfest_weights(n: usize) -> Result<Vec<Dd>> {
    let (num, fact) = stehfest_integers(n)?;
    let f = Dd::from_i128(fact as i128);
    Ok(num.into_iter().map(|v| Dd::from_i128(v) / f).collect())
}

/// Gaver–Stehfest inversion of order `n` (even). Runs in double-double when
/// the transform supports it, otherwise in `f64` up to order 18.
pub fn gaver_stehfest<F: Transform + ?Sized>(f: &F, t: f64, n: usize) -> Result<f64> {
    let w = gaver_stehfest_weights(n)?;
    let ln2 = Dd::new(6.931471805599452862e-01, 2.319046813846299558e-17);
    let a = ln2 / t;
    if f.eval_dd(a).is_some() {
        let mut acc = Dd::ZERO;
        for (k, wk) in w.iter().enumerate() {
            let s = a * (k + 1) as f64;
            let v = f.eval_dd(s).unwrap_or(Dd::new(f64::NAN, 0.0));
            if !v.is_finite() {
                return Err(Error::EvaluationError(format!("{:e}", s.to_f64())));
            }
            acc = acc + *wk * v;
        }
        return Ok((acc * a).to_f64());
    }
    if n > GS_MAX_ORDER_F64 {
        return invalid(format!(
            "Gaver-Stehfest order {n} needs a double-double transform (max {GS_MAX_ORDER_F64} in f64)"
        ));
    }
    let a = a.to_f64();
    let mut acc = 0.0;
    for (k, wk) in w.iter().enumerate() {
        let s = a * (k + 1) as f64;
        let v = f.eval(Complex64::new(s, 0.0)).re;
        if !v.is_finite() {
            return Err(Error::EvaluationError(format!("{s:e}")));
        }
        acc += wk.to_f64() * v;
    }
    Ok(acc * a)
}

/// Fixed Talbot inversion (Abate–Valkó) with `m` nodes.
pub fn talbot<F: Transform + ?Sized>(f: &F, t: f64, m: usize) -> Result<f64> {
    if m < 2 {
        return invalid(format!("Talbot needs at least 2 nodes, got {m}"));
    }
    if !(t > 0.0) {
        return invalid(format!("inversion time must be positive, got {t}"));
    }
    let mf = m as f64;
    let r = 2.0 * mf / (5.0 * t);
    let f0 = f.eval(Complex64::new(r, 0.0));
    if !f0.re.is_finite() {
        return Err(Error::EvaluationError(format!("{r:e}")));
    }
    let mut acc = 0.5 * f0.re * (r * t).exp();
    for k in 1..m {
        let th = k as f64 * std::f64::consts::PI / mf;
        let cot = th.cos() / th.sin();
        let s = Complex64::new(r * th * cot, r * th);
        let sigma = th + (th * cot - 1.0) * cot;
        let fs = f.eval(s);
        if !(fs.re.is_finite() && fs.im.is_finite()) {
            return Err(Error::EvaluationError(format!("{s}")));
        }
        acc += ((s * t).exp() * fs * Complex64::new(1.0, sigma)).re;
    }
    Ok(acc * r / mf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplace::{Field, FieldTransform, FnTransform};

    struct Shift(f64);
    impl FieldTransform for Shift {
        fn at<T: Field>(&self, s: T) -> T {
            T::from_f64(1.0) / (s + T::from_f64(self.0))
        }
    }

    #[test]
    fn weights_sum_to_zero() {
        for n in [2usize, 8, 14, 30] {
            let w = gaver_stehfest_weights(n).unwrap();
            let s = w.iter().fold(Dd::ZERO, |a, b| a + *b);
            assert!(s.to_f64().abs() < 1e-10, "n={n}");
        }
        assert!(gaver_stehfest_weights(7).is_err());
        assert!(gaver_stehfest_weights(60).is_err());
    }

    #[test]
    fn exponential_both_methods() {
        let f = Shift(1.0);
        let gs = gaver_stehfest(&f, 1.0, 30).unwrap();
        let ta = talbot(&f, 1.0, 32).unwrap();
        let e = (-1.0f64).exp();
        assert!((gs - e).abs() < 1e-9 * e, "{gs}");
        assert!((ta - e).abs() < 1e-10 * e, "{ta}");
        let inv = invert_laplace(&f, 1.0, &InversionConfig::default()).unwrap();
        assert!(inv.disagreement.unwrap() < 1e-8);
    }

    #[test]
    fn f64_path_is_capped() {
        let f = FnTransform(|s: Complex64| 1.0 / (s * s));
        assert!((gaver_stehfest(&f, 2.0, 14).unwrap() - 2.0).abs() < 1e-6);
        assert!(gaver_stehfest(&f, 2.0, 30).is_err());
    }

    #[test]
    fn non_finite_values_are_reported() {
        let f = FnTransform(|_s: Complex64| Complex64::new(f64::NAN, 0.0));
        assert!(matches!(talbot(&f, 1.0, 16), Err(Error::EvaluationError(_))));
    }
}
