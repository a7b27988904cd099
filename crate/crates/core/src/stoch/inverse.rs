use serde::Serialize;

use super::frakv::FrakV;
use super::rng::RngStream;
use super::stable::PositiveStable;
use crate::error::{invalid, Error, Result};
use crate::params::TimeChangeParams;

/// A first-passage sample: the crossing happened in `(lower, upper]` and
/// `value` is the midpoint, so the discretization bias is at most half the
/// bracket width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstPassage {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl FirstPassage {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Level up to which the path is followed before giving up.
pub fn horizon(t: f64) -> f64 {
    100.0 * (1.0 + t)
}

fn check(t: f64, step: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return invalid(format!("level t must be positive, got {t}"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return invalid(format!("resolution must be positive, got {step}"));
    }
    Ok(())
}

/// First grid index k with `X_{kΔ} > t`, for a process with i.i.d.
/// increments `inc`.
fn first_passage<F: FnMut() -> f64>(t: f64, step: f64, mut inc: F) -> Result<FirstPassage> {
    let cap = horizon(t);
    let max_steps = (cap / step).ceil() as u64;
    let mut acc = 0.0;
    for k in 1..=max_steps {
        acc += inc();
        if acc > t {
            let upper = k as f64 * step;
            let lower = upper - step;
            return Ok(FirstPassage { value: 0.5 * (lower + upper), lower, upper });
        }
    }
    Err(Error::HorizonExceeded { level: t, horizon: cap })
}

/// Sample of 𝔈_t, the first passage of 𝔙 above `t`, on a grid of step
/// `resolution`.
pub fn sample_inverse_e(
    tc: &TimeChangeParams,
    t: f64,
    resolution: f64,
    rng: &mut RngStream,
) -> Result<FirstPassage> {
    check(t, resolution)?;
    let v = FrakV::new(tc)?;
    let stepper = v.stepper(resolution);
    first_passage(t, resolution, || stepper.step(rng))
}

/// Sample of 𝔎_t, the first passage of the inner process 𝒱 above `t`.
pub fn sample_k(tc: &TimeChangeParams, t: f64, resolution: f64, rng: &mut RngStream) -> Result<FirstPassage> {
    check(t, resolution)?;
    let v = FrakV::new(tc)?;
    let stepper = v.inner_stepper(resolution);
    first_passage(t, resolution, || stepper.step(rng))
}

/// Exact sample of the inverse δ-stable subordinator, `L_t = (t/S)^δ`.
pub fn sample_inverse_stable_exact(delta: f64, t: f64, rng: &mut RngStream) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return invalid(format!("t must be positive, got {t}"));
    }
    let s = PositiveStable::new(delta)?;
    if delta == 1.0 {
        return Ok(t);
    }
    Ok((t / s.sample(rng)).powf(delta))
}

/// 𝔈_t through the subordination identity `L^{δ/n}(𝔎_t)`.
pub fn sample_inverse_e_composed(
    tc: &TimeChangeParams,
    t: f64,
    resolution: f64,
    rng: &mut RngStream,
) -> Result<f64> {
    let k = sample_k(tc, t, resolution, rng)?;
    sample_inverse_stable_exact(tc.outer_order(), k.value, rng)
}
