use serde::Serialize;

use super::rng::RngStream;
use super::stable::PositiveStable;
use crate::error::{invalid, Result};
use crate::params::TimeChangeParams;

/// A time grid with the process values on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplePath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Set for subordinator paths, which are non-decreasing from 0.
    pub monotone: bool,
}

/// Sampler for 𝔙 = 𝒱 ∘ V^{δ/n}, where 𝒱 is the sum of independent stable
/// subordinators of orders `a_r = (γ+ν)n/δ - rν` scaled by
/// `C(n,r)^{1/a_r}`, r = 0..=n. For δ = 0 it is a single (γ+ν)-stable
/// subordinator.
#[derive(Debug, Clone)]
pub struct FrakV {
    tc: TimeChangeParams,
    inner: Vec<(f64, PositiveStable)>,
    outer: Option<PositiveStable>,
}

impl FrakV {
    pub fn new(tc: &TimeChangeParams) -> Result<Self> {
        tc.check_simulation()?;
        let n = tc.n();
        let orders = tc.inner_orders();
        let inner = if orders.is_empty() {
            vec![(1.0, PositiveStable::new(tc.mu())?)]
        } else {
            let mut binom = 1.0;
            let mut v = Vec::with_capacity(orders.len());
            for (r, a) in orders.iter().enumerate() {
                v.push((binom, PositiveStable::new(*a)?));
                binom = binom * (n - r) as f64 / (r + 1) as f64;
            }
            v
        };
        let outer_order = tc.outer_order();
        let outer = if outer_order < 1.0 { Some(PositiveStable::new(outer_order)?) } else { None };
        Ok(FrakV { tc: *tc, inner, outer })
    }

    pub fn params(&self) -> &TimeChangeParams {
        &self.tc
    }

    /// Increment of the inner process 𝒱 over an interval of length `du`.
    pub fn inner_increment(&self, du: f64, rng: &mut RngStream) -> f64 {
        self.inner
            .iter()
            .map(|(c, s)| (c * du).powf(1.0 / s.alpha()) * s.sample(rng))
            .sum()
    }

    /// Increment of 𝔙 over `dt`.
    pub fn increment(&self, dt: f64, rng: &mut RngStream) -> f64 {
        let du = match &self.outer {
            Some(o) => o.increment(dt, rng),
            None => dt,
        };
        self.inner_increment(du, rng)
    }

    /// A stepper for repeated increments over a fixed `dt`, with the
    /// deterministic scale factors hoisted out.
    pub fn stepper(&self, dt: f64) -> Stepper<'_> {
        if self.outer.is_some() {
            Stepper { v: self, dt, scales: Vec::new() }
        } else {
            self.inner_stepper(dt)
        }
    }

    /// Like [`FrakV::stepper`] but for the inner process 𝒱.
    pub fn inner_stepper(&self, du: f64) -> Stepper<'_> {
        let scales = self.inner.iter().map(|(c, s)| (c * du).powf(1.0 / s.alpha())).collect();
        Stepper { v: self, dt: du, scales }
    }

    /// Path of 𝔙 on `grid`, which must start at 0 and increase.
    pub fn path(&self, grid: &[f64], rng: &mut RngStream) -> Result<SamplePath> {
        check_grid(grid)?;
        let mut values = Vec::with_capacity(grid.len());
        let mut acc = 0.0;
        values.push(0.0);
        for w in grid.windows(2) {
            acc += self.increment(w[1] - w[0], rng);
            values.push(acc);
        }
        Ok(SamplePath { times: grid.to_vec(), values, monotone: true })
    }
}

pub struct Stepper<'a> {
    v: &'a FrakV,
    dt: f64,
    scales: Vec<f64>,
}

impl Stepper<'_> {
    pub fn step(&self, rng: &mut RngStream) -> f64 {
        if self.scales.is_empty() {
            self.v.increment(self.dt, rng)
        } else {
            self.v.inner.iter().zip(&self.scales).map(|((_, s), k)| k * s.sample(rng)).sum()
        }
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.first() != Some(&0.0) {
        return invalid("time grid must start at 0");
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|v| !v.is_finite()) {
        return invalid("time grid must be finite and strictly increasing");
    }
    Ok(())
}

/// Path of 𝔙 on `grid`.
pub fn sample_frak_v_path(tc: &TimeChangeParams, grid: &[f64], rng: &mut RngStream) -> Result<SamplePath> {
    FrakV::new(tc)?.path(grid, rng)
}

/// Uniform grid `0, t/steps, ..., t`.
pub fn uniform_grid(t: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| t * k as f64 / steps as f64).collect()
}
