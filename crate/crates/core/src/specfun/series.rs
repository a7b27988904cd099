//! Shared truncation rule for the power series in this module.

use crate::error::{Error, Result};

pub const TERM_TOL: f64 = 1e-15;
pub const SMALL_RUN: usize = 3;
pub const TERM_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy)]
pub struct SeriesSum {
    pub value: f64,
    /// Largest |term| seen; `max_term / |value|` measures cancellation.
    pub max_term: f64,
    pub terms: usize,
}

impl SeriesSum {
    pub fn cancellation(&self) -> f64 {
        if self.max_term == 0.0 {
            1.0
        } else {
            self.max_term / self.value.abs()
        }
    }
}

/// Sums `term(0) + term(1) + ...` until three consecutive terms are below
/// `TERM_TOL * |sum|`, or until `last` (inclusive) when the series is finite.
pub fn sum_series<F>(mut term: F, last: Option<usize>, context: &str) -> Result<SeriesSum>
where
    F: FnMut(usize) -> Result<f64>,
{
    // Neumaier compensated summation.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut max_term = 0.0f64;
    let mut small = 0usize;
    let cap = last.map_or(TERM_CAP, |m| m + 1);
    for r in 0..cap {
        let t = term(r)?;
        if !t.is_finite() {
            return Err(Error::NonConvergent {
                terms: r,
                context: format!("{context}: term {r} overflowed"),
            });
        }
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
        max_term = max_term.max(t.abs());
        if last.is_some() {
            continue;
        }
        if t.abs() <= TERM_TOL * (sum + comp).abs() {
            small += 1;
            if small >= SMALL_RUN {
                return Ok(SeriesSum { value: sum + comp, max_term, terms: r + 1 });
            }
        } else {
            small = 0;
        }
    }
    if last.is_some() {
        return Ok(SeriesSum { value: sum + comp, max_term, terms: cap });
    }
    Err(Error::NonConvergent { terms: TERM_CAP, context: context.to_string() })
}

/// If `xi` is a non-positive integer `-m`, returns `m`.
pub fn neg_integer(xi: f64) -> Option<usize> {
    if xi <= 0.0 && xi == xi.floor() && xi > -1e9 {
        Some((-xi) as usize)
    } else {
        None
    }
}
