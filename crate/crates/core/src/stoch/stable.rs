use std::f64::consts::PI;

use super::rng::RngStream;
use crate::error::{invalid, Result};

/// Standard positive α-stable law, `E e^{-sS} = e^{-s^α}`, with the
/// per-order constants of the Kanter representation precomputed.
#[derive(Debug, Clone, Copy)]
pub struct PositiveStable {
    alpha: f64,
    inv_alpha: f64,
    tail_exp: f64,
}

impl PositiveStable {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return invalid(format!("stable order must lie in (0, 1], got {alpha}"));
        }
        Ok(PositiveStable { alpha, inv_alpha: 1.0 / alpha, tail_exp: (1.0 - alpha) / alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// One standard variate:
    /// `sin(αU)/sin(U)^{1/α} · (sin((1-α)U)/E)^{(1-α)/α}` with U uniform on
    /// (0, π) and E standard exponential.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        if self.alpha == 1.0 {
            return 1.0;
        }
        let u = PI * rng.open01();
        let e = -rng.open01().ln();
        let a = self.alpha;
        (a * u).sin() / u.sin().powf(self.inv_alpha) * ((((1.0 - a) * u).sin()) / e).powf(self.tail_exp)
    }

    /// Increment over a time step `dt`: `dt^{1/α} S`.
    pub fn increment(&self, dt: f64, rng: &mut RngStream) -> f64 {
        dt.powf(self.inv_alpha) * self.sample(rng)
    }
}

/// Increment over `dt` of the α-stable subordinator, whose Laplace
/// transform is `e^{-dt s^α}`. α = 1 is the deterministic drift `dt`.
pub fn sample_stable_increment(alpha: f64, dt: f64, rng: &mut RngStream) -> Result<f64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return invalid(format!("dt must be positive, got {dt}"));
    }
    Ok(PositiveStable::new(alpha)?.increment(dt, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stoch::rng::{RngStream, Role};

    #[test]
    fn laplace_transform_at_one() {
        let mut rng = RngStream::new(11, 0, Role::Aux);
        let s = PositiveStable::new(0.5).unwrap();
        let n = 100_000;
        let vals: Vec<f64> = (0..n).map(|_| (-s.sample(&mut rng)).exp()).collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        let se = sd / (n as f64).sqrt();
        assert!((mean - (-1.0f64).exp()).abs() < 4.0 * se, "{mean} {se}");
    }

    #[test]
    fn degenerate_order_one() {
        let mut rng = RngStream::new(1, 0, Role::Aux);
        assert_eq!(sample_stable_increment(1.0, 0.37, &mut rng).unwrap(), 0.37);
        assert!(sample_stable_increment(1.2, 1.0, &mut rng).is_err());
    }
}
