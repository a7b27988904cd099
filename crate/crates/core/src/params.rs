use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Orders (γ, ν, δ) of the time change, with the rate λ and the
/// diffusivity c used by the PDE formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeChangeParams {
    pub gamma: f64,
    pub nu: f64,
    pub delta: f64,
    #[serde(default = "one")]
    pub lambda: f64,
    #[serde(default = "one")]
    pub c: f64,
}

fn one() -> f64 {
    1.0
}

impl TimeChangeParams {
    pub fn new(gamma: f64, nu: f64, delta: f64) -> Self {
        TimeChangeParams { gamma, nu, delta, lambda: 1.0, c: 1.0 }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    /// γ + ν
    pub fn mu(&self) -> f64 {
        self.gamma + self.nu
    }

    /// `n = ⌈δ⌉`, zero for δ ≤ 0.
    pub fn n(&self) -> usize {
        if self.delta <= 0.0 {
            0
        } else {
            self.delta.ceil() as usize
        }
    }

    /// Stable orders `a_r = (γ+ν) n/δ - rν`, r = 0..=n, of the summands of
    /// the inner process. Empty for δ = 0.
    pub fn inner_orders(&self) -> Vec<f64> {
        let n = self.n();
        if n == 0 {
            return Vec::new();
        }
        let a0 = self.mu() * n as f64 / self.delta;
        (0..=n).map(|r| a0 - r as f64 * self.nu).collect()
    }

    /// Order δ/n of the outer clock (1 when δ is an integer).
    pub fn outer_order(&self) -> f64 {
        match self.n() {
            0 => 1.0,
            n => self.delta / n as f64,
        }
    }

    fn check_finite(&self) -> Result<()> {
        let all = [self.gamma, self.nu, self.delta, self.lambda, self.c];
        if all.iter().any(|v| !v.is_finite()) {
            return invalid("non-finite time-change parameter");
        }
        Ok(())
    }

    /// Constraints for the transform formulas.
    pub fn check_analytic(&self) -> Result<()> {
        self.check_finite()?;
        let mu = self.mu();
        if !(self.gamma > 0.0 && self.gamma <= 1.0 && self.nu > 0.0 && self.nu <= 1.0) {
            return invalid(format!("need gamma, nu in (0, 1], got ({}, {})", self.gamma, self.nu));
        }
        if mu > 2.0 {
            return invalid(format!("need gamma + nu <= 2, got {mu}"));
        }
        if self.delta <= -0.5 {
            return invalid(format!("need delta > -1/2, got {}", self.delta));
        }
        if self.delta * self.nu >= mu {
            return invalid(format!("need delta*nu < gamma + nu, got {} >= {mu}", self.delta * self.nu));
        }
        if self.gamma == 1.0 && self.nu == 1.0 && self.delta > 1.0 {
            return invalid("the wave-telegraph case gamma = nu = 1 allows delta <= 1 only");
        }
        if self.lambda <= 0.0 {
            return invalid(format!("need lambda > 0, got {}", self.lambda));
        }
        if self.c <= 0.0 {
            return invalid(format!("need c > 0, got {}", self.c));
        }
        Ok(())
    }

    /// Constraints for simulating the processes: γ, ν in (0,1),
    /// δν < γ+ν ≤ 1, λ = 1, and every inner order in (0, 1].
    pub fn check_simulation(&self) -> Result<()> {
        self.check_finite()?;
        if !(self.gamma > 0.0 && self.gamma < 1.0 && self.nu > 0.0 && self.nu < 1.0) {
            return invalid(format!("need gamma, nu in (0, 1), got ({}, {})", self.gamma, self.nu));
        }
        let mu = self.mu();
        if mu > 1.0 {
            return invalid(format!("simulation needs gamma + nu <= 1, got {mu}"));
        }
        if self.delta < 0.0 {
            return invalid(format!("simulation needs delta >= 0, got {}", self.delta));
        }
        if self.delta * self.nu >= mu {
            return invalid(format!("need delta*nu < gamma + nu, got {} >= {mu}", self.delta * self.nu));
        }
        if self.lambda != 1.0 {
            return invalid("the process construction fixes lambda = 1");
        }
        if let Some(&a0) = self.inner_orders().first() {
            if a0 > 1.0 + 1e-12 {
                return invalid(format!(
                    "inner stable order (gamma+nu)*n/delta = {a0} exceeds 1; need delta >= (gamma+nu)*ceil(delta)"
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let tc = TimeChangeParams::new(0.4, 0.2, 1.6);
        assert_eq!(tc.n(), 2);
        let a = tc.inner_orders();
        assert!((a[0] - 0.75).abs() < 1e-15 && (a[2] - 0.35).abs() < 1e-15);
        assert!((tc.outer_order() - 0.8).abs() < 1e-15);
        assert_eq!(TimeChangeParams::new(0.5, 0.2, 2.0).outer_order(), 1.0);
        assert!(TimeChangeParams::new(0.5, 0.2, 0.0).inner_orders().is_empty());
    }

    #[test]
    fn simulation_constraints() {
        assert!(TimeChangeParams::new(0.5, 0.2, 1.0).check_simulation().is_ok());
        assert!(TimeChangeParams::new(0.6, 0.5, 1.0).check_simulation().is_err());
        // order (γ+ν)/δ > 1
        assert!(TimeChangeParams::new(0.4, 0.2, 0.5).check_simulation().is_err());
    }

    #[test]
    fn wave_telegraph_range() {
        assert!(TimeChangeParams::new(1.0, 1.0, 1.0).check_analytic().is_ok());
        assert!(TimeChangeParams::new(1.0, 1.0, 1.5).check_analytic().is_err());
    }
}
