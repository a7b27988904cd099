use crate::error::{invalid, Result};
use crate::quad::exp_sinh;

/// `∫_0^∞ e^{-st} f(t) dt` by exp-sinh quadrature, to relative tolerance
/// 1e-12.
pub fn forward_laplace<F: Fn(f64) -> f64>(f: F, s: f64) -> Result<f64> {
    forward_laplace_tol(f, s, 1e-12)
}

pub fn forward_laplace_tol<F: Fn(f64) -> f64>(f: F, s: f64, rel_tol: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return invalid(format!("forward Laplace needs s > 0, got {s}"));
    }
    // Nodes far in the tail are skipped without evaluating f, which may be
    // expensive or ill-conditioned there.
    let r = exp_sinh(
        |t| {
            let w = (-s * t).exp();
            if w < 1e-300 {
                0.0
            } else {
                w * f(t)
            }
        },
        rel_tol,
    )?;
    Ok(r.value)
}
