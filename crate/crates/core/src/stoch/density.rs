use crate::error::{invalid, Result};
use crate::laplace::{invert_laplace, Field, FieldTransform, InversionConfig};
use crate::params::TimeChangeParams;
use crate::quad::tanh_sinh;
use crate::specfun::m_wright;

/// `e^{-s^α}`, the Laplace transform of the standard α-stable law.
struct StableLaplace(f64);

impl FieldTransform for StableLaplace {
    fn at<T: Field>(&self, s: T) -> T {
        (-s.powf(self.0)).exp()
    }
}

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return invalid(format!("stable order must lie in (0, 1), got {alpha}"));
    }
    Ok(())
}

/// Density of the standard α-stable law at `w`, by Laplace inversion.
fn standard_density(alpha: f64, w: f64, cfg: &InversionConfig) -> Result<f64> {
    if w <= 0.0 {
        return Ok(0.0);
    }
    let v = invert_laplace(&StableLaplace(alpha), w, cfg)?.value;
    // the density is super-exponentially small near 0; inversion noise
    // there may come out slightly negative
    Ok(v.max(0.0))
}

/// Density of the standard α-stable law at `w` through
/// `g_α(w) = α w^{-1-α} M_α(w^{-α})`. Unlike inversion of `e^{-s^α}`, whose
/// Talbot contour overflows at small `w` once α > 2/3, this stays finite.
fn standard_density_mw(alpha: f64, w: f64) -> Result<f64> {
    if w <= 0.0 || w == f64::INFINITY {
        return Ok(0.0);
    }
    let m = m_wright(alpha, w.powf(-alpha))?;
    if m == 0.0 {
        return Ok(0.0);
    }
    Ok(alpha * w.powf(-1.0 - alpha) * m)
}

/// Density `v_α(x, t)` of the α-stable subordinator at value `x` and time
/// `t`, from the M-Wright representation.
pub fn stable_density(alpha: f64, x: f64, t: f64) -> Result<f64> {
    check_order(alpha)?;
    if !(t > 0.0) {
        return invalid(format!("time must be positive, got {t}"));
    }
    let scale = t.powf(-1.0 / alpha);
    if !scale.is_finite() {
        // the law has collapsed onto 0
        return Ok(0.0);
    }
    Ok(scale * standard_density_mw(alpha, x * scale)?)
}

/// [`stable_density`] by inverting `e^{-t s^α}` with the given settings.
pub fn stable_density_with(alpha: f64, x: f64, t: f64, cfg: &InversionConfig) -> Result<f64> {
    check_order(alpha)?;
    if !(t > 0.0) {
        return invalid(format!("time must be positive, got {t}"));
    }
    // self-similarity: v(x, t) = t^{-1/α} v(x t^{-1/α}, 1)
    let scale = t.powf(-1.0 / alpha);
    Ok(scale * standard_density(alpha, x * scale, cfg)?)
}

/// Density of the inverse α-stable subordinator `L_y` at `x`,
/// `y^{-α} M_α(x y^{-α})`.
pub fn inverse_stable_density(alpha: f64, x: f64, y: f64) -> Result<f64> {
    check_order(alpha)?;
    if x < 0.0 || y <= 0.0 {
        return Ok(0.0);
    }
    let scale = y.powf(-alpha);
    let z = x * scale;
    if !z.is_finite() {
        return Ok(0.0);
    }
    let m = m_wright(alpha, z)?;
    if m == 0.0 {
        return Ok(0.0);
    }
    Ok(scale * m)
}

/// Density `k(x, t)` of 𝔎_t for n = 1 (or δ = 0), as the sum of the two
/// time convolutions of inverse-stable and stable densities.
///
/// The two orders are those of the inner process, `(γ+ν)/δ` and
/// `(γ+ν)/δ - ν`, so that the t-Laplace transform is
/// `(1/s)(s^{a_0} + s^{a_1}) exp(-x(s^{a_0} + s^{a_1}))`.
pub fn k_density(tc: &TimeChangeParams, x: f64, t: f64) -> Result<f64> {
    tc.check_analytic()?;
    if !(x > 0.0 && t > 0.0) {
        return invalid(format!("k_density needs x, t > 0, got ({x}, {t})"));
    }
    if tc.delta == 0.0 {
        return inverse_stable_density(tc.mu(), x, t);
    }
    if tc.n() != 1 {
        return invalid(format!("k_density needs n = ceil(delta) = 1, got {}", tc.n()));
    }
    let orders = tc.inner_orders();
    let (a0, a1) = (orders[0], orders[1]);
    if a0 >= 1.0 || a1 <= 0.0 {
        return invalid(format!("inner orders ({a0}, {a1}) must lie in (0, 1)"));
    }
    // ∫_0^t l_a(x, y) g_b(t - y; x) dy. For small x the stable factor is a
    // spike of width ~x^{1/b} at y = t, so the near piece is integrated apart.
    let half = |a: f64, b: f64| -> Result<f64> {
        let err = std::cell::RefCell::new(None);
        // integrate in the lag u = t - y over [lo, hi]
        let piece = |lo: f64, hi: f64| -> Result<f64> {
            let r = tanh_sinh(
                |_, du, dy| {
                    let v = inverse_stable_density(a, x, (t - hi) + dy)
                        .and_then(|l| Ok(l * stable_density(b, lo + du, x)?));
                    v.unwrap_or_else(|e| {
                        err.borrow_mut().get_or_insert(e);
                        0.0
                    })
                },
                lo,
                hi,
                1e-8,
            );
            if let Some(e) = err.borrow_mut().take() {
                return Err(e);
            }
            Ok(r?.value)
        };
        if x < 1e-30 {
            // the stable factor is a point mass up to O(x)
            return inverse_stable_density(a, x, t);
        }
        let w = 20.0 * x.powf(1.0 / b);
        if w < 0.5 * t {
            Ok(piece(0.0, w)? + piece(w, t)?)
        } else {
            piece(0.0, t)
        }
    };
    Ok(half(a0, a1)? + half(a1, a0)?)
}
