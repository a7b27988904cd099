// Prabhakar, Wright and M-Wright functions, and the regularized Prabhakar
// derivative applied to a transform.

use fracstoch::laplace::{Field, FieldTransform, InversionConfig};
use fracstoch::specfun::gamma::gamma;
use fracstoch::specfun::{
    apply_regularized_d, generalized_wright, m_wright, ml2, ml_prabhakar_traced, wright, GenWrightSpec,
    PrabhakarParams, WrightParams,
};

/// `Γ(k+1) s^{-k-1}`, the transform of `t^k`.
struct Power(f64);

impl FieldTransform for Power {
    fn at<T: Field>(&self, s: T) -> T {
        T::from_f64(gamma(self.0 + 1.0)) * s.powf(-self.0 - 1.0)
    }
}

pub fn run_example() -> fracstoch::Result<()> {
    println!("Prabhakar function E^xi_(alpha,eta)(x):");
    for (alpha, eta, xi, x) in [(1.0, 1.0, 1.0, 1.0), (0.6, 1.2, 2.5, -0.7), (0.5, 1.0, 1.0, -30.0)] {
        let (v, method) = ml_prabhakar_traced(&PrabhakarParams::new(alpha, eta, xi, 0.0), x)?;
        println!("  alpha={alpha} eta={eta} xi={xi} x={x}: {v:.15e} ({})", method.name());
    }
    println!("  E_1/2(-1) = {:.15e}", ml2(0.5, 1.0, -1.0)?);

    println!("Wright functions:");
    let w = wright(WrightParams { a: -0.5, b: 0.5 }, -1.0)?;
    println!("  W_(-1/2,1/2)(-1) = {w:.15e}, exp(-1/4)/sqrt(pi) = {:.15e}", (-0.25f64).exp() / std::f64::consts::PI.sqrt());
    for z in [0.5, 1.0, 2.0] {
        println!("  M_0.3({z}) = {:.15e}", m_wright(0.3, z)?);
    }
    let g = GenWrightSpec { upper: vec![(1.0, 1.0), (1.0, 1.0)], lower: vec![(1.0, 1.0), (1.0, 1.0)] };
    println!("  2psi2 reducing to exp at 0.3: {:.15e}", generalized_wright(&g, 0.3)?);

    // D of t^k with xi = 0 is the Riemann-Liouville derivative of order eta
    let p = PrabhakarParams::new(0.6, 0.5, 0.0, -0.5);
    let d = apply_regularized_d(&Power(1.0), 0.0, &p, 1.0, &InversionConfig::default())?;
    println!("regularized derivative of t at t=1: {:.12e} (exact {:.12e})", d.value, 1.0 / gamma(1.5));
    Ok(())
}

#[allow(dead_code)]
fn main() -> fracstoch::Result<()> {
    run_example()
}
