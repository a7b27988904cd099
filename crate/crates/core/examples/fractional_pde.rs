// The fractional diffusion problem: Fourier series, Wright closed form,
// density by inversion, and the multi-term form for integer delta.

use fracstoch::laplace::InversionConfig;
use fracstoch::params::TimeChangeParams;
use fracstoch::pde::{
    density_g, diffusion_wright, fourier_of_density, g_hat_by_inversion, g_hat_series, multiterm_expand,
};

pub fn run_example() -> fracstoch::Result<()> {
    let cfg = InversionConfig::default();

    let tc = TimeChangeParams::new(0.4, 0.4, 1.0);
    println!("Fourier transform at gamma=nu=0.4, delta=1:");
    for (beta, t) in [(0.5, 1.0), (1.0, 0.5), (2.0, 0.3)] {
        let s = g_hat_series(&tc, beta, t)?;
        let i = g_hat_by_inversion(&tc, beta, t, &cfg)?.value;
        let q = fourier_of_density(&tc, beta, t, &cfg)?;
        println!("  beta={beta} t={t}: series {s:.10} inversion {i:.10} quadrature {q:.10}");
    }

    let tc0 = TimeChangeParams::new(0.5, 0.3, 0.0);
    println!("delta = 0, order 0.8: Wright form vs inversion");
    for x in [0.0, 0.5, 1.0, 2.0] {
        let w = diffusion_wright(0.8, 1.0, x, 1.0)?;
        let d = density_g(&tc0, x, 1.0, &cfg)?;
        println!("  x={x}: {w:.10} {:.10} ({}-{})", d.raw, d.method.name(), d.order);
    }

    println!("multi-term operator for delta = 2, lambda = 1.5:");
    for term in multiterm_expand(2, 1.5, 0.5, 0.2)? {
        println!("  {:.4} * D^{:.2}", term.coefficient, term.order);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fracstoch::Result<()> {
    run_example()
}
