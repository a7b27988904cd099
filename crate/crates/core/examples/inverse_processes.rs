// First-passage times of the subordinator, by the grid scheme and through the
// subordination identity, compared with the inverted x-Laplace transform.

use num_complex::Complex64;

use fracstoch::laplace::{h_x_series, invert_laplace, CatalogTransform, InversionConfig, TransformId};
use fracstoch::params::TimeChangeParams;
use fracstoch::stats::{ks_two_sample, par_paths, McEstimate};
use fracstoch::stoch::{sample_inverse_e, sample_inverse_e_composed, Role, StreamFactory};

pub fn run_example() -> fracstoch::Result<()> {
    let tc = TimeChangeParams::new(0.5, 0.2, 1.0);
    let (t, z, res) = (1.0, 1.0, 1e-3);
    let streams = StreamFactory::new(7);

    let grid: Vec<f64> = par_paths(10_000, |i| sample_inverse_e(&tc, t, res, &mut streams.stream(i, Role::Clock)))
        .into_iter()
        .map(|r| r.map(|e| e.value))
        .collect::<Result<_, _>>()?;
    let composed: Vec<f64> = par_paths(10_000, |i| sample_inverse_e_composed(&tc, t, res, &mut streams.stream(i, Role::Aux)))
        .into_iter()
        .collect::<Result<_, _>>()?;

    let est = McEstimate::from_samples(&grid.iter().map(|e| (-z * e).exp()).collect::<Vec<_>>());
    let h = CatalogTransform::new(TransformId::HXs, tc, Complex64::new(z, 0.0))?;
    let inverted = invert_laplace(&h, t, &InversionConfig::default())?.value;
    let series = h_x_series(&tc, z, t)?;
    println!("E exp(-E_t): Monte Carlo {:.5} +/- {:.5}", est.mean, est.stderr);
    println!("             inversion   {inverted:.10}");
    println!("             series      {series:.10}");

    let ks = ks_two_sample(&grid, &composed);
    println!("grid vs composed sampler: D = {:.4}, p = {:.3}", ks.statistic, ks.p_value);
    Ok(())
}

#[allow(dead_code)]
fn main() -> fracstoch::Result<()> {
    run_example()
}
