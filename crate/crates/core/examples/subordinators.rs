// Stable subordinators and the subordinator V built from them: exact
// increments, paths on a grid and a Monte Carlo check of the Laplace
// functional E exp(-z V_t) = exp(-t z^(gamma+nu) (1 + z^(-nu))^delta).

use fracstoch::params::TimeChangeParams;
use fracstoch::stats::{par_paths, McEstimate};
use fracstoch::stoch::{sample_frak_v_path, uniform_grid, FrakV, PositiveStable, Role, StreamFactory};

pub fn run_example() -> fracstoch::Result<()> {
    let streams = StreamFactory::new(2024);

    let s = PositiveStable::new(0.5)?;
    let mut rng = streams.stream(0, Role::Aux);
    let draws: Vec<f64> = (0..5).map(|_| s.increment(1.0, &mut rng)).collect();
    println!("1/2-stable increments over dt=1: {draws:.4?}");

    let tc = TimeChangeParams::new(0.4, 0.3, 1.0);
    let v = FrakV::new(&tc)?;
    let (z, t) = (0.8, 1.5f64);
    let vals = par_paths(50_000, |i| (-z * v.increment(t, &mut streams.stream(i, Role::Clock))).exp());
    let est = McEstimate::from_samples(&vals);
    let exact = (-t * z.powf(tc.mu()) * (1.0 + z.powf(-tc.nu)).powf(tc.delta)).exp();
    println!("E exp(-z V_t): {:.5} +/- {:.5}, exact {exact:.5}", est.mean, est.stderr);

    let grid = uniform_grid(1.0, 10);
    let path = sample_frak_v_path(&tc, &grid, &mut streams.stream(1, Role::Aux))?;
    println!("path on [0, 1]:");
    for (t, x) in path.times.iter().zip(&path.values) {
        println!("  {t:.1} {x:.6}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fracstoch::Result<()> {
    run_example()
}
