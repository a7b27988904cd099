// Levy processes run at the inverse subordinator: characteristic function
// against the inverted Fourier-Laplace transform, a Poisson mean, and the
// Euler scheme for a time-changed SDE with jumps.

use fracstoch::laplace::{invert_laplace, CatalogTransform, InversionConfig, TransformId};
use fracstoch::levy::{euler_time_changed_sde, EulerConfig, JumpSpec, LevySpec, SdeCoeffs, TimeChangedLevy};
use fracstoch::params::TimeChangeParams;
use fracstoch::stats::{par_paths, McEstimate};
use fracstoch::stoch::{Role, StreamFactory};

pub fn run_example() -> fracstoch::Result<()> {
    let tc = TimeChangeParams::new(0.5, 0.2, 1.0);
    let t = 1.0;
    let cfg = InversionConfig::default();

    for spec in [LevySpec::brownian(1.0), LevySpec::IsotropicStable { alpha: 0.7, scale: 1.0, dim: 1 }] {
        let proc = TimeChangedLevy::new(spec.clone(), tc, vec![0.0], 1e-3)?;
        let est = proc.expectation(|p| p[0].cos(), t, 20_000, 11)?;
        let psi = spec.psi(&[1.0]);
        let g = CatalogTransform::new(TransformId::GFourierLaplace, tc, psi)?;
        let reference = invert_laplace(&g, t, &cfg)?.value;
        println!("{spec:?}\n  E cos(X_t) = {:.4} +/- {:.4}, inversion {reference:.6}", est.mean, est.stderr);
    }

    let poisson = TimeChangedLevy::new(LevySpec::Poisson { rate: 2.0 }, tc, vec![0.0], 1e-3)?;
    let est = poisson.expectation(|p| p[0], t, 20_000, 12)?;
    println!("Poisson(2) at the clock: mean count {:.4} +/- {:.4}", est.mean, est.stderr);

    // Ornstein-Uhlenbeck with compensated jumps, run on the inner clock
    let coeffs = SdeCoeffs {
        drift: |_: f64, y: f64| -y,
        diffusion: |_: f64, _: f64| 0.5,
        jumps: Some(JumpSpec { rate: 1.0, size: 0.3, compensated: true }),
    };
    let streams = StreamFactory::new(13);
    let euler = EulerConfig::default();
    let out: Vec<f64> = par_paths(2_000, |i| {
        euler_time_changed_sde(&coeffs, &tc, 1.0, t, &euler, &mut streams.stream(i, Role::Clock), &mut streams.stream(i, Role::Levy))
            .map(|o| o.value)
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    let m = McEstimate::from_samples(&out);
    println!("time-changed OU from 1: E X_t = {:.4} +/- {:.4}", m.mean, m.stderr);
    Ok(())
}

#[allow(dead_code)]
fn main() -> fracstoch::Result<()> {
    run_example()
}
