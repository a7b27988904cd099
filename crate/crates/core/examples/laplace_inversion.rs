// Numerical Laplace inversion: Gaver-Stehfest in double-double precision and
// the fixed Talbot contour, on a user transform and on catalog entries.

use num_complex::Complex64;

use fracstoch::laplace::{
    invert_laplace, CatalogTransform, Field, FieldTransform, InversionConfig, InversionMethod, TransformId,
};
use fracstoch::params::TimeChangeParams;

/// `s^{μ-1} exp(-x s^μ)`, the transform of the inverse μ-stable density.
struct InverseStable {
    mu: f64,
    x: f64,
}

impl FieldTransform for InverseStable {
    fn at<T: Field>(&self, s: T) -> T {
        s.powf(self.mu - 1.0) * (-(T::from_f64(self.x) * s.powf(self.mu))).exp()
    }
}

pub fn run_example() -> fracstoch::Result<()> {
    let f = InverseStable { mu: 0.5, x: 1.0 };
    let exact = (-0.25f64).exp() / std::f64::consts::PI.sqrt();
    for method in [InversionMethod::GaverStehfest, InversionMethod::FixedTalbot] {
        let inv = invert_laplace(&f, 1.0, &InversionConfig::with_method(method))?;
        println!(
            "{:>15} order {:>2}: {:.15e} (error {:.1e}, cross-check {:.1e})",
            inv.method.name(),
            inv.order,
            inv.value,
            (inv.value - exact).abs(),
            inv.disagreement.unwrap_or(f64::NAN)
        );
    }

    let tc = TimeChangeParams::new(0.5, 0.2, 1.0);
    let cfg = InversionConfig::default();
    println!("catalog transforms at gamma=0.5 nu=0.2 delta=1:");
    for (id, first) in [(TransformId::HXs, 1.0), (TransformId::HTs, 0.5), (TransformId::KTs, 0.5)] {
        let f = CatalogTransform::new(id, tc, Complex64::new(first, 0.0))?;
        for t in [0.5, 2.0] {
            let inv = invert_laplace(&f, t, &cfg)?;
            println!("  {:<8} first={first} t={t}: {:.12e}", id.name(), inv.value);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fracstoch::Result<()> {
    run_example()
}
