use std::f64::consts::{E, PI};

use num_complex::Complex64;

use fracstoch::laplace::{
    analytic_transform, forward_laplace, h_x_series, invert_laplace, CatalogTransform, Field, FieldTransform,
    InversionConfig, InversionMethod, TransformId,
};
use fracstoch::params::TimeChangeParams;
use fracstoch::specfun::ml2;
use fracstoch::stoch::{inverse_stable_density, k_density};

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

struct Ramp;
impl FieldTransform for Ramp {
    fn at<T: Field>(&self, s: T) -> T {
        T::from_f64(1.0) / (s * s)
    }
}

struct Decay;
impl FieldTransform for Decay {
    fn at<T: Field>(&self, s: T) -> T {
        T::from_f64(1.0) / (s + T::from_f64(1.0))
    }
}

/// `s^{μ-1} exp(-x s^μ)`
struct InverseStable {
    mu: f64,
    x: f64,
}
impl FieldTransform for InverseStable {
    fn at<T: Field>(&self, s: T) -> T {
        s.powf(self.mu - 1.0) * (-(T::from_f64(self.x) * s.powf(self.mu))).exp()
    }
}

#[test]
fn inversion_examples() {
    for method in [InversionMethod::GaverStehfest, InversionMethod::FixedTalbot] {
        let cfg = InversionConfig::with_method(method);
        let v = invert_laplace(&Ramp, 2.0, &cfg).unwrap();
        assert!(rel(v.value, 2.0) < 1e-9);
        let v = invert_laplace(&Decay, 1.0, &cfg).unwrap();
        assert!(rel(v.value, 1.0 / E) < 1e-9);
        // inverse 1/2-stable density at x = 1, t = 1: e^{-1/4}/√π
        let v = invert_laplace(&InverseStable { mu: 0.5, x: 1.0 }, 1.0, &cfg).unwrap();
        assert!(rel(v.value, (-0.25f64).exp() / PI.sqrt()) < 1e-8, "{}", v.value);
    }
    let d = inverse_stable_density(0.5, 1.0, 1.0).unwrap();
    assert!(rel(d, (-0.25f64).exp() / PI.sqrt()) < 1e-6);
}

#[test]
fn forward_examples() {
    assert!(rel(forward_laplace(|_| 1.0, 2.0).unwrap(), 0.5) < 1e-12);
    assert!(rel(forward_laplace(|t| t, 1.0).unwrap(), 1.0) < 1e-12);
    assert!(rel(forward_laplace(|t| (-t).exp(), 1.0).unwrap(), 0.5) < 1e-12);
}

#[test]
fn catalog_examples() {
    let tc = TimeChangeParams::new(0.5, 0.2, 0.0);
    let mu = tc.mu();
    for (z, s) in [(0.3, 1.0), (2.0, 0.4)] {
        let v = analytic_transform(TransformId::HXs, &tc, c(z), c(s)).unwrap();
        let expect = s.powf(mu - 1.0) / (s.powf(mu) + z);
        assert!(rel(v.re, expect) < 1e-14);
    }
    for (z, t) in [(0.5, 1.0), (1.2, 2.0)] {
        let v = h_x_series(&tc, z, t).unwrap();
        assert!(rel(v, ml2(mu, 1.0, -z * t.powf(mu)).unwrap()) < 1e-13);
    }
    let tc1 = TimeChangeParams::new(0.4, 0.4, 1.0);
    for s in [0.3, 1.0, 4.0] {
        let v = analytic_transform(TransformId::GFourierLaplace, &tc1, c(0.0), c(s)).unwrap();
        assert_eq!(v.re, 1.0 / s);
    }
}

#[test]
fn round_trip_inverse_stable_density() {
    // H_TS at δ = 0 inverted in s is the inverse stable density in t
    let tc = TimeChangeParams::new(0.4, 0.3, 0.0);
    let cfg = InversionConfig::default();
    for x in [0.3, 1.0, 2.0] {
        for t in [0.5, 1.0, 2.5] {
            let f = CatalogTransform::new(TransformId::HTs, tc, c(x)).unwrap();
            let inv = invert_laplace(&f, t, &cfg).unwrap();
            let d = inverse_stable_density(tc.mu(), x, t).unwrap();
            assert!((inv.value - d).abs() < 1e-4, "x={x} t={t}: {} vs {d}", inv.value);
        }
    }
}

#[test]
fn round_trip_k_density() {
    let tc = TimeChangeParams::new(0.4, 0.3, 1.0);
    let cfg = InversionConfig::default();
    for x in [0.2, 0.6] {
        for t in [0.5, 1.5] {
            let f = CatalogTransform::new(TransformId::KTs, tc, c(x)).unwrap();
            let inv = invert_laplace(&f, t, &cfg).unwrap();
            let d = k_density(&tc, x, t).unwrap();
            assert!((inv.value - d).abs() < 1e-4, "x={x} t={t}: {} vs {d}", inv.value);
        }
    }
}

#[test]
fn x_transform_of_h_ts_is_h_xs() {
    for tc in [TimeChangeParams::new(0.5, 0.2, 1.0), TimeChangeParams::new(0.4, 0.3, 1.6)] {
        for (z, s) in [(0.5, 1.0), (2.0, 0.7), (1.0, 3.0)] {
            let h_ts = |x: f64| analytic_transform(TransformId::HTs, &tc, c(x), c(s)).unwrap().re;
            let lhs = forward_laplace(h_ts, z).unwrap();
            let rhs = analytic_transform(TransformId::HXs, &tc, c(z), c(s)).unwrap().re;
            assert!(rel(lhs, rhs) < 1e-5, "z={z} s={s}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn methods_agree_on_catalog() {
    // Gaver-Stehfest converges slowly on the t-densities, whose small-t
    // behaviour is exp(-c t^{-k}); they get a looser bound.
    let tc = TimeChangeParams::new(0.5, 0.2, 1.0);
    let entries = [
        (TransformId::HXs, 1.0, 1e-6),
        (TransformId::GFourierLaplace, 1.0, 1e-6),
        (TransformId::GXLaplace, 0.5, 1e-6),
        (TransformId::HTs, 0.5, 1e-4),
        (TransformId::EDensTs, 0.5, 1e-4),
        (TransformId::KTs, 0.5, 1e-4),
    ];
    let gs = InversionConfig::with_method(InversionMethod::GaverStehfest).unchecked();
    let ta = InversionConfig::with_method(InversionMethod::FixedTalbot).unchecked();
    for (id, first, tol) in entries {
        let f = CatalogTransform::new(id, tc, c(first)).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let a = invert_laplace(&f, t, &gs).unwrap().value;
            let b = invert_laplace(&f, t, &ta).unwrap().value;
            assert!(rel(a, b) < tol, "{} t={t}: {a} vs {b}", id.name());
        }
    }
}
