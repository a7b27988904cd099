use std::f64::consts::PI;

use num_complex::Complex64;

use fracstoch::laplace::{
    analytic_transform, forward_laplace, invert_laplace, CatalogTransform, Field, FieldTransform, InversionConfig,
    TransformId,
};
use fracstoch::params::TimeChangeParams;
use fracstoch::quad::{exp_sinh, tanh_sinh};
use fracstoch::specfun::ml2;
use fracstoch::stats::{ks_two_sample, par_paths, McEstimate};
use fracstoch::stoch::{
    k_density, sample_frak_v_path, sample_inverse_e, sample_inverse_stable_exact, sample_k, sample_stable_increment,
    stable_density, uniform_grid, FrakV, PositiveStable, Role, StreamFactory,
};

const RES: f64 = 1e-3;

fn estimate(xs: &[f64]) -> McEstimate {
    McEstimate::from_samples(xs)
}

fn assert_within_3se(est: &McEstimate, target: f64, what: &str) {
    assert!(
        (est.mean - target).abs() <= 3.0 * est.stderr,
        "{what}: {} ± {} vs {target}",
        est.mean,
        est.stderr
    );
}

fn assert_same_law(a: &[f64], b: &[f64], what: &str) {
    let ks = ks_two_sample(a, b);
    assert!(ks.p_value > 0.01, "{what}: D = {}, p = {}", ks.statistic, ks.p_value);
}

/// `∫_0^∞ f`, integrated in log x so that power tails decay exponentially.
fn mass(f: impl Fn(f64) -> f64) -> f64 {
    let g = |y: f64| if y.abs() > 700.0 { 0.0 } else { f(y.exp()) * y.exp() };
    let up = exp_sinh(|y| g(y), 1e-10).unwrap().value;
    let down = exp_sinh(|y| g(-y), 1e-10).unwrap().value;
    up + down
}

#[test]
fn stable_increment_laplace_functional() {
    let f = StreamFactory::new(11);
    let xs = par_paths(100_000, |i| {
        let v = sample_stable_increment(0.5, 1.0, &mut f.stream(i, Role::Aux)).unwrap();
        (-v).exp()
    });
    assert_within_3se(&estimate(&xs), (-1.0f64).exp(), "E exp(-V)");
}

#[test]
fn stable_increment_degenerates_at_order_one() {
    let mut rng = StreamFactory::new(1).stream(0, Role::Aux);
    for dt in [0.1, 1.0, 3.5] {
        assert_eq!(sample_stable_increment(1.0, dt, &mut rng).unwrap(), dt);
    }
}

#[test]
fn stable_increment_tail() {
    let q = 10.0;
    let body = tanh_sinh(|x, _, _| stable_density(0.5, x, 1.0).unwrap(), 0.0, q, 1e-10).unwrap().value;
    let tail = 1.0 - body;
    // closed form for α = 1/2: P(V > q) = erf(1/(2√q)); check the density first
    let closed = stable_density(0.5, 2.0, 1.0).unwrap();
    let expect = (-1.0f64 / 8.0).exp() / (2.0 * PI.sqrt() * 2.0f64.powf(1.5));
    assert!(((closed - expect) / expect).abs() < 1e-12);

    let f = StreamFactory::new(12);
    let xs = par_paths(100_000, |i| {
        let v = sample_stable_increment(0.5, 1.0, &mut f.stream(i, Role::Aux)).unwrap();
        if v > q {
            1.0
        } else {
            0.0
        }
    });
    assert_within_3se(&estimate(&xs), tail, "P(V > 10)");
}

#[test]
fn stable_self_similarity() {
    let s = PositiveStable::new(0.6).unwrap();
    let f = StreamFactory::new(13);
    let scaled = |t: f64, role: Role| -> Vec<f64> {
        par_paths(10_000, |i| s.increment(t, &mut f.stream(i, role)) / t.powf(1.0 / 0.6))
    };
    assert_same_law(&scaled(0.5, Role::Clock), &scaled(2.0, Role::Aux), "V_t / t^(1/α)");
}

#[test]
fn stable_density_round_trip() {
    for (alpha, t, s) in [(0.3, 1.0, 0.7), (0.6, 2.0, 1.5), (0.8, 0.5, 1.0)] {
        let lhs = forward_laplace(|x| stable_density(alpha, x, t).unwrap(), s).unwrap();
        let rhs = (-t * f64::powf(s, alpha)).exp();
        assert!((lhs - rhs).abs() < 1e-6, "alpha={alpha}: {lhs} vs {rhs}");
        assert!((mass(|x| stable_density(alpha, x, t).unwrap()) - 1.0).abs() < 1e-6, "alpha={alpha}");
    }
}

#[test]
fn frak_v_laplace_functional() {
    // δ = 1, γ = ν = 0.3: E exp(-𝔙_1) = exp(-(1 + 1)) = e^{-2}
    let tc = TimeChangeParams::new(0.3, 0.3, 1.0);
    let v = FrakV::new(&tc).unwrap();
    let f = StreamFactory::new(14);
    let xs = par_paths(100_000, |i| (-v.increment(1.0, &mut f.stream(i, Role::Clock))).exp());
    assert_within_3se(&estimate(&xs), (-2.0f64).exp(), "E exp(-V_1)");
}

#[test]
fn frak_v_matches_two_stable_sum() {
    let (g, nu) = (0.4, 0.2);
    let tc = TimeChangeParams::new(g, nu, 1.0);
    let v = FrakV::new(&tc).unwrap();
    let f = StreamFactory::new(15);
    let a = par_paths(10_000, |i| v.increment(1.0, &mut f.stream(i, Role::Clock)));
    let b = par_paths(10_000, |i| {
        let mut rng = f.stream(i, Role::Aux);
        sample_stable_increment(g + nu, 1.0, &mut rng).unwrap() + sample_stable_increment(g, 1.0, &mut rng).unwrap()
    });
    assert_same_law(&a, &b, "V_1 vs sum of stables");
}

#[test]
fn frak_v_at_delta_zero_is_stable() {
    let tc = TimeChangeParams::new(0.4, 0.3, 0.0);
    let v = FrakV::new(&tc).unwrap();
    let f = StreamFactory::new(16);
    let a = par_paths(10_000, |i| v.increment(1.0, &mut f.stream(i, Role::Clock)));
    let b = par_paths(10_000, |i| sample_stable_increment(0.7, 1.0, &mut f.stream(i, Role::Aux)).unwrap());
    assert_same_law(&a, &b, "V_1 at delta = 0");
}

#[test]
fn paths_start_at_zero_and_increase() {
    let grid = uniform_grid(2.0, 400);
    let f = StreamFactory::new(17);
    for tc in [TimeChangeParams::new(0.5, 0.2, 1.0), TimeChangeParams::new(0.45, 0.2, 1.5)] {
        for i in 0..20 {
            let p = sample_frak_v_path(&tc, &grid, &mut f.stream(i, Role::Clock)).unwrap();
            assert_eq!(p.values[0], 0.0);
            assert!(p.monotone);
            assert!(p.values.windows(2).all(|w| w[1] >= w[0]));
        }
    }
}

#[test]
fn inverse_at_delta_zero_is_inverse_stable() {
    let tc = TimeChangeParams::new(0.4, 0.3, 0.0);
    let f = StreamFactory::new(18);
    let a = par_paths(10_000, |i| sample_inverse_e(&tc, 1.0, RES, &mut f.stream(i, Role::Clock)).unwrap().value);
    let b = par_paths(10_000, |i| sample_inverse_stable_exact(0.7, 1.0, &mut f.stream(i, Role::Aux)).unwrap());
    assert_same_law(&a, &b, "first passage vs exact inverse stable");
}

#[test]
fn inverse_laplace_functional_against_h_xs() {
    let tc = TimeChangeParams::new(0.5, 0.2, 1.0);
    let (z, t) = (1.0, 1.0);
    let f = StreamFactory::new(19);
    let xs = par_paths(20_000, |i| {
        let e = sample_inverse_e(&tc, t, RES, &mut f.stream(i, Role::Clock)).unwrap();
        (-z * e.value).exp()
    });
    let h = CatalogTransform::new(TransformId::HXs, tc, Complex64::new(z, 0.0)).unwrap();
    let reference = invert_laplace(&h, t, &InversionConfig::default()).unwrap().value;
    assert_within_3se(&estimate(&xs), reference, "E exp(-E_t)");
}

#[test]
fn exact_inverse_stable() {
    let mut rng = StreamFactory::new(2).stream(0, Role::Aux);
    assert_eq!(sample_inverse_stable_exact(1.0, 2.5, &mut rng).unwrap(), 2.5);

    let f = StreamFactory::new(20);
    let xs = par_paths(100_000, |i| (-sample_inverse_stable_exact(0.5, 1.0, &mut f.stream(i, Role::Aux)).unwrap()).exp());
    assert_within_3se(&estimate(&xs), ml2(0.5, 1.0, -1.0).unwrap(), "E exp(-L_1)");
}

/// `(1/s) Φ(s) / (z + Φ(s))` with `Φ(s) = s^{a_0} + s^{a_1}`: the transform in
/// t of `E exp(-z 𝔎_t)` for n = 1.
struct KFunctional {
    a0: f64,
    a1: f64,
    z: f64,
}

impl FieldTransform for KFunctional {
    fn at<T: Field>(&self, s: T) -> T {
        let phi = s.powf(self.a0) + s.powf(self.a1);
        phi / ((T::from_f64(self.z) + phi) * s)
    }
}

#[test]
fn inner_inverse_laplace_functional() {
    let tc = TimeChangeParams::new(0.4, 0.3, 1.0);
    let orders = tc.inner_orders();
    let (z, t) = (1.0, 1.0);
    let f = StreamFactory::new(21);
    let xs = par_paths(20_000, |i| (-z * sample_k(&tc, t, RES, &mut f.stream(i, Role::Clock)).unwrap().value).exp());
    let k = KFunctional { a0: orders[0], a1: orders[1], z };
    let reference = invert_laplace(&k, t, &InversionConfig::default()).unwrap().value;
    assert_within_3se(&estimate(&xs), reference, "E exp(-K_t)");
}

#[test]
fn inner_and_outer_inverse_agree_for_integer_delta() {
    let tc = TimeChangeParams::new(0.4, 0.3, 1.0);
    let f = StreamFactory::new(22);
    let a = par_paths(10_000, |i| sample_inverse_e(&tc, 1.0, RES, &mut f.stream(i, Role::Clock)).unwrap().value);
    let b = par_paths(10_000, |i| sample_k(&tc, 1.0, RES, &mut f.stream(i, Role::Aux)).unwrap().value);
    assert_same_law(&a, &b, "E vs K at delta = 1");
}

#[test]
fn k_density_transform_and_mass() {
    let tc = TimeChangeParams::new(0.4, 0.3, 1.0);
    let (x, s) = (0.5, 1.3);
    let lhs = forward_laplace(|t| k_density(&tc, x, t).unwrap(), s).unwrap();
    let rhs = analytic_transform(TransformId::KTs, &tc, Complex64::new(x, 0.0), Complex64::new(s, 0.0)).unwrap().re;
    assert!((lhs - rhs).abs() < 1e-4, "{lhs} vs {rhs}");

    let m = mass(|x| k_density(&tc, x, 1.0).unwrap());
    assert!((m - 1.0).abs() < 1e-4, "mass {m}");
}
