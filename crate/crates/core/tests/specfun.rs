use std::f64::consts::{E, PI};

use fracstoch::laplace::{Field, FieldTransform, InversionConfig};
use fracstoch::specfun::gamma::gamma;
use fracstoch::specfun::{
    apply_regularized_d, generalized_wright, m_wright, ml2, ml_prabhakar, ml_series, pochhammer, prabhakar_convolve,
    prabhakar_convolve_closed, wright, wright_operator_series, GenWrightSpec, PrabhakarParams, WrightParams,
};
use fracstoch::Error;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// `Γ(k+1) s^{-k-1}`, the transform of `t^k`.
struct Power(f64);

impl FieldTransform for Power {
    fn at<T: Field>(&self, s: T) -> T {
        T::from_f64(gamma(self.0 + 1.0)) * s.powf(-self.0 - 1.0)
    }
}

/// `c/s`
struct Constant(f64);

impl FieldTransform for Constant {
    fn at<T: Field>(&self, s: T) -> T {
        T::from_f64(self.0) / s
    }
}

#[test]
fn pochhammer_examples() {
    assert_eq!(pochhammer(7.3, 0), 1.0);
    assert_eq!(pochhammer(0.0, 3), 0.0);
    assert_eq!(pochhammer(3.0, 2), 12.0);
    assert_eq!(pochhammer(-2.0, 3), 0.0);
}

#[test]
fn prabhakar_examples() {
    let e = ml_prabhakar(&PrabhakarParams::new(1.0, 1.0, 1.0, 0.0), 1.0).unwrap();
    assert!(rel(e, E) < 1e-15);

    let inv_sqrt_pi = 1.0 / PI.sqrt();
    for (alpha, x) in [(0.3, -4.0), (1.7, 2.5), (1.0, 0.0)] {
        let v = ml_prabhakar(&PrabhakarParams::new(alpha, 0.5, 0.0, 0.0), x).unwrap();
        assert!(rel(v, inv_sqrt_pi) < 1e-15);
    }

    // extended-precision reference, tests/oracles/oracles.py
    let v = ml_prabhakar(&PrabhakarParams::new(0.6, 1.2, 2.5, 0.0), -0.7).unwrap();
    assert!(rel(v, 0.210947010859777419) < 1e-13, "{v}");
    let v = ml_prabhakar(&PrabhakarParams::new(0.5, 1.0, 1.0, 0.0), -1.0).unwrap();
    assert!(rel(v, 0.427583576155807004) < 1e-13, "{v}");
    let v = ml2(0.7, 1.0, -5.0).unwrap();
    assert!(rel(v, 0.07756935776476981) < 1e-10, "{v}");
}

#[test]
fn prabhakar_rejects_bad_alpha() {
    let r = ml_prabhakar(&PrabhakarParams::new(0.0, 1.0, 1.0, 0.0), 1.0);
    assert!(matches!(r, Err(Error::InvalidParams(_))));
}

#[test]
fn wright_examples() {
    let w = WrightParams { a: -0.5, b: 0.5 };
    assert!(rel(wright(w, 0.0).unwrap(), 1.0 / PI.sqrt()) < 1e-15);
    assert!(rel(wright(w, -1.0).unwrap(), (-0.25f64).exp() / PI.sqrt()) < 1e-14);
    for x in [-3.0, 0.4, 2.0] {
        assert!(rel(wright(WrightParams { a: 0.0, b: 1.0 }, x).unwrap(), x.exp()) < 1e-14);
    }
}

#[test]
fn m_wright_half_is_gaussian() {
    // M_{1/2}(z) = exp(-z²/4)/√π
    for z in [0.1, 0.7, 1.5, 4.0] {
        let v = m_wright(0.5, z).unwrap();
        assert!(rel(v, (-z * z / 4.0).exp() / PI.sqrt()) < 1e-13, "z={z}");
    }
}

#[test]
fn generalized_wright_examples() {
    let g = GenWrightSpec { upper: vec![(1.0, 1.0), (1.0, 1.0)], lower: vec![(1.0, 1.0), (1.0, 1.0)] };
    for x in [-2.0, 0.3, 1.5] {
        assert!(rel(generalized_wright(&g, x).unwrap(), x.exp()) < 1e-13);
    }
    let g = GenWrightSpec { upper: vec![(2.5, 0.3), (0.7, 1.0)], lower: vec![(1.5, 0.2), (3.0, 0.5)] };
    let at_zero = gamma(2.5) * gamma(0.7) / (gamma(1.5) * gamma(3.0));
    assert!(rel(generalized_wright(&g, 0.0).unwrap(), at_zero) < 1e-14);
}

#[test]
fn convolve_examples() {
    let p = PrabhakarParams::new(0.7, 0.0, 2.0, -1.0);
    let v = prabhakar_convolve(1.5, &p, 0.9, 1.0).unwrap();
    let closed = gamma(1.5) * ml_prabhakar(&PrabhakarParams::new(0.7, 2.4, -2.0, 0.0), -1.0).unwrap();
    assert!(rel(v, closed) < 1e-8, "{v} vs {closed}");

    // ξ = 0: Riemann-Liouville integral of the power
    let p0 = PrabhakarParams::new(0.7, 0.0, 0.0, -1.0);
    let (beta, theta, t) = (1.5, 0.8, 2.0);
    let v = prabhakar_convolve(beta, &p0, theta, t).unwrap();
    let rl = gamma(beta) / gamma(beta + theta) * t.powf(beta + theta - 1.0);
    assert!(rel(v, rl) < 1e-8);

    // β = 1
    let p1 = PrabhakarParams::new(0.45, 0.0, 1.3, -0.6);
    let (theta, t) = (1.2, 1.7);
    let v = prabhakar_convolve(1.0, &p1, theta, t).unwrap();
    let q = PrabhakarParams::new(0.45, theta + 1.0, -1.3, 0.0);
    let closed = t.powf(theta) * ml_prabhakar(&q, -0.6 * t.powf(0.45)).unwrap();
    assert!(rel(v, closed) < 1e-8);
}

#[test]
fn regularized_derivative_examples() {
    let cfg = InversionConfig::default();
    let p = PrabhakarParams::new(0.6, 0.8, 1.4, -0.5);
    for t in [0.5, 1.0, 2.0] {
        let v = apply_regularized_d(&Constant(3.0), 3.0, &p, t, &cfg).unwrap();
        assert!(v.value.abs() < 1e-9, "t={t}: {}", v.value);
    }

    let p = PrabhakarParams::new(0.6, 0.5, 0.0, -0.5);
    let v = apply_regularized_d(&Power(1.0), 0.0, &p, 1.0, &cfg).unwrap();
    assert!(rel(v.value, 1.0 / gamma(1.5)) < 1e-8);
}

#[test]
fn wright_operator_series_for_small_zeta() {
    // f(t) = t^{β-1} vanishes at 0, so the plain and regularized operators agree.
    let cfg = InversionConfig::default();
    for (alpha, eta, xi, zeta) in [(0.5, 0.6, 1.5, -0.1), (0.8, 0.3, 2.0, -0.05), (0.4, 0.9, 0.7, 0.08)] {
        let p = PrabhakarParams::new(alpha, eta, xi, zeta);
        let beta = 2.0;
        let t = 1.0;
        let series = wright_operator_series(&p, beta, t).unwrap();
        let direct = apply_regularized_d(&Power(beta - 1.0), 0.0, &p, t, &cfg).unwrap();
        assert!(rel(series, direct.value) < 1e-6, "{series} vs {}", direct.value);
        let closed = gamma(beta)
            * t.powf(beta - eta - 1.0)
            * ml_prabhakar(&PrabhakarParams::new(alpha, beta - eta, -xi, 0.0), zeta * t.powf(alpha)).unwrap();
        assert!(rel(series, closed) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn xi_one_is_two_parameter_ml(alpha in 0.2f64..2.0, beta in 0.3f64..3.0, x in -3.0f64..3.0) {
        let a = ml_prabhakar(&PrabhakarParams::new(alpha, beta, 1.0, 0.0), x);
        let b = ml_series(alpha, beta, 1.0, x);
        if let (Ok(a), Ok(b)) = (a, b) {
            if b.cancellation() < 1e4 {
                prop_assert!((a - b.value).abs() <= 1e-10 * b.value.abs().max(1e-3));
            }
        }
    }

    #[test]
    fn xi_zero_is_constant(alpha in 0.1f64..2.5, eta in 0.1f64..4.0, x in -50.0f64..50.0) {
        let v = ml_prabhakar(&PrabhakarParams::new(alpha, eta, 0.0, 0.0), x).unwrap();
        prop_assert!((v * gamma(eta) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wright_zero_one_is_exp(x in -5.0f64..5.0) {
        let v = wright(WrightParams { a: 0.0, b: 1.0 }, x).unwrap();
        prop_assert!((v - x.exp()).abs() <= 1e-10 * x.exp());
    }

    #[test]
    fn convolve_independent_of_theta(
        alpha in 0.3f64..1.0,
        xi in 0.2f64..2.5,
        beta in 0.6f64..2.0,
        t in 0.3f64..2.0,
    ) {
        // the identity must hold for every admissible kernel offset
        let p = PrabhakarParams::new(alpha, 0.0, xi, -1.0);
        for theta in [0.9, 1.7] {
            let q = prabhakar_convolve(beta, &p, theta, t).unwrap();
            let c = prabhakar_convolve_closed(beta, &p, theta, t).unwrap();
            prop_assert!(((q - c) / c).abs() < 1e-6, "theta={theta}: {q} vs {c}");
        }
    }
}

#[test]
fn laplace_identity_above_threshold() {
    use fracstoch::laplace::forward_laplace;
    for (alpha, eta, xi, zeta, p) in [(0.5, 1.0, 1.0, -2.0, 5.0), (0.9, 1.3, 0.7, 0.8, 1.5), (1.4, 2.0, 1.5, 0.5, 2.0)]
    {
        let pp = PrabhakarParams::new(alpha, eta, xi, zeta);
        let f = |t: f64| {
            let r = ml_prabhakar(&pp, zeta * t.powf(alpha)).unwrap_or(f64::NAN);
            t.powf(eta - 1.0) * r
        };
        let lhs = forward_laplace(f, p).unwrap();
        let rhs = p.powf(-eta) * (1.0 - zeta * p.powf(-alpha)).powf(-xi);
        assert!(rel(lhs, rhs) < 1e-8, "{lhs} vs {rhs}");
    }
}
