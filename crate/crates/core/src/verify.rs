//! The verification suite: eleven end-to-end checks of the special
//! functions, the transforms, the samplers and the PDE solutions against
//! each other.
//!
//! Every check is deterministic for a given [`VerifyConfig`].

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::laplace::{
    forward_laplace, invert_laplace, CatalogTransform, Field, FieldTransform, InversionConfig, InversionMethod, Part,
    PartTransform, TransformId,
};
use crate::levy::{clock_samples, LevySpec, TimeChangedLevy};
use crate::params::TimeChangeParams;
use crate::pde::{
    apply_terms_to_monomial, density_g, diffusion_wright, g_hat_by_inversion, g_hat_series, multiterm_expand,
    second_moment_delta0, Term,
};
use crate::specfun::gamma::gamma;
use crate::specfun::{
    apply_regularized_d, ml2, ml_prabhakar, prabhakar_convolve, prabhakar_convolve_closed, PrabhakarParams,
};
use crate::stats::{ks_two_sample, par_paths, McEstimate};
use crate::stoch::{sample_inverse_e, sample_inverse_e_composed, FrakV, Role, StreamFactory};

/// Sample sizes and grid step for the Monte Carlo checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Paths for the moment and Laplace-functional checks.
    pub n_moment: usize,
    /// Sample size per side for the Kolmogorov–Smirnov checks.
    pub n_ks: usize,
    /// First-passage grid step.
    pub resolution: f64,
}

impl VerifyConfig {
    /// Sample sizes of the reference runs.
    pub fn full(seed: u64) -> Self {
        VerifyConfig { seed, n_moment: 100_000, n_ks: 10_000, resolution: 1e-3 }
    }

    /// Smaller samples for smoke runs; the statistical tolerances scale
    /// with the sample size, so the checks stay meaningful.
    pub fn fast(seed: u64) -> Self {
        VerifyConfig { seed, n_moment: 10_000, n_ks: 2_000, resolution: 2e-3 }
    }
}

/// One comparison inside a criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub reference: f64,
    /// The quantity compared against `tolerance`: a relative or absolute
    /// error, or a p-value for the KS checks.
    pub metric: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn relative(label: String, value: f64, reference: f64, tol: f64) -> Self {
        let metric = ((value - reference) / reference).abs();
        Check { label, value, reference, metric, tolerance: tol, passed: metric < tol }
    }

    fn absolute(label: String, value: f64, reference: f64, tol: f64) -> Self {
        let metric = (value - reference).abs();
        Check { label, value, reference, metric, tolerance: tol, passed: metric < tol }
    }

    /// Mean within `max(3 stderr, floor)` of the reference.
    fn monte_carlo(label: String, est: &McEstimate, reference: f64, floor: f64) -> Self {
        let tol = (3.0 * est.stderr).max(floor);
        let metric = (est.mean - reference).abs();
        Check { label, value: est.mean, reference, metric, tolerance: tol, passed: metric <= tol }
    }

    /// Passes when the KS p-value exceeds 1%.
    fn ks(label: String, statistic: f64, p_value: f64) -> Self {
        Check { label, value: statistic, reference: 0.0, metric: p_value, tolerance: 0.01, passed: p_value > 0.01 }
    }

    fn exact(label: String, value: f64, reference: f64) -> Self {
        Check { label, value, reference, metric: (value - reference).abs(), tolerance: 0.0, passed: value == reference }
    }

    fn failed(label: String, err: impl std::fmt::Display) -> Self {
        Check {
            label: format!("{label}: {err}"),
            value: f64::NAN,
            reference: f64::NAN,
            metric: f64::NAN,
            tolerance: f64::NAN,
            passed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// `PASS`/`FAIL` line with the worst check.
    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let failing = self.checks.iter().filter(|c| !c.passed).count();
        format!("[{status}] {:>2}. {} ({} checks, {failing} failing)", self.id, self.title, self.checks.len())
    }
}

pub const CRITERIA: [&str; 11] = [
    "Laplace transform of the Prabhakar kernel",
    "Convolution of a power with the Prabhakar kernel",
    "Laplace functional of the subordinator",
    "Duality between the subordinator and its inverse",
    "Subordination identity for the inverse process",
    "Inverse stable reduction at delta = 0",
    "Characteristic function of the time-changed Levy process",
    "Second moment of time-changed Brownian motion",
    "Consistency of the PDE solutions",
    "Multi-term expansion for integer delta",
    "Laplace inversion on known pairs",
];

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize, cfg: &VerifyConfig) -> CriterionResult {
    let checks = match id {
        1 => laplace_kernel(),
        2 => convolution(),
        3 => subordinator_functional(cfg),
        4 => duality(cfg),
        5 => subordination(cfg),
        6 => inverse_stable(cfg),
        7 => characteristic_function(cfg),
        8 => second_moment(cfg),
        9 => pde_consistency(),
        10 => multiterm(),
        11 => known_pairs(),
        _ => vec![Check::failed(format!("criterion {id}"), "no such criterion")],
    };
    let title = CRITERIA.get(id.wrapping_sub(1)).copied().unwrap_or("unknown");
    CriterionResult { id, title, checks }
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(|i| run_criterion(i, cfg)).collect()
}

fn collect(label: String, r: Result<Check>) -> Check {
    r.unwrap_or_else(|e| Check::failed(label, e))
}

fn laplace_kernel() -> Vec<Check> {
    let p = 2.0;
    let mut out = Vec::new();
    for alpha in [0.4, 0.7, 1.0] {
        for eta in [0.8, 1.5] {
            for xi in [0.5, 2.0] {
                let label = format!("alpha={alpha} eta={eta} xi={xi} zeta=-1 p={p}");
                let k = PrabhakarParams::new(alpha, eta, xi, -1.0);
                let r = (|| {
                    let value = forward_laplace(
                        |t| t.powf(eta - 1.0) * ml_prabhakar(&k, -t.powf(alpha)).unwrap_or(f64::NAN),
                        p,
                    )?;
                    let exact = p.powf(-eta) * (1.0 + p.powf(-alpha)).powf(-xi);
                    Ok(Check::relative(label.clone(), value, exact, 1e-8))
                })();
                out.push(collect(label, r));
            }
        }
    }
    out
}

fn convolution() -> Vec<Check> {
    // (β, α, ξ, ζ, t) with two values of θ each
    let points = [
        (1.5, 0.7, 2.0, -1.0, 1.0),
        (1.0, 0.5, 0.5, -2.0, 0.8),
        (0.6, 0.9, 1.3, -0.5, 1.5),
        (2.2, 0.3, 0.0, -1.0, 2.0),
        (0.8, 1.2, 3.0, 0.7, 0.6),
    ];
    let mut out = Vec::new();
    for (beta, alpha, xi, zeta, t) in points {
        for theta in [0.9, 1.7] {
            let label = format!("beta={beta} alpha={alpha} xi={xi} zeta={zeta} theta={theta} t={t}");
            let p = PrabhakarParams::new(alpha, theta, xi, zeta);
            let r = (|| {
                let v = prabhakar_convolve(beta, &p, theta, t)?;
                let c = prabhakar_convolve_closed(beta, &p, theta, t)?;
                Ok(Check::relative(label.clone(), v, c, 1e-6))
            })();
            out.push(collect(label, r));
        }
    }
    out
}

fn subordinator_functional(cfg: &VerifyConfig) -> Vec<Check> {
    let sets = [(0.5, 0.2, 1.0), (0.4, 0.1, 2.0), (0.45, 0.2, 1.5)];
    let mut out = Vec::new();
    for (k, (g, nu, d)) in sets.into_iter().enumerate() {
        let tc = TimeChangeParams::new(g, nu, d);
        let v = match FrakV::new(&tc) {
            Ok(v) => v,
            Err(e) => {
                out.push(Check::failed(format!("gamma={g} nu={nu} delta={d}"), e));
                continue;
            }
        };
        let f = StreamFactory::new(cfg.seed.wrapping_add(k as u64));
        let samples = par_paths(cfg.n_moment, |i| v.increment(1.0, &mut f.stream(i, Role::Clock)));
        for z in [0.5, 1.0, 2.0] {
            let vals: Vec<f64> = samples.iter().map(|x| (-z * x).exp()).collect();
            let est = McEstimate::from_samples(&vals);
            let exact = (-(z as f64).powf(g + nu) * (1.0 + (z as f64).powf(-nu)).powf(d)).exp();
            out.push(Check::monte_carlo(format!("gamma={g} nu={nu} delta={d} z={z}"), &est, exact, 0.0));
        }
    }
    out
}

fn duality(cfg: &VerifyConfig) -> Vec<Check> {
    let tc = TimeChangeParams::new(0.5, 0.2, 1.0);
    let v = match FrakV::new(&tc) {
        Ok(v) => v,
        Err(e) => return vec![Check::failed("setup".into(), e)],
    };
    let f = StreamFactory::new(cfg.seed);
    let mut out = Vec::new();
    for (k, (x, t)) in [(0.3, 0.5), (0.5, 1.0), (1.0, 1.0), (1.5, 2.0)].into_iter().enumerate() {
        let label = format!("x={x} t={t}");
        let base = (k * cfg.n_ks) as u64;
        let inverse: Result<Vec<f64>> = par_paths(cfg.n_ks, |i| {
            let e = sample_inverse_e(&tc, t, cfg.resolution, &mut f.stream(base + i, Role::Clock))?;
            Ok(if e.value > x { 1.0 } else { 0.0 })
        })
        .into_iter()
        .collect();
        let inverse = match inverse {
            Ok(s) => s,
            Err(e) => {
                out.push(Check::failed(label, e));
                continue;
            }
        };
        let forward: Vec<f64> = par_paths(cfg.n_ks, |i| {
            if v.increment(x, &mut f.stream(base + i, Role::Aux)) < t {
                1.0
            } else {
                0.0
            }
        });
        let ks = ks_two_sample(&inverse, &forward);
        let pa = inverse.iter().sum::<f64>() / inverse.len() as f64;
        let pb = forward.iter().sum::<f64>() / forward.len() as f64;
        out.push(Check::ks(format!("{label} P(E_t>x)={pa:.4} P(V_x<t)={pb:.4}"), ks.statistic, ks.p_value));
    }
    out
}

fn subordination(cfg: &VerifyConfig) -> Vec<Check> {
    let t = 1.0;
    let f = StreamFactory::new(cfg.seed);
    let mut out = Vec::new();
    for (k, d) in [0.7, 1.6].into_iter().enumerate() {
        let tc = TimeChangeParams::new(0.4, 0.2, d);
        let label = format!("gamma=0.4 nu=0.2 delta={d} t={t}");
        let base = (k * cfg.n_ks) as u64;
        let r = (|| {
            let direct: Vec<f64> = par_paths(cfg.n_ks, |i| {
                sample_inverse_e(&tc, t, cfg.resolution, &mut f.stream(base + i, Role::Clock)).map(|e| e.value)
            })
            .into_iter()
            .collect::<Result<_>>()?;
            let composed: Vec<f64> = par_paths(cfg.n_ks, |i| {
                sample_inverse_e_composed(&tc, t, cfg.resolution, &mut f.stream(base + i, Role::Aux))
            })
            .into_iter()
            .collect::<Result<_>>()?;
            let ks = ks_two_sample(&direct, &composed);
            Ok(Check::ks(label.clone(), ks.statistic, ks.p_value))
        })();
        out.push(collect(label, r));
    }
    out
}

fn inverse_stable(cfg: &VerifyConfig) -> Vec<Check> {
    let tc = TimeChangeParams::new(0.4, 0.3, 0.0);
    let t = 1.0;
    let f = StreamFactory::new(cfg.seed);
    let draws: Result<Vec<f64>> = par_paths(cfg.n_moment, |i| {
        sample_inverse_e(&tc, t, cfg.resolution, &mut f.stream(i, Role::Clock)).map(|e| e.value)
    })
    .into_iter()
    .collect();
    let draws = match draws {
        Ok(d) => d,
        Err(e) => return vec![Check::failed("sampling".into(), e)],
    };
    let mu = tc.mu();
    [0.5, 1.0, 2.0]
        .into_iter()
        .map(|z| {
            let label = format!("gamma=0.4 nu=0.3 t={t} z={z}");
            let est = McEstimate::from_samples(&draws.iter().map(|e| (-z * e).exp()).collect::<Vec<_>>());
            collect(label.clone(), ml2(mu, 1.0, -z * t.powf(mu)).map(|r| Check::monte_carlo(label, &est, r, 0.0)))
        })
        .collect()
}

fn characteristic_function(cfg: &VerifyConfig) -> Vec<Check> {
    let tc = TimeChangeParams::new(0.5, 0.2, 1.0);
    let t = 1.0;
    let clocks = match clock_samples(&tc, t, cfg.resolution, cfg.n_moment, cfg.seed) {
        Ok(c) => c,
        Err(e) => return vec![Check::failed("clock".into(), e)],
    };
    let specs = [("brownian a=0 c=1", LevySpec::brownian(1.0)), ("poisson rate=2", LevySpec::Poisson { rate: 2.0 })];
    let mut out = Vec::new();
    for (name, spec) in specs {
        let label = name.to_string();
        let pts = TimeChangedLevy::new(spec.clone(), tc, vec![0.0], cfg.resolution)
            .and_then(|p| p.samples_from_clock(&clocks, cfg.seed));
        let pts = match pts {
            Ok(p) => p,
            Err(e) => {
                out.push(Check::failed(label, e));
                continue;
            }
        };
        for xi in [0.5, 1.0] {
            let psi = spec.psi(&[xi]);
            for part in [Part::Re, Part::Im] {
                let label = format!("{name} xi={xi} {part:?}");
                let vals: Vec<f64> = pts
                    .iter()
                    .map(|p| match part {
                        Part::Re => (xi * p[0]).cos(),
                        Part::Im => (xi * p[0]).sin(),
                    })
                    .collect();
                let est = McEstimate::from_samples(&vals);
                let r = CatalogTransform::new(TransformId::GFourierLaplace, tc, psi)
                    .and_then(|f| invert_laplace(&PartTransform::new(f, part), t, &InversionConfig::default()))
                    .map(|inv| Check::monte_carlo(label.clone(), &est, inv.value, 2e-3));
                out.push(collect(label, r));
            }
        }
    }
    out
}

fn second_moment(cfg: &VerifyConfig) -> Vec<Check> {
    let tc = TimeChangeParams::new(0.4, 0.3, 0.0).with_c(1.0);
    let t = 1.0;
    let label = format!("gamma=0.4 nu=0.3 c=1 t={t}");
    let r = (|| {
        let p = TimeChangedLevy::new(LevySpec::brownian(tc.c), tc, vec![0.0], cfg.resolution)?;
        let est = p.expectation(|x| x[0] * x[0], t, cfg.n_moment, cfg.seed)?;
        Ok(Check::monte_carlo(label.clone(), &est, second_moment_delta0(&tc, t)?, 0.0))
    })();
    vec![collect(label, r)]
}

fn pde_consistency() -> Vec<Check> {
    let mut out = Vec::new();
    let tc = TimeChangeParams::new(0.4, 0.4, 1.0);
    let cfg = InversionConfig::default();
    for (beta, t) in [(1.0, 0.5), (0.5, 1.0), (1.0, 1.0), (2.0, 0.3), (0.7, 2.0), (1.5, 0.8)] {
        let label = format!("fourier series beta={beta} t={t}");
        let r = (|| {
            let s = g_hat_series(&tc, beta, t)?;
            let i = g_hat_by_inversion(&tc, beta, t, &cfg)?;
            Ok(Check::relative(label.clone(), s, i.value, 1e-5))
        })();
        out.push(collect(label, r));
    }
    let heat = TimeChangeParams::new(0.6, 0.4, 0.0);
    for x in [0.0, 0.5, 1.0, 2.0, -1.5] {
        let t: f64 = 1.0;
        let label = format!("heat kernel x={x} t={t}");
        let gauss = (-x * x / (4.0 * t)).exp() / (4.0 * PI * t).sqrt();
        let r = density_g(&heat, x, t, &cfg).map(|d| Check::absolute(label.clone(), d.raw, gauss, 1e-6));
        out.push(collect(label, r));
    }
    for k in 0..10 {
        let x = -3.0 + 6.0 * k as f64 / 9.0;
        let label = format!("wright alpha=1 x={x:.4}");
        let gauss = (-x * x / 4.0).exp() / (2.0 * PI.sqrt());
        let r = diffusion_wright(1.0, 1.0, x, 1.0).map(|v| Check::relative(label.clone(), v, gauss, 1e-10));
        out.push(collect(label, r));
    }
    out
}

/// `Γ(k+1) s^{-k-1}`, the transform of `t^k`.
struct Monomial(f64);

impl FieldTransform for Monomial {
    fn at<T: Field>(&self, s: T) -> T {
        T::from_f64(gamma(self.0 + 1.0)) * s.powf(-self.0 - 1.0)
    }
}

fn multiterm() -> Vec<Check> {
    let mut out = Vec::new();
    let (g, nu, lambda) = (0.5, 0.2, 1.3);
    let displays: [(usize, Vec<(f64, f64)>); 3] = [
        (0, vec![(1.0, g + nu)]),
        (1, vec![(1.0, g + nu), (lambda, g)]),
        (2, vec![(1.0, g + nu), (2.0 * lambda, g), (lambda * lambda, g - nu)]),
    ];
    for (n, expect) in displays {
        match multiterm_expand(n, lambda, g, nu) {
            Ok(terms) => {
                if terms.len() != expect.len() {
                    out.push(Check::failed(format!("n={n}"), "wrong number of terms"));
                    continue;
                }
                for (r, (term, (c, o))) in terms.iter().zip(expect).enumerate() {
                    out.push(Check::exact(format!("n={n} r={r} coefficient"), term.coefficient, c));
                    out.push(Check::exact(format!("n={n} r={r} order"), term.order, o));
                }
            }
            Err(e) => out.push(Check::failed(format!("n={n}"), e)),
        }
    }
    let cfg = InversionConfig::default();
    for (n, lam) in [(1usize, 1.0), (2, 0.5), (2, 1.0)] {
        for k in [1.0, 2.0] {
            for t in [0.5, 1.0, 2.0] {
                let label = format!("n={n} lambda={lam} f=t^{k} t={t}");
                let r = (|| {
                    let terms: Vec<Term> = multiterm_expand(n, lam, g, nu)?;
                    let expanded = apply_terms_to_monomial(&terms, k, t);
                    let p = PrabhakarParams::new(nu, g + nu, n as f64, -lam);
                    let direct = apply_regularized_d(&Monomial(k), 0.0, &p, t, &cfg)?;
                    Ok(Check::relative(label.clone(), direct.value, expanded, 1e-6))
                })();
                out.push(collect(label, r));
            }
        }
    }
    out
}

/// Transforms with elementary inverses.
#[derive(Debug, Clone, Copy)]
enum Pair {
    One,
    Ramp,
    Decay,
    Sine,
    InvSqrt,
}

impl Pair {
    fn name(self) -> &'static str {
        match self {
            Pair::One => "1/s",
            Pair::Ramp => "1/s^2",
            Pair::Decay => "1/(s+1)",
            Pair::Sine => "1/(s^2+1)",
            Pair::InvSqrt => "s^(-1/2)",
        }
    }

    fn exact(self, t: f64) -> f64 {
        match self {
            Pair::One => 1.0,
            Pair::Ramp => t,
            Pair::Decay => (-t).exp(),
            Pair::Sine => t.sin(),
            Pair::InvSqrt => 1.0 / (PI * t).sqrt(),
        }
    }
}

impl FieldTransform for Pair {
    fn at<T: Field>(&self, s: T) -> T {
        let one = T::from_f64(1.0);
        match self {
            Pair::One => one / s,
            Pair::Ramp => one / (s * s),
            Pair::Decay => one / (s + one),
            Pair::Sine => one / (s * s + one),
            Pair::InvSqrt => s.powf(-0.5),
        }
    }
}

fn known_pairs() -> Vec<Check> {
    let mut out = Vec::new();
    for pair in [Pair::One, Pair::Ramp, Pair::Decay, Pair::Sine, Pair::InvSqrt] {
        for method in [InversionMethod::GaverStehfest, InversionMethod::FixedTalbot] {
            for t in [0.5, 1.0, 2.0] {
                let label = format!("{} {} t={t}", pair.name(), method.name());
                let cfg = InversionConfig::with_method(method).unchecked();
                let r = invert_laplace(&pair, t, &cfg)
                    .map(|inv| Check::relative(label.clone(), inv.value, pair.exact(t), 1e-6));
                out.push(collect(label, r));
            }
        }
    }
    out
}
