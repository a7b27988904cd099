//! Lévy processes from a small catalog, their time-changed versions
//! `Ξ_{𝔈_t}`, Monte Carlo functionals and an Euler scheme for the
//! time-changed SDE.
//!
//! Symbols follow the convention `E e^{i⟨ξ, Ξ_t⟩} = e^{-tΨ(ξ)}`. Brownian
//! motion uses `Q = 2c I`, so its generator is `c Δ`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::params::TimeChangeParams;
use crate::stats::{par_paths, McEstimate};
use crate::stoch::{
    ensure_independent, sample_inverse_e, sample_inverse_stable_exact, FirstPassage, PositiveStable, RngStream,
    Role, SamplePath, StreamFactory,
};

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

/// Catalog of Lévy processes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LevySpec {
    /// `Ψ(ξ) = i⟨a, ξ⟩ + c|ξ|²`: Brownian motion with covariance `2c t I`
    /// and drift `-a`.
    BrownianDrift { drift: Vec<f64>, c: f64 },
    /// `Ψ(ξ) = scale |ξ|^{2α}`, generator `-scale (-Δ)^α`.
    IsotropicStable {
        alpha: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default = "one_usize")]
        dim: usize,
    },
    /// `Ψ(ξ) = λ(1 - e^{iξ})` on the non-negative integers.
    Poisson { rate: f64 },
    /// `Ψ(ξ) = λ(1 + iξ - e^{iξ})`.
    CompensatedPoisson { rate: f64 },
}

impl LevySpec {
    /// One-dimensional Brownian motion with `Var X_t = 2ct`.
    pub fn brownian(c: f64) -> Self {
        LevySpec::BrownianDrift { drift: vec![0.0], c }
    }

    pub fn dim(&self) -> usize {
        match self {
            LevySpec::BrownianDrift { drift, .. } => drift.len(),
            LevySpec::IsotropicStable { dim, .. } => *dim,
            LevySpec::Poisson { .. } | LevySpec::CompensatedPoisson { .. } => 1,
        }
    }

    pub fn is_counting(&self) -> bool {
        matches!(self, LevySpec::Poisson { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LevySpec::BrownianDrift { drift, c } => {
                if drift.is_empty() {
                    return invalid("drift vector must have at least one component");
                }
                if drift.iter().any(|a| !a.is_finite()) {
                    return invalid("drift must be finite");
                }
                if !(*c > 0.0 && c.is_finite()) {
                    return invalid(format!("diffusivity c must be positive, got {c}"));
                }
            }
            LevySpec::IsotropicStable { alpha, scale, dim } => {
                if !(*alpha > 0.0 && *alpha <= 1.0) {
                    return invalid(format!("stable index must lie in (0, 1], got {alpha}"));
                }
                if !(*scale > 0.0 && scale.is_finite()) {
                    return invalid(format!("scale must be positive, got {scale}"));
                }
                if *dim == 0 {
                    return invalid("dimension must be positive");
                }
            }
            LevySpec::Poisson { rate } | LevySpec::CompensatedPoisson { rate } => {
                if !(*rate > 0.0 && rate.is_finite()) {
                    return invalid(format!("rate must be positive, got {rate}"));
                }
            }
        }
        Ok(())
    }

    /// The symbol `Ψ(ξ)`. Frequencies beyond `dim` are ignored and missing
    /// ones count as zero.
    pub fn psi(&self, xi: &[f64]) -> Complex64 {
        let norm2 = |n: usize| xi.iter().take(n).map(|x| x * x).sum::<f64>();
        let x0 = xi.first().copied().unwrap_or(0.0);
        match self {
            LevySpec::BrownianDrift { drift, c } => {
                let dot: f64 = drift.iter().zip(xi).map(|(a, x)| a * x).sum();
                Complex64::new(c * norm2(drift.len()), dot)
            }
            LevySpec::IsotropicStable { alpha, scale, dim } => {
                Complex64::new(scale * norm2(*dim).powf(*alpha), 0.0)
            }
            LevySpec::Poisson { rate } => *rate * (1.0 - Complex64::new(0.0, x0).exp()),
            LevySpec::CompensatedPoisson { rate } => {
                *rate * (Complex64::new(1.0, x0) - Complex64::new(0.0, x0).exp())
            }
        }
    }

    /// Exact sample of the increment `Ξ_{s+dt} - Ξ_s`, written into `out`.
    fn increment_into(&self, dt: f64, rng: &mut RngStream, out: &mut [f64]) {
        match self {
            LevySpec::BrownianDrift { drift, c } => {
                let sd = (2.0 * c * dt).sqrt();
                for (o, a) in out.iter_mut().zip(drift) {
                    let z: f64 = rng.sample(StandardNormal);
                    *o = -a * dt + sd * z;
                }
            }
            LevySpec::IsotropicStable { alpha, scale, .. } => {
                // Brownian motion run at an independent α-stable time.
                let clock = if *alpha == 1.0 {
                    scale * dt
                } else {
                    PositiveStable::new(*alpha).expect("validated").increment(scale * dt, rng)
                };
                let sd = (2.0 * clock).sqrt();
                for o in out.iter_mut() {
                    let z: f64 = rng.sample(StandardNormal);
                    *o = sd * z;
                }
            }
            LevySpec::Poisson { rate } => out[0] = poisson(rate * dt, rng),
            LevySpec::CompensatedPoisson { rate } => out[0] = poisson(rate * dt, rng) - rate * dt,
        }
    }

    /// Exact sample of `Ξ_t` started at 0.
    pub fn sample_at(&self, t: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
        self.validate()?;
        if !(t >= 0.0 && t.is_finite()) {
            return invalid(format!("time must be non-negative, got {t}"));
        }
        let mut out = vec![0.0; self.dim()];
        if t > 0.0 {
            self.increment_into(t, rng, &mut out);
        }
        Ok(out)
    }
}

fn poisson(mean: f64, rng: &mut RngStream) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    Poisson::new(mean).expect("positive finite mean").sample(rng)
}

/// `Ψ(ξ)` for a catalog entry.
pub fn psi_symbol(spec: &LevySpec, xi: &[f64]) -> Complex64 {
    spec.psi(xi)
}

/// A Lévy path on a time grid; `points[k]` is the position at `times[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevyPath {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

impl LevyPath {
    /// Coordinate `i` as a scalar path.
    pub fn component(&self, i: usize) -> SamplePath {
        let values: Vec<f64> = self.points.iter().map(|p| p[i]).collect();
        let monotone = values.windows(2).all(|w| w[1] >= w[0]);
        SamplePath { times: self.times.clone(), values, monotone }
    }
}

/// Samples the path on `grid`, which must start at 0 and increase.
pub fn sample_levy_path(spec: &LevySpec, grid: &[f64], rng: &mut RngStream) -> Result<LevyPath> {
    spec.validate()?;
    crate::stoch::check_grid(grid)?;
    let d = spec.dim();
    let mut points = Vec::with_capacity(grid.len());
    let mut cur = vec![0.0; d];
    let mut inc = vec![0.0; d];
    points.push(cur.clone());
    for w in grid.windows(2) {
        spec.increment_into(w[1] - w[0], rng, &mut inc);
        for (c, i) in cur.iter_mut().zip(&inc) {
            *c += i;
        }
        points.push(cur.clone());
    }
    Ok(LevyPath { times: grid.to_vec(), points })
}

/// A lattice function and the generator applied to it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSample {
    pub values: Vec<f64>,
    pub applied: Vec<f64>,
}

/// Generator of the Poisson process on `{0, 1, ...}`:
/// `(𝒜f)(x) = λ(f(x) - f(x-1))` with `f(-1) = 0`.
pub fn lattice_generator(spec: &LevySpec, values: &[f64]) -> Result<GeneratorSample> {
    spec.validate()?;
    let LevySpec::Poisson { rate } = spec else {
        return invalid("lattice generator is defined for the Poisson process only");
    };
    let applied = values
        .iter()
        .enumerate()
        .map(|(x, f)| rate * (f - if x == 0 { 0.0 } else { values[x - 1] }))
        .collect();
    Ok(GeneratorSample { values: values.to_vec(), applied })
}

/// Draws the time change. At δ = 0 the clock is the inverse
/// (γ+ν)-stable subordinator, which is sampled exactly.
pub fn sample_clock(tc: &TimeChangeParams, t: f64, resolution: f64, rng: &mut RngStream) -> Result<FirstPassage> {
    if tc.delta == 0.0 {
        tc.check_simulation()?;
        let v = sample_inverse_stable_exact(tc.mu(), t, rng)?;
        return Ok(FirstPassage { value: v, lower: v, upper: v });
    }
    sample_inverse_e(tc, t, resolution, rng)
}

/// One draw of `x0 + Ξ_{𝔈_t}` with its clock value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeChangedSample {
    pub point: Vec<f64>,
    pub clock: FirstPassage,
}

/// Samples `Ξ^{x0}_{𝔈_t}`: the clock from `clock`, then the Lévy process at
/// exactly that time from `levy`. The two streams must differ.
pub fn sample_time_changed(
    spec: &LevySpec,
    tc: &TimeChangeParams,
    x0: &[f64],
    t: f64,
    resolution: f64,
    clock: &mut RngStream,
    levy: &mut RngStream,
) -> Result<TimeChangedSample> {
    ensure_independent(clock, levy)?;
    spec.validate()?;
    check_start(spec, x0)?;
    let e = sample_clock(tc, t, resolution, clock)?;
    let mut point = spec.sample_at(e.value, levy)?;
    for (p, x) in point.iter_mut().zip(x0) {
        *p += x;
    }
    Ok(TimeChangedSample { point, clock: e })
}

fn check_start(spec: &LevySpec, x0: &[f64]) -> Result<()> {
    if x0.len() != spec.dim() {
        return invalid(format!("start point has dimension {}, process has {}", x0.len(), spec.dim()));
    }
    Ok(())
}

/// A time-changed Lévy process set up for Monte Carlo: path `i` uses the
/// streams `(seed, i, Clock)` and `(seed, i, Levy)`.
#[derive(Debug, Clone)]
pub struct TimeChangedLevy {
    pub spec: LevySpec,
    pub tc: TimeChangeParams,
    pub x0: Vec<f64>,
    pub resolution: f64,
}

impl TimeChangedLevy {
    pub fn new(spec: LevySpec, tc: TimeChangeParams, x0: Vec<f64>, resolution: f64) -> Result<Self> {
        spec.validate()?;
        check_start(&spec, &x0)?;
        tc.check_simulation()?;
        if !(resolution > 0.0 && resolution.is_finite()) {
            return invalid(format!("resolution must be positive, got {resolution}"));
        }
        Ok(TimeChangedLevy { spec, tc, x0, resolution })
    }

    /// `n` samples of the endpoint at time `t`, in path order.
    pub fn samples(&self, t: f64, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
        let clocks = clock_samples(&self.tc, t, self.resolution, n, seed)?;
        self.samples_from_clock(&clocks, seed)
    }

    /// Endpoints for given clock values; path `i` draws from the Lévy stream
    /// `(seed, i)`. Lets several processes share one set of clock draws.
    pub fn samples_from_clock(&self, clocks: &[f64], seed: u64) -> Result<Vec<Vec<f64>>> {
        let f = StreamFactory::new(seed);
        par_paths(clocks.len(), |i| {
            let mut rng = f.stream(i, Role::Levy);
            let mut p = self.spec.sample_at(clocks[i as usize], &mut rng)?;
            for (v, x) in p.iter_mut().zip(&self.x0) {
                *v += x;
            }
            Ok(p)
        })
        .into_iter()
        .collect()
    }

    /// Monte Carlo estimate of `E f(Ξ^{x0}_{𝔈_t})`.
    pub fn expectation<F>(&self, f: F, t: f64, n: usize, seed: u64) -> Result<McEstimate>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let pts = self.samples(t, n, seed)?;
        let vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
        Ok(McEstimate::from_samples(&vals))
    }

    /// Several payoffs on common random numbers.
    pub fn expectations(&self, fs: &[&(dyn Fn(&[f64]) -> f64 + Sync)], t: f64, n: usize, seed: u64) -> Result<Vec<McEstimate>> {
        let pts = self.samples(t, n, seed)?;
        Ok(fs
            .iter()
            .map(|f| McEstimate::from_samples(&pts.iter().map(|p| f(p)).collect::<Vec<_>>()))
            .collect())
    }
}

/// `n` clock draws `𝔈_t`, path `i` from the stream `(seed, i, Clock)`.
pub fn clock_samples(tc: &TimeChangeParams, t: f64, resolution: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    tc.check_simulation()?;
    let f = StreamFactory::new(seed);
    par_paths(n, |i| sample_clock(tc, t, resolution, &mut f.stream(i, Role::Clock)).map(|e| e.value))
        .into_iter()
        .collect()
}

/// Monte Carlo estimate of `E f(Ξ^{x0}_{𝔈_t})` over `n_paths` paths.
#[allow(clippy::too_many_arguments)]
pub fn mc_expectation<F>(
    f: F,
    spec: &LevySpec,
    tc: &TimeChangeParams,
    x0: &[f64],
    t: f64,
    n_paths: usize,
    seed: u64,
    resolution: f64,
) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    TimeChangedLevy::new(spec.clone(), *tc, x0.to_vec(), resolution)?.expectation(f, t, n_paths, seed)
}

/// Compound-Poisson jumps of fixed size; with `compensated` the mean jump
/// drift `rate * size` is subtracted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSpec {
    pub rate: f64,
    pub size: f64,
    #[serde(default)]
    pub compensated: bool,
}

/// Coefficients of `dY = b(s, Y) ds + σ(s, Y) dW + jumps`.
pub struct SdeCoeffs<B, S> {
    pub drift: B,
    pub diffusion: S,
    pub jumps: Option<JumpSpec>,
}

/// Step controls for [`euler_time_changed_sde`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerConfig {
    /// Inner step; defaults to `max(E/1000, 1e-6)`.
    pub h: Option<f64>,
    /// Grid step for the clock.
    pub resolution: f64,
    pub max_steps: usize,
}

impl Default for EulerConfig {
    fn default() -> Self {
        EulerConfig { h: None, resolution: 1e-3, max_steps: 10_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerOutcome {
    pub value: f64,
    /// The drawn clock value `E`.
    pub clock: f64,
    pub steps: usize,
    /// Step actually used, after refinement.
    pub h: f64,
}

/// Time-changed SDE `X_t = Y_{𝔈_t}`: draws `E = 𝔈_t`, then runs
/// Euler–Maruyama for `Y` on `[0, E]`. A step above `E/10` is refined to
/// `E/10`; the last step is shortened to land on `E`.
pub fn euler_time_changed_sde<B, S>(
    coeffs: &SdeCoeffs<B, S>,
    tc: &TimeChangeParams,
    x0: f64,
    t: f64,
    cfg: &EulerConfig,
    clock: &mut RngStream,
    path: &mut RngStream,
) -> Result<EulerOutcome>
where
    B: Fn(f64, f64) -> f64,
    S: Fn(f64, f64) -> f64,
{
    ensure_independent(clock, path)?;
    if let Some(j) = coeffs.jumps {
        if !(j.rate >= 0.0 && j.rate.is_finite() && j.size.is_finite()) {
            return invalid("jump rate must be non-negative and jump size finite");
        }
    }
    if let Some(h) = cfg.h {
        if !(h > 0.0 && h.is_finite()) {
            return invalid(format!("step h must be positive, got {h}"));
        }
    }
    let e = sample_clock(tc, t, cfg.resolution, clock)?.value;
    if e == 0.0 {
        return Ok(EulerOutcome { value: x0, clock: e, steps: 0, h: 0.0 });
    }
    let h = cfg.h.unwrap_or((e / 1000.0).max(1e-6)).min(e / 10.0);
    // the tolerance keeps a rounding excess in e/h from adding an empty step
    let steps = (e / h * (1.0 - 1e-12)).ceil().max(1.0);
    if steps > cfg.max_steps as f64 {
        return Err(Error::StepTooLarge(format!(
            "{steps} steps of {h} to reach {e} exceed the cap {}",
            cfg.max_steps
        )));
    }
    let steps = steps as usize;
    let mut y = x0;
    let mut s = 0.0;
    for k in 0..steps {
        let next = if k + 1 == steps { e } else { (k + 1) as f64 * h };
        let dt = next - s;
        let mut dy = (coeffs.drift)(s, y) * dt;
        let sigma = (coeffs.diffusion)(s, y);
        if sigma != 0.0 {
            let z: f64 = path.sample(StandardNormal);
            dy += sigma * dt.sqrt() * z;
        }
        if let Some(j) = coeffs.jumps {
            dy += j.size * poisson(j.rate * dt, path);
            if j.compensated {
                dy -= j.rate * j.size * dt;
            }
        }
        y += dy;
        s = next;
    }
    Ok(EulerOutcome { value: y, clock: e, steps, h })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn streams(path: u64) -> (RngStream, RngStream) {
        let f = StreamFactory::new(11);
        (f.stream(path, Role::Clock), f.stream(path, Role::Levy))
    }

    #[test]
    fn symbols() {
        let p = LevySpec::Poisson { rate: 1.0 };
        let v = p.psi(&[std::f64::consts::PI]);
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(LevySpec::brownian(1.0).psi(&[2.0]), Complex64::new(4.0, 0.0));
        let s = LevySpec::IsotropicStable { alpha: 0.75, scale: 1.0, dim: 1 };
        assert_eq!(s.psi(&[1.0]), Complex64::new(1.0, 0.0));
        let specs = [
            LevySpec::BrownianDrift { drift: vec![0.3, -1.0], c: 2.0 },
            s,
            p,
            LevySpec::CompensatedPoisson { rate: 2.0 },
        ];
        for spec in &specs {
            assert_eq!(spec.psi(&[0.0, 0.0]), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn validation() {
        assert!(LevySpec::Poisson { rate: 0.0 }.validate().is_err());
        assert!(LevySpec::IsotropicStable { alpha: 1.2, scale: 1.0, dim: 1 }.validate().is_err());
        assert!(LevySpec::BrownianDrift { drift: vec![], c: 1.0 }.validate().is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let s: LevySpec = serde_json::from_str(r#"{"kind":"isotropic_stable","alpha":0.5}"#).unwrap();
        assert_eq!(s, LevySpec::IsotropicStable { alpha: 0.5, scale: 1.0, dim: 1 });
        assert!(serde_json::from_str::<LevySpec>(r#"{"kind":"poisson","rate":1,"x":2}"#).is_err());
    }

    #[test]
    fn poisson_paths_are_integer_and_monotone() {
        let (_, mut rng) = streams(0);
        let grid: Vec<f64> = (0..=50).map(|k| k as f64 * 0.1).collect();
        let p = sample_levy_path(&LevySpec::Poisson { rate: 3.0 }, &grid, &mut rng).unwrap();
        let c = p.component(0);
        assert!(c.monotone);
        assert!(c.values.iter().all(|v| v.fract() == 0.0));
    }

    #[test]
    fn poisson_generator_on_lattice() {
        let g = lattice_generator(&LevySpec::Poisson { rate: 2.0 }, &[1.0, 3.0, 0.5]).unwrap();
        assert_eq!(g.applied, vec![2.0, 4.0, -5.0]);
        assert!(lattice_generator(&LevySpec::brownian(1.0), &[1.0]).is_err());
    }

    #[test]
    fn shared_stream_is_rejected() {
        let tc = TimeChangeParams::new(0.5, 0.2, 1.0);
        let f = StreamFactory::new(3);
        let mut a = f.stream(0, Role::Clock);
        let mut b = f.stream(0, Role::Clock);
        let r = sample_time_changed(&LevySpec::brownian(1.0), &tc, &[0.0], 1.0, 1e-3, &mut a, &mut b);
        assert!(matches!(r, Err(Error::StreamReuse(_))));
    }

    #[test]
    fn euler_deterministic_flows() {
        let tc = TimeChangeParams::new(0.5, 0.2, 1.0);
        let cfg = EulerConfig { resolution: 1e-2, ..Default::default() };
        let still = SdeCoeffs { drift: |_: f64, _: f64| 0.0, diffusion: |_: f64, _: f64| 0.0, jumps: None };
        let (mut c, mut p) = streams(4);
        assert_eq!(euler_time_changed_sde(&still, &tc, 1.5, 1.0, &cfg, &mut c, &mut p).unwrap().value, 1.5);
        let unit = SdeCoeffs { drift: |_: f64, _: f64| 1.0, diffusion: |_: f64, _: f64| 0.0, jumps: None };
        let (mut c, mut p) = streams(5);
        let out = euler_time_changed_sde(&unit, &tc, 1.5, 1.0, &cfg, &mut c, &mut p).unwrap();
        assert!((out.value - (1.5 + out.clock)).abs() < 1e-12);
    }

    #[test]
    fn euler_refines_large_steps() {
        let tc = TimeChangeParams::new(0.5, 0.2, 0.0);
        let cfg = EulerConfig { h: Some(100.0), ..Default::default() };
        let unit = SdeCoeffs { drift: |_: f64, _: f64| 1.0, diffusion: |_: f64, _: f64| 0.0, jumps: None };
        let (mut c, mut p) = streams(6);
        let out = euler_time_changed_sde(&unit, &tc, 0.0, 1.0, &cfg, &mut c, &mut p).unwrap();
        assert!(out.h <= out.clock / 10.0 * (1.0 + 1e-15));
        assert_eq!(out.steps, 10);
    }
}
