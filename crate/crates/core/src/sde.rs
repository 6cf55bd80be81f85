//! Additive-noise integration of `dv = f dt + σ dW`, `dw = εg dt`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, PhaseState};
use crate::orbits::BLOWUP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Scheme {
    /// RK4 drift stages fed with a piecewise-linear noise path.
    #[default]
    #[serde(rename = "stochastic-rk4")]
    StochasticRK4,
    #[serde(rename = "euler-maruyama")]
    EulerMaruyama,
}

/// Gaussian increments keyed by `(seed, trial_index)`.
///
/// The trial index selects an independent ChaCha stream, so a trial's
/// variates do not depend on which thread runs it or in which order.
#[derive(Debug, Clone)]
pub struct NoiseStream {
    seed: u64,
    trial_index: u64,
    rng: ChaCha8Rng,
}

impl NoiseStream {
    pub fn new(seed: u64, trial_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial_index);
        Self {
            seed,
            trial_index,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trial_index(&self) -> u64 {
        self.trial_index
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Standard normal variate.
    #[inline]
    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Wiener increment over `dt`.
    #[inline]
    pub fn increment(&mut self, dt: f64) -> f64 {
        dt.sqrt() * self.normal()
    }
}

/// One step; `noise_increment` is the Wiener increment `√dt · N(0,1)`.
#[inline]
pub fn step(
    params: &ModelParams,
    s: PhaseState,
    dt: f64,
    noise_increment: f64,
    scheme: Scheme,
) -> Result<PhaseState> {
    let drift = |x: PhaseState| {
        let (dv, dw) = params.fast_drift(x.v, x.w);
        PhaseState::new(dv, dw)
    };
    step_with(drift, params.sigma(), s, dt, noise_increment, scheme)
}

/// Same scheme for an arbitrary planar drift with additive noise on `v`.
#[inline]
pub fn step_with(
    drift: impl Fn(PhaseState) -> PhaseState,
    sigma: f64,
    s: PhaseState,
    dt: f64,
    noise_increment: f64,
    scheme: Scheme,
) -> Result<PhaseState> {
    let n = sigma * noise_increment;
    let next = match scheme {
        Scheme::StochasticRK4 => {
            let half = 0.5 * n;
            let k1 = drift(s);
            let k2 = drift(PhaseState::new(s.v + 0.5 * dt * k1.v + half, s.w + 0.5 * dt * k1.w));
            let k3 = drift(PhaseState::new(s.v + 0.5 * dt * k2.v + half, s.w + 0.5 * dt * k2.w));
            let k4 = drift(PhaseState::new(s.v + dt * k3.v + n, s.w + dt * k3.w));
            PhaseState::new(
                s.v + dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v) + n,
                s.w + dt / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w),
            )
        }
        Scheme::EulerMaruyama => {
            let d = drift(s);
            PhaseState::new(s.v + d.v * dt + n, s.w + d.w * dt)
        }
    };
    if next.v.abs() <= BLOWUP && next.w.abs() <= BLOWUP {
        Ok(next)
    } else {
        Err(Error::NonFinite { time: f64::NAN })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdePath {
    /// States every `stride` steps, including the initial state.
    pub states: Vec<PhaseState>,
    pub dt: f64,
    pub stride: usize,
    pub scheme: Scheme,
}

impl SdePath {
    pub fn sample_interval(&self) -> f64 {
        self.dt * self.stride as f64
    }
}

fn check_step(dt: f64, t_end: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("must be > 0, got {dt}"),
        });
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: format!("must be >= 0, got {t_end}"),
        });
    }
    Ok((t_end / dt).round() as usize)
}

/// Full-resolution path.
pub fn simulate(
    params: &ModelParams,
    s0: PhaseState,
    t_end: f64,
    dt: f64,
    stream: &mut NoiseStream,
    scheme: Scheme,
) -> Result<SdePath> {
    simulate_strided(params, s0, t_end, dt, stream, scheme, 1)
}

/// Path keeping every `stride`-th state; the step count is rounded down to a
/// multiple of `stride`.
pub fn simulate_strided(
    params: &ModelParams,
    s0: PhaseState,
    t_end: f64,
    dt: f64,
    stream: &mut NoiseStream,
    scheme: Scheme,
    stride: usize,
) -> Result<SdePath> {
    let stride = stride.max(1);
    let n = check_step(dt, t_end)? / stride * stride;
    let mut states = Vec::with_capacity(n / stride + 1);
    states.push(s0);
    let t = n as f64 * dt;
    simulate_visit(params, s0, t, dt, stream, scheme, |i, s| {
        if i % stride == 0 {
            states.push(s)
        }
    })?;
    Ok(SdePath {
        states,
        dt,
        stride,
        scheme,
    })
}

/// Streams each state (step index from 1) to `visit` without storing the path.
pub fn simulate_visit(
    params: &ModelParams,
    s0: PhaseState,
    t_end: f64,
    dt: f64,
    stream: &mut NoiseStream,
    scheme: Scheme,
    mut visit: impl FnMut(usize, PhaseState),
) -> Result<PhaseState> {
    let n = check_step(dt, t_end)?;
    let sqrt_dt = dt.sqrt();
    let mut s = s0;
    for i in 1..=n {
        let dw = sqrt_dt * stream.normal();
        s = step(params, s, dt, dw, scheme).map_err(|_| Error::NonFinite {
            time: i as f64 * dt,
        })?;
        visit(i, s);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::{integrate, rk4_step};

    fn fhn(eps: f64, sigma: f64) -> ModelParams {
        ModelParams::bistable(eps).unwrap().with_sigma(sigma).unwrap()
    }

    #[test]
    fn zero_noise_matches_classical_rk4() {
        let p = fhn(0.02785, 0.0);
        let s = PhaseState::new(0.3, 0.1);
        let a = step(&p, s, 1e-3, 0.7, Scheme::StochasticRK4).unwrap();
        assert_eq!(a, rk4_step(&p, s, 1e-3));
        let p = fhn(0.02785, 1e-3);
        let a = step(&p, s, 1e-3, 0.0, Scheme::StochasticRK4).unwrap();
        assert_eq!(a, rk4_step(&p, s, 1e-3));
        let e = step(&p, s, 1e-3, 0.0, Scheme::EulerMaruyama).unwrap();
        let (dv, dw) = p.fast_drift(s.v, s.w);
        assert_eq!(e, PhaseState::new(s.v + dv * 1e-3, s.w + dw * 1e-3));
    }

    #[test]
    fn zero_noise_path_tracks_deterministic_integrator() {
        let p = fhn(0.02785, 0.0);
        let s0 = PhaseState::new(-0.4, 0.2);
        let mut stream = NoiseStream::new(1, 0);
        let path = simulate_strided(&p, s0, 7500.0, 1e-3, &mut stream, Scheme::StochasticRK4, 1000).unwrap();
        let det = integrate(&p, s0, 7500.0, 1e-3).unwrap();
        for (k, s) in path.states.iter().enumerate() {
            assert!(s.distance(det.states[k * 1000]) <= 1e-8);
        }
    }

    #[test]
    fn same_stream_same_path() {
        let p = fhn(0.0266, 1e-3);
        let run = |trial| {
            let mut st = NoiseStream::new(42, trial);
            simulate_strided(&p, PhaseState::new(0.001, 0.001), 50.0, 1e-3, &mut st, Scheme::StochasticRK4, 10)
                .unwrap()
        };
        assert_eq!(run(3), run(3));
        assert_ne!(run(3), run(4));
    }

    #[test]
    fn non_finite_carries_time() {
        let p = ModelParams::new(-0.05, 1.0, 2.0, 0.02, 0.0).unwrap();
        let mut st = NoiseStream::new(0, 0);
        let err = simulate(&p, PhaseState::new(-50.0, 0.0), 10.0, 0.1, &mut st, Scheme::EulerMaruyama).unwrap_err();
        assert!(matches!(err, Error::NonFinite { time } if time > 0.0));
    }

    /// Pooled stationary variance of `dv = -v dt + 0.1 dW` over 16 paths of 1e6 steps.
    fn ou_variance(scheme: Scheme) -> f64 {
        let (kappa, sigma, dt): (f64, f64, f64) = (1.0, 0.1, 1e-3);
        let drift = |x: PhaseState| PhaseState::new(-kappa * x.v, 0.0);
        let mut total = 0.0;
        let mut count = 0usize;
        for path in 0..16u64 {
            let mut st = NoiseStream::new(7, path);
            let mut s = PhaseState::ORIGIN;
            for i in 0..1_000_000 {
                s = step_with(drift, sigma, s, dt, st.increment(dt), scheme).unwrap();
                if i >= 10_000 {
                    total += s.v * s.v;
                    count += 1;
                }
            }
        }
        total / count as f64
    }

    #[test]
    fn ornstein_uhlenbeck_variance() {
        for scheme in [Scheme::StochasticRK4, Scheme::EulerMaruyama] {
            let var = ou_variance(scheme);
            assert!((var / 5e-3 - 1.0).abs() < 0.05, "{scheme:?}: {var}");
        }
    }

    #[test]
    fn pure_noise_channel() {
        let (sigma, t, dt, trials): (f64, f64, f64, u64) = (1e-2, 1.0, 1e-2, 10_000);
        let still = |_: PhaseState| PhaseState::ORIGIN;
        for scheme in [Scheme::StochasticRK4, Scheme::EulerMaruyama] {
            let mut sq = 0.0;
            for trial in 0..trials {
                let mut st = NoiseStream::new(9, trial);
                let mut s = PhaseState::ORIGIN;
                for _ in 0..(t / dt).round() as usize {
                    s = step_with(still, sigma, s, dt, st.increment(dt), scheme).unwrap();
                }
                assert_eq!(s.w, 0.0);
                sq += s.v * s.v;
            }
            let var = sq / trials as f64;
            assert!((var / (sigma * sigma * t) - 1.0).abs() < 0.05, "{scheme:?}: {var}");
        }
    }

    #[test]
    fn adjacent_trials_are_uncorrelated() {
        // ensemble correlation of v(T) between trial k and trial k + 1
        let p = fhn(0.0266, 1e-3);
        let n = 4000;
        let ends: Vec<f64> = (0..=n)
            .map(|trial| {
                let mut st = NoiseStream::new(5, trial);
                simulate_visit(&p, PhaseState::new(0.3, 0.1), 20.0, 1e-3, &mut st, Scheme::StochasticRK4, |_, _| {})
                    .unwrap()
                    .v
            })
            .collect();
        let xs = &ends[..n as usize];
        let ys = &ends[1..];
        let m = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
        let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        assert!((cov / (vx * vy).sqrt()).abs() <= 0.05);
    }

    #[test]
    fn rk4_order_on_the_cycle() {
        let p = fhn(0.0266, 0.0);
        let s0 = PhaseState::new(-0.4, 0.2);
        let end = |dt: f64| integrate(&p, s0, 70.0, dt).unwrap().last();
        // below dt ~ 5e-3 both errors sit on the ~5e-13 roundoff floor
        let reference = end(1.25e-4);
        let e1 = end(4e-2).distance(reference);
        let e2 = end(2e-2).distance(reference);
        assert!((e1 / e2).log2() >= 3.5, "observed order {}", (e1 / e2).log2());
    }

    #[test]
    fn weak_agreement_between_schemes() {
        let p = fhn(0.0266, 1e-3);
        let s0 = PhaseState::new(0.3, 0.1);
        let stats = |scheme| {
            let mut xs = Vec::with_capacity(10_000);
            for trial in 0..10_000 {
                let mut st = NoiseStream::new(11, trial);
                xs.push(simulate_visit(&p, s0, 10.0, 1e-3, &mut st, scheme, |_, _| {}).unwrap().v);
            }
            let n = xs.len() as f64;
            let m = xs.iter().sum::<f64>() / n;
            let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
            (m, (var / n).sqrt())
        };
        let (m1, se1) = stats(Scheme::StochasticRK4);
        let (m2, se2) = stats(Scheme::EulerMaruyama);
        assert!((m1 - m2).abs() <= 3.0 * (se1 * se1 + se2 * se2).sqrt());
    }
}
