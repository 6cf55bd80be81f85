//! Spike detection, Monte Carlo mean spike counts and noise sweeps.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, PhaseState};
use crate::orbits::{BasinLabel, BistableGeometry};
use crate::sde::{simulate_visit, NoiseStream, Scheme, SdePath};

pub const DEFAULT_THRESHOLD: f64 = 0.25;
pub const DEFAULT_REARM: f64 = 0.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpikeCount {
    pub count: usize,
    pub crossing_times: Vec<f64>,
}

/// Threshold detector with hysteresis: a spike is counted when `v ≥ v_th`
/// while armed, and the detector re-arms once `v < rearm`.
#[derive(Debug, Clone)]
pub struct SpikeDetector {
    v_th: f64,
    rearm: f64,
    armed: bool,
    times: Vec<f64>,
    count: usize,
    record_times: bool,
}

impl SpikeDetector {
    pub fn new(v_th: f64, rearm: f64) -> Result<Self> {
        if !(rearm < v_th) {
            return Err(Error::InvalidParameter {
                name: "rearm",
                reason: format!("must be below the threshold {v_th}, got {rearm}"),
            });
        }
        Ok(Self {
            v_th,
            rearm,
            armed: true,
            times: Vec::new(),
            count: 0,
            record_times: true,
        })
    }

    /// Counts only, without storing crossing times.
    pub fn counting_only(mut self) -> Self {
        self.record_times = false;
        self
    }

    #[inline]
    pub fn observe(&mut self, t: f64, v: f64) {
        if self.armed {
            if v >= self.v_th {
                self.armed = false;
                self.count += 1;
                if self.record_times {
                    self.times.push(t);
                }
            }
        } else if v < self.rearm {
            self.armed = true;
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn finish(self) -> SpikeCount {
        SpikeCount {
            count: self.count,
            crossing_times: self.times,
        }
    }
}

pub fn count_spikes(path: &SdePath, v_th: f64, rearm: f64) -> Result<SpikeCount> {
    let mut det = SpikeDetector::new(v_th, rearm)?;
    let h = path.sample_interval();
    for (i, s) in path.states.iter().enumerate() {
        det.observe(i as f64 * h, s.v);
    }
    Ok(det.finish())
}

/// Deterministic count along a noise-free RK4 trajectory.
pub fn deterministic_spike_count(
    params: &ModelParams,
    s0: PhaseState,
    horizon: f64,
    dt: f64,
    v_th: f64,
    rearm: f64,
) -> Result<SpikeCount> {
    let params = params.with_sigma(0.0)?;
    let mut det = SpikeDetector::new(v_th, rearm)?;
    det.observe(0.0, s0.v);
    let mut stream = NoiseStream::new(0, 0);
    simulate_visit(&params, s0, horizon, dt, &mut stream, Scheme::StochasticRK4, |i, s| {
        det.observe(i as f64 * dt, s.v)
    })?;
    Ok(det.finish())
}

/// How the numbers on a σ grid map onto the noise amplitude in `σ dW`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseScale {
    /// The grid value is the amplitude itself.
    Amplitude,
    /// The grid value is the intensity; the amplitude is its square root.
    #[default]
    Intensity,
}

impl NoiseScale {
    pub fn amplitude(self, sigma: f64) -> f64 {
        match self {
            NoiseScale::Amplitude => sigma,
            NoiseScale::Intensity => sigma.sqrt(),
        }
    }
}

/// Monte Carlo settings shared by every point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpikeExperiment {
    pub trials: usize,
    pub horizon: f64,
    pub dt: f64,
    pub v_th: f64,
    pub rearm: f64,
    pub seed: u64,
    pub scheme: Scheme,
    pub noise_scale: NoiseScale,
}

impl Default for SpikeExperiment {
    fn default() -> Self {
        Self {
            trials: 50,
            horizon: 2000.0,
            dt: 1e-3,
            v_th: DEFAULT_THRESHOLD,
            rearm: DEFAULT_REARM,
            seed: 0,
            scheme: Scheme::StochasticRK4,
            noise_scale: NoiseScale::Intensity,
        }
    }
}

impl SpikeExperiment {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter {
                name: "trials",
                reason: "must be >= 1".into(),
            });
        }
        if !(self.horizon > 0.0 && self.dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "horizon",
                reason: "horizon and dt must be > 0".into(),
            });
        }
        SpikeDetector::new(self.v_th, self.rearm).map(|_| ())
    }
}

fn run_trial(
    params: &ModelParams,
    s0: PhaseState,
    exp: &SpikeExperiment,
    trial: usize,
) -> Result<u32> {
    let mut det = SpikeDetector::new(exp.v_th, exp.rearm)?.counting_only();
    det.observe(0.0, s0.v);
    let mut stream = NoiseStream::new(exp.seed, trial as u64);
    let dt = exp.dt;
    simulate_visit(params, s0, exp.horizon, dt, &mut stream, exp.scheme, |i, s| {
        det.observe(i as f64 * dt, s.v)
    })
    .map_err(|e| Error::Trial {
        trial,
        source: Box::new(e),
    })?;
    Ok(det.count() as u32)
}

/// Mean and per-trial spike counts with `params.sigma()` as the amplitude.
pub fn mean_spike_count(
    params: &ModelParams,
    s0: PhaseState,
    exp: &SpikeExperiment,
) -> Result<(f64, Vec<u32>)> {
    exp.validate()?;
    let counts = (0..exp.trials)
        .into_par_iter()
        .map(|trial| run_trial(params, s0, exp, trial))
        .collect::<Result<Vec<u32>>>()?;
    Ok((mean(&counts), counts))
}

fn mean(xs: &[u32]) -> f64 {
    xs.iter().map(|&x| x as f64).sum::<f64>() / xs.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub epsilon: f64,
    pub basin: BasinLabel,
    pub initial_condition: PhaseState,
    pub sigma_grid: Vec<f64>,
    pub noise_scale: NoiseScale,
    pub mean_counts: Vec<f64>,
    pub per_trial_counts: Vec<Vec<u32>>,
    pub trials: usize,
    pub horizon: f64,
    pub dt: f64,
    pub seed: u64,
}

impl SweepResult {
    /// Standard error of the mean for grid row `i`.
    pub fn stderr(&self, i: usize) -> f64 {
        row_variance(&self.per_trial_counts[i]).map_or(0.0, |v| (v / self.trials as f64).sqrt())
    }

    /// `√(mean row variance / trials)`.
    pub fn pooled_stderr(&self) -> f64 {
        let vars: Vec<f64> = self
            .per_trial_counts
            .iter()
            .map(|r| row_variance(r).unwrap_or(0.0))
            .collect();
        (vars.iter().sum::<f64>() / vars.len() as f64 / self.trials as f64).sqrt()
    }
}

fn row_variance(row: &[u32]) -> Option<f64> {
    if row.len() < 2 {
        return None;
    }
    let m = mean(row);
    Some(row.iter().map(|&x| (x as f64 - m).powi(2)).sum::<f64>() / (row.len() - 1) as f64)
}

fn check_grid(sigma_grid: &[f64]) -> Result<()> {
    if sigma_grid.is_empty() {
        return Err(Error::Precondition("empty sigma grid".into()));
    }
    if sigma_grid.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(Error::Precondition("sigma values must be finite and >= 0".into()));
    }
    if sigma_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("sigma grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Counts for every grid value from one initial condition, without a basin check.
pub fn sweep_sigma(
    params: &ModelParams,
    basin: BasinLabel,
    s0: PhaseState,
    sigma_grid: &[f64],
    exp: &SpikeExperiment,
) -> Result<SweepResult> {
    exp.validate()?;
    check_grid(sigma_grid)?;
    let runs: Vec<(usize, usize)> = (0..sigma_grid.len())
        .flat_map(|i| (0..exp.trials).map(move |t| (i, t)))
        .collect();
    let counts = runs
        .par_iter()
        .map(|&(i, trial)| {
            let p = params.with_sigma(exp.noise_scale.amplitude(sigma_grid[i]))?;
            run_trial(&p, s0, exp, trial)
        })
        .collect::<Result<Vec<u32>>>()?;
    let per_trial_counts: Vec<Vec<u32>> = counts.chunks(exp.trials).map(|c| c.to_vec()).collect();
    Ok(SweepResult {
        epsilon: params.epsilon(),
        basin,
        initial_condition: s0,
        sigma_grid: sigma_grid.to_vec(),
        noise_scale: exp.noise_scale,
        mean_counts: per_trial_counts.iter().map(|r| mean(r)).collect(),
        per_trial_counts,
        trials: exp.trials,
        horizon: exp.horizon,
        dt: exp.dt,
        seed: exp.seed,
    })
}

/// One sweep per `(ε, basin)`, after confirming each initial condition's basin.
pub fn isr_sweep(
    params_base: &ModelParams,
    epsilon_list: &[f64],
    basin_ics: &BTreeMap<BasinLabel, PhaseState>,
    sigma_grid: &[f64],
    exp: &SpikeExperiment,
) -> Result<Vec<SweepResult>> {
    let mut out = Vec::with_capacity(epsilon_list.len() * basin_ics.len());
    for &eps in epsilon_list {
        let params = params_base.with_epsilon(eps)?.with_sigma(0.0)?;
        verify_basins(&params, basin_ics)?;
        for (&basin, &s0) in basin_ics {
            out.push(sweep_sigma(&params, basin, s0, sigma_grid, exp)?);
        }
    }
    Ok(out)
}

pub fn verify_basins(params: &ModelParams, basin_ics: &BTreeMap<BasinLabel, PhaseState>) -> Result<()> {
    let geometry = BistableGeometry::compute(params)?;
    for (&basin, &s0) in basin_ics {
        if geometry.classifier.classify(s0)? != basin {
            return Err(Error::BasinMismatch {
                v: s0.v,
                w: s0.w,
                expected: basin.to_string(),
                epsilon: params.epsilon(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsrMetric {
    pub has_isr: bool,
    pub min_index: usize,
    pub min_sigma: f64,
    pub min_value: f64,
    pub depth: f64,
    /// Significance margin `2 × pooled standard error`.
    pub delta: f64,
}

/// Detects a significant interior dip of ⟨N⟩ along the σ grid.
///
/// An interior point `i` qualifies when it lies more than `δ` below both the
/// highest value before it and the last value. Among qualifying points the
/// deepest is reported; otherwise the interior minimum is.
pub fn u_shape_metric(sweep: &SweepResult) -> Result<IsrMetric> {
    let m = &sweep.mean_counts;
    if m.len() < 5 {
        return Err(Error::Precondition(format!("need at least 5 sigma points, got {}", m.len())));
    }
    let delta = 2.0 * sweep.pooled_stderr();
    let last = m[m.len() - 1];
    let mut best: Option<(usize, f64)> = None;
    let mut peak = m[0];
    for i in 1..m.len() - 1 {
        if m[i] < peak - delta && m[i] < last - delta {
            let depth = peak.min(last) - m[i];
            if best.is_none_or(|(_, d)| depth > d) {
                best = Some((i, depth));
            }
        }
        peak = peak.max(m[i]);
    }
    let (min_index, depth, has_isr) = match best {
        Some((i, d)) => (i, d, true),
        None => {
            let i = (1..m.len() - 1)
                .min_by(|&a, &b| m[a].total_cmp(&m[b]))
                .expect("at least three interior points");
            let peak_before = m[..i].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (i, peak_before.min(last) - m[i], false)
        }
    };
    Ok(IsrMetric {
        has_isr,
        min_index,
        min_sigma: sweep.sigma_grid[min_index],
        min_value: m[min_index],
        depth,
        delta,
    })
}

/// Log-spaced grid with `points` values from `lo` to `hi`, optionally led by zero.
pub fn log_grid(lo: f64, hi: f64, points: usize, with_zero: bool) -> Vec<f64> {
    let mut grid = Vec::with_capacity(points + 1);
    if with_zero {
        grid.push(0.0);
    }
    let (a, b) = (lo.log10(), hi.log10());
    for i in 0..points {
        let f = if points == 1 { 0.0 } else { i as f64 / (points - 1) as f64 };
        grid.push(10f64.powf(a + f * (b - a)));
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::simulate_strided;
    use proptest::prelude::*;

    fn path(vs: &[f64]) -> SdePath {
        SdePath {
            states: vs.iter().map(|&v| PhaseState::new(v, 0.0)).collect(),
            dt: 1.0,
            stride: 1,
            scheme: Scheme::StochasticRK4,
        }
    }

    fn sweep_from(rows: Vec<Vec<u32>>) -> SweepResult {
        let n = rows.len();
        SweepResult {
            epsilon: 0.02785,
            basin: BasinLabel::LimitCycleBasin,
            initial_condition: PhaseState::new(-0.4, 0.2),
            sigma_grid: log_grid(1e-9, 1e-3, n, false),
            noise_scale: NoiseScale::Intensity,
            mean_counts: rows.iter().map(|r| mean(r)).collect(),
            trials: rows[0].len(),
            per_trial_counts: rows,
            horizon: 2000.0,
            dt: 1e-3,
            seed: 0,
        }
    }

    #[test]
    fn hysteresis() {
        assert_eq!(count_spikes(&path(&[0.3; 50]), 0.25, 0.0).unwrap().count, 1);
        let chatter = [0.0, 0.26, 0.24, 0.26, 0.1, 0.3, -0.01, 0.25, 0.2];
        let c = count_spikes(&path(&chatter), 0.25, 0.0).unwrap();
        assert_eq!(c.count, 2);
        assert_eq!(c.crossing_times, vec![1.0, 7.0]);
        assert!(count_spikes(&path(&chatter), 0.25, 0.25).is_err());
    }

    proptest! {
        #[test]
        fn crossing_times_increase(vs in proptest::collection::vec(-0.5f64..1.0, 1..400)) {
            let c = count_spikes(&path(&vs), 0.25, 0.0).unwrap();
            prop_assert_eq!(c.count, c.crossing_times.len());
            prop_assert!(c.crossing_times.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn flat_rows_never_dip(level in 0u32..200, n in 5usize..30) {
            let rows = vec![vec![level; 4]; n];
            prop_assert!(!u_shape_metric(&sweep_from(rows)).unwrap().has_isr);
        }

        #[test]
        fn increasing_rows_never_dip(start in 0u32..50, n in 5usize..30) {
            let rows = (0..n).map(|i| vec![start + 3 * i as u32; 3]).collect();
            prop_assert!(!u_shape_metric(&sweep_from(rows)).unwrap().has_isr);
        }
    }

    #[test]
    fn u_shape_detected() {
        let shape = [106, 106, 90, 40, 12, 4, 9, 30, 80, 150, 300];
        let rows = shape.iter().map(|&m| vec![m - 1, m, m + 1]).collect();
        let r = u_shape_metric(&sweep_from(rows)).unwrap();
        assert!(r.has_isr);
        assert_eq!(r.min_index, 5);
        assert_eq!(r.min_value, 4.0);
        assert_eq!(r.depth, 102.0);
        // rise, dip, rise
        let shape = [0, 20, 80, 70, 69, 75, 120, 300];
        let rows = shape.iter().map(|&m| vec![m, m, m, m]).collect();
        let r = u_shape_metric(&sweep_from(rows)).unwrap();
        assert!(r.has_isr);
        assert_eq!(r.min_value, 69.0);
        assert!(u_shape_metric(&sweep_from(vec![vec![1]; 4])).is_err());
    }

    #[test]
    fn subthreshold_and_cycling_counts() {
        let p = ModelParams::bistable(0.02785).unwrap();
        let quiet = deterministic_spike_count(&p, PhaseState::new(0.001, 0.001), 7500.0, 1e-3, 0.25, 0.0).unwrap();
        assert_eq!(quiet.count, 0);
        let busy = deterministic_spike_count(&p, PhaseState::new(-0.4, 0.2), 2000.0, 1e-3, 0.25, 0.0).unwrap();
        assert!(busy.count > 20);
    }

    #[test]
    fn strided_path_count_matches_streaming() {
        let p = ModelParams::bistable(0.0266).unwrap();
        let s0 = PhaseState::new(-0.4, 0.2);
        let mut st = NoiseStream::new(0, 0);
        let path = simulate_strided(&p, s0, 500.0, 1e-3, &mut st, Scheme::StochasticRK4, 1).unwrap();
        let a = count_spikes(&path, 0.25, 0.0).unwrap();
        let b = deterministic_spike_count(&p, s0, 500.0, 1e-3, 0.25, 0.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_noise_has_no_spread() {
        let p = ModelParams::bistable(0.0266).unwrap();
        let exp = SpikeExperiment {
            trials: 4,
            horizon: 300.0,
            ..Default::default()
        };
        let (m, counts) = mean_spike_count(&p, PhaseState::new(-0.4, 0.2), &exp).unwrap();
        let det = deterministic_spike_count(&p, PhaseState::new(-0.4, 0.2), 300.0, 1e-3, 0.25, 0.0).unwrap();
        assert!(counts.iter().all(|&c| c as usize == det.count));
        assert_eq!(m, det.count as f64);
    }

    #[test]
    fn grid_and_scale() {
        let g = log_grid(1e-9, 1e-3, 25, true);
        assert_eq!(g.len(), 26);
        assert_eq!(g[0], 0.0);
        assert!((g[1] - 1e-9).abs() < 1e-24 && (g[25] - 1e-3).abs() < 1e-18);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(NoiseScale::Intensity.amplitude(1e-6), 1e-3);
        assert_eq!(NoiseScale::Amplitude.amplitude(1e-6), 1e-6);
        assert!(check_grid(&[0.0, 1e-3, 1e-4]).is_err());
    }

    #[test]
    fn basin_mismatch_is_reported() {
        let mut ics = BTreeMap::new();
        ics.insert(BasinLabel::FixedPointBasin, PhaseState::new(-0.4, 0.2));
        let exp = SpikeExperiment {
            trials: 1,
            horizon: 10.0,
            ..Default::default()
        };
        let err = isr_sweep(&ModelParams::bistable(0.0266).unwrap(), &[0.0266], &ics, &[0.0, 1e-6, 1e-5], &exp)
            .unwrap_err();
        assert!(matches!(err, Error::BasinMismatch { .. }));
    }
}
