//! Deterministic integration, the stable limit cycle, the separatrix (unstable
//! cycle) and basin classification.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::det_analysis::{fixed_points, Stability};
use crate::error::{Error, Result};
use crate::model::{ModelParams, PhaseState};

/// States beyond this magnitude are treated as blow-up.
pub const BLOWUP: f64 = 1e6;
pub const DEFAULT_DT: f64 = 1e-3;

/// Classical RK4 step of the noise-free fast-scale system.
#[inline]
pub fn rk4_step(params: &ModelParams, s: PhaseState, h: f64) -> PhaseState {
    let (k1v, k1w) = params.fast_drift(s.v, s.w);
    let (k2v, k2w) = params.fast_drift(s.v + 0.5 * h * k1v, s.w + 0.5 * h * k1w);
    let (k3v, k3w) = params.fast_drift(s.v + 0.5 * h * k2v, s.w + 0.5 * h * k2w);
    let (k4v, k4w) = params.fast_drift(s.v + h * k3v, s.w + h * k3w);
    PhaseState::new(
        s.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        s.w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w),
    )
}

#[inline]
fn in_bounds(s: PhaseState) -> bool {
    s.v.abs() <= BLOWUP && s.w.abs() <= BLOWUP
}

fn velocity(params: &ModelParams, s: PhaseState) -> PhaseState {
    let (dv, dw) = params.fast_drift(s.v, s.w);
    PhaseState::new(dv, dw)
}

/// Noise-free trajectory sampled every `dt`, including the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub states: Vec<PhaseState>,
}

impl Trajectory {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.states.len()).map(move |i| i as f64 * self.dt)
    }

    pub fn last(&self) -> PhaseState {
        *self.states.last().expect("trajectory holds the initial state")
    }
}

pub fn integrate(params: &ModelParams, s0: PhaseState, t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("must be > 0, got {dt}"),
        });
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: format!("must be > 0, got {t_end}"),
        });
    }
    let n = (t_end / dt).round() as usize;
    let mut states = Vec::with_capacity(n + 1);
    let mut s = s0;
    states.push(s);
    for i in 1..=n {
        s = rk4_step(params, s, dt);
        if !in_bounds(s) {
            return Err(Error::NonFinite { time: i as f64 * dt });
        }
        states.push(s);
    }
    Ok(Trajectory { dt, states })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleKind {
    StableLC,
    UnstableLC,
}

/// One period of a closed orbit, `M + 1` samples uniformly spaced in time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cycle {
    pub period: f64,
    pub samples: Vec<(f64, PhaseState)>,
    pub kind: CycleKind,
}

impl Cycle {
    /// Number of intervals `M`.
    pub fn intervals(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn states(&self) -> impl Iterator<Item = PhaseState> + '_ {
        self.samples.iter().map(|&(_, s)| s)
    }

    /// The `M` distinct samples, dropping the closing duplicate.
    pub fn open_states(&self) -> Vec<PhaseState> {
        self.samples[..self.intervals()].iter().map(|&(_, s)| s).collect()
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.intervals() as f64
    }

    pub fn closure_error(&self) -> f64 {
        self.samples[0].1.distance(self.samples[self.intervals()].1)
    }

    pub fn max_v(&self) -> f64 {
        self.states().map(|s| s.v).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_v(&self) -> f64 {
        self.states().map(|s| s.v).fold(f64::INFINITY, f64::min)
    }

    /// Winding number of the closed polygon around `center`.
    pub fn winding_number(&self, center: PhaseState) -> i64 {
        let mut total = 0.0;
        let pts = self.open_states();
        for i in 0..pts.len() {
            let p = pts[i] - center;
            let q = pts[(i + 1) % pts.len()] - center;
            total += (p.v * q.w - p.w * q.v).atan2(p.dot(q));
        }
        (total / TAU).round() as i64
    }

    /// Smallest positive distance from `center` along direction `theta` to
    /// the polygon, if the ray meets it.
    pub fn ray_radius(&self, center: PhaseState, theta: f64) -> Option<f64> {
        let (dv, dw) = (theta.cos(), theta.sin());
        let pts = self.open_states();
        let mut best: Option<f64> = None;
        for i in 0..pts.len() {
            let p = pts[i] - center;
            let q = pts[(i + 1) % pts.len()] - center;
            // r d = p + s (q - p)
            let (ev, ew) = (q.v - p.v, q.w - p.w);
            let det = dv * (-ew) - dw * (-ev);
            if det.abs() < 1e-300 {
                continue;
            }
            let r = (p.v * (-ew) - p.w * (-ev)) / det;
            let s = (dv * p.w - dw * p.v) / det;
            if (0.0..=1.0).contains(&s) && r > 0.0 {
                best = Some(best.map_or(r, |b: f64| b.min(r)));
            }
        }
        best
    }
}

/// Settings for locating the stable cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSearch {
    pub launch: PhaseState,
    pub dt: f64,
    pub transient: f64,
    /// Time allowed for the return map to settle after the transient.
    pub max_time: f64,
    /// Successive section returns must agree to this distance.
    pub return_tol: f64,
    /// Returns closer than this to a fixed point mean the orbit is collapsing.
    pub fixed_point_guard: f64,
    pub samples: usize,
}

impl Default for CycleSearch {
    fn default() -> Self {
        Self {
            launch: PhaseState::new(-0.4, 0.2),
            dt: DEFAULT_DT,
            transient: 2000.0,
            max_time: 60_000.0,
            return_tol: 1e-8,
            fixed_point_guard: 1e-3,
            samples: 4096,
        }
    }
}

/// Section `w - (b/c) v`, the w-nullcline.
#[inline]
fn section(params: &ModelParams, s: PhaseState) -> f64 {
    s.w - params.b() / params.c() * s.v
}

/// Fraction of the step `s -> rk4_step(s, dt)` at which `phi` vanishes.
fn locate_in_step<F: Fn(PhaseState) -> f64>(
    params: &ModelParams,
    s: PhaseState,
    dt: f64,
    phi: F,
) -> (f64, PhaseState) {
    let p0 = phi(s);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let pm = phi(rk4_step(params, s, mid * dt));
        if (pm > 0.0) == (p0 > 0.0) && pm != 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let frac = 0.5 * (lo + hi);
    (frac, rk4_step(params, s, frac * dt))
}

pub fn find_stable_cycle(params: &ModelParams) -> Option<Cycle> {
    find_stable_cycle_with(params, &CycleSearch::default())
}

pub fn find_stable_cycle_with(params: &ModelParams, opts: &CycleSearch) -> Option<Cycle> {
    let (start, period) = settle_on_cycle(params, opts)?;
    Some(sample_period(params, start, period, opts.samples, opts.dt, CycleKind::StableLC))
}

/// Returns a section point on the attracting orbit and the period.
fn settle_on_cycle(params: &ModelParams, opts: &CycleSearch) -> Option<(PhaseState, f64)> {
    let dt = opts.dt;
    let equilibria: Vec<PhaseState> = fixed_points(params).into_iter().map(|r| r.location).collect();
    let near_equilibrium = |x: PhaseState| {
        equilibria
            .iter()
            .any(|e| e.distance(x) < opts.fixed_point_guard)
    };

    let mut s = opts.launch;
    let n_transient = (opts.transient / dt).round() as usize;
    for _ in 0..n_transient {
        s = rk4_step(params, s, dt);
        if !in_bounds(s) {
            return None;
        }
    }

    let n_max = (opts.max_time / dt).round() as usize;
    let mut last: Option<(f64, PhaseState)> = None;
    let mut last_gap = f64::INFINITY;
    let mut h0 = section(params, s);
    for i in 0..n_max {
        let next = rk4_step(params, s, dt);
        if !in_bounds(next) {
            return None;
        }
        let h1 = section(params, next);
        if h0 != 0.0 && (h1 == 0.0 || (h1 > 0.0) != (h0 > 0.0)) {
            let (frac, x) = locate_in_step(params, s, dt, |y| section(params, y));
            if params.f(x.v, x.w) > 0.0 {
                if near_equilibrium(x) {
                    return None;
                }
                let t = (i as f64 + frac) * dt;
                if let Some((t_prev, x_prev)) = last {
                    let gap = x.distance(x_prev);
                    if gap < opts.return_tol && last_gap < opts.return_tol {
                        return Some((x, t - t_prev));
                    }
                    last_gap = gap;
                }
                last = Some((t, x));
            }
        }
        // quiescent orbits stop crossing altogether
        if last.is_none() && i as f64 * dt > 2000.0 {
            return None;
        }
        s = next;
        h0 = h1;
    }
    None
}

/// Integrates one period from `start` and records `m + 1` uniform samples.
fn sample_period(
    params: &ModelParams,
    start: PhaseState,
    period: f64,
    m: usize,
    dt: f64,
    kind: CycleKind,
) -> Cycle {
    let spacing = period / m as f64;
    let k = (spacing / dt).ceil().max(1.0) as usize;
    let h = spacing / k as f64;
    let mut samples = Vec::with_capacity(m + 1);
    let mut s = start;
    for i in 0..=m {
        samples.push((i as f64 * spacing, s));
        if i < m {
            for _ in 0..k {
                s = rk4_step(params, s, h);
            }
        }
    }
    Cycle {
        period,
        samples,
        kind,
    }
}

/// Settings for the ray-bisection separatrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatrixSearch {
    pub rays: usize,
    pub radial_tol: f64,
    pub samples: usize,
    pub dt: f64,
}

impl Default for SeparatrixSearch {
    fn default() -> Self {
        Self {
            rays: 64,
            radial_tol: 1e-9,
            samples: 1024,
            dt: DEFAULT_DT,
        }
    }
}

/// The stable equilibrium enclosed by `stable`.
pub fn enclosed_fixed_point(params: &ModelParams, stable: &Cycle) -> Result<PhaseState> {
    fixed_points(params)
        .into_iter()
        .find(|r| stable.winding_number(r.location) != 0)
        .filter(|r| r.stability == Stability::Stable)
        .map(|r| r.location)
        .ok_or_else(|| Error::NotBistable("no stable fixed point inside the cycle".into()))
}

/// Separatrix between the fixed point and the stable cycle.
pub fn find_unstable_cycle(params: &ModelParams, stable: &Cycle) -> Result<Cycle> {
    find_unstable_cycle_with(params, stable, &SeparatrixSearch::default())
}

pub fn find_unstable_cycle_with(
    params: &ModelParams,
    stable: &Cycle,
    opts: &SeparatrixSearch,
) -> Result<Cycle> {
    Ok(separatrix_rays(params, stable, opts)?.cycle)
}

/// Ray-bisection output: flip radii per ray plus the assembled cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct Separatrix {
    pub center: PhaseState,
    pub angles: Vec<f64>,
    pub radii: Vec<f64>,
    pub stable_radii: Vec<f64>,
    pub cycle: Cycle,
}

pub fn separatrix_rays(
    params: &ModelParams,
    stable: &Cycle,
    opts: &SeparatrixSearch,
) -> Result<Separatrix> {
    if stable.kind != CycleKind::StableLC {
        return Err(Error::Precondition("separatrix needs the stable cycle".into()));
    }
    let center = enclosed_fixed_point(params, stable)?;
    let k = opts.rays.max(4);
    let angles: Vec<f64> = (0..k).map(|i| TAU * i as f64 / k as f64).collect();

    let per_ray: Vec<Result<(f64, f64, f64)>> = angles
        .par_iter()
        .enumerate()
        .map(|(i, &theta)| {
            let r_stable = stable.ray_radius(center, theta).ok_or_else(|| {
                Error::NotBistable(format!("ray {i} misses the stable cycle"))
            })?;
            let mut lo = 0.0;
            let mut hi = r_stable * (1.0 - 1e-6);
            let (gap_hi, turn) = return_gap(params, center, theta, hi, opts.dt)
                .ok_or_else(|| Error::NotBistable(format!("ray {i}: no return")))?;
            if gap_hi <= 0.0 {
                return Err(Error::NotBistable(format!(
                    "ray {i}: the state just inside the stable cycle is attracted inward"
                )));
            }
            while hi - lo > opts.radial_tol {
                let mid = 0.5 * (lo + hi);
                match return_gap(params, center, theta, mid, opts.dt) {
                    Some((g, _)) if g > 0.0 => hi = mid,
                    Some(_) => lo = mid,
                    None => {
                        return Err(Error::NotBistable(format!("ray {i}: no return from r = {mid}")))
                    }
                }
            }
            Ok((0.5 * (lo + hi), r_stable, turn))
        })
        .collect();

    let mut radii = Vec::with_capacity(k);
    let mut stable_radii = Vec::with_capacity(k);
    let mut turn = 0.0;
    for r in per_ray {
        let (rs, rst, t) = r?;
        radii.push(rs);
        stable_radii.push(rst);
        turn = t;
    }
    let cycle = assemble_separatrix(params, center, &angles, &radii, turn, opts)?;
    Ok(Separatrix {
        center,
        angles,
        radii,
        stable_radii,
        cycle,
    })
}

/// Signed angular change of `x - center` between two states, in (-π, π].
#[inline]
fn angle_step(center: PhaseState, a: PhaseState, b: PhaseState) -> f64 {
    let p = a - center;
    let q = b - center;
    (p.v * q.w - p.w * q.v).atan2(p.dot(q))
}

/// Integrates until the direction about `center` has turned by `target`
/// (signed); returns the end state and elapsed time.
fn turn_by(
    params: &ModelParams,
    center: PhaseState,
    s0: PhaseState,
    target: f64,
    dt: f64,
    max_time: f64,
    mut visit: impl FnMut(f64, PhaseState),
) -> Option<(PhaseState, f64)> {
    let n_max = (max_time / dt) as usize;
    let mut s = s0;
    let mut turned = 0.0;
    for i in 0..n_max {
        let next = rk4_step(params, s, dt);
        if !in_bounds(next) {
            return None;
        }
        let d = angle_step(center, s, next);
        if (turned + d) * target.signum() >= target.abs() {
            let remaining = target - turned;
            let (frac, x) = locate_in_step(params, s, dt, |y| {
                angle_step(center, s, y) - remaining
            });
            return Some((x, (i as f64 + frac) * dt));
        }
        turned += d;
        s = next;
        visit((i + 1) as f64 * dt, s);
    }
    None
}

/// One full revolution about the fixed point from radius `r` on the ray
/// `theta`; returns the radius change and the rotation sense.
fn return_gap(
    params: &ModelParams,
    center: PhaseState,
    theta: f64,
    r: f64,
    dt: f64,
) -> Option<(f64, f64)> {
    let s0 = center + PhaseState::new(theta.cos(), theta.sin()) * r;
    let sense = rotation_sense(params, center, s0, dt);
    let (end, _) = turn_by(params, center, s0, sense * TAU, dt, 5000.0, |_, _| {})?;
    Some((end.distance(center) - r, sense))
}

fn rotation_sense(params: &ModelParams, center: PhaseState, s: PhaseState, dt: f64) -> f64 {
    let next = rk4_step(params, s, dt);
    let d = angle_step(center, s, next);
    if d >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Joins the flip points with short forward integrations from each ray to
/// the next, then resamples uniformly in time.
fn assemble_separatrix(
    params: &ModelParams,
    center: PhaseState,
    angles: &[f64],
    radii: &[f64],
    sense: f64,
    opts: &SeparatrixSearch,
) -> Result<Cycle> {
    let k = angles.len();
    let step = TAU / k as f64;
    let order: Vec<usize> = if sense > 0.0 {
        (0..k).collect()
    } else {
        (0..k).map(|i| (k - i) % k).collect()
    };
    let flip = |i: usize| center + PhaseState::new(angles[i].cos(), angles[i].sin()) * radii[i];

    let mut dense: Vec<(f64, PhaseState)> = Vec::new();
    let mut t0 = 0.0;
    for &i in &order {
        let s0 = flip(i);
        dense.push((t0, s0));
        let mut seg = Vec::new();
        let (_, elapsed) = turn_by(params, center, s0, sense * step, opts.dt, 5000.0, |t, s| {
            seg.push((t0 + t, s))
        })
        .ok_or_else(|| Error::NotBistable("separatrix segment did not reach the next ray".into()))?;
        dense.extend(seg);
        t0 += elapsed;
    }
    let period = t0;
    dense.push((period, flip(order[0])));

    let m = opts.samples.max(256);
    let spacing = period / m as f64;
    let mut samples = Vec::with_capacity(m + 1);
    let mut j = 0;
    for i in 0..=m {
        let t = i as f64 * spacing;
        while j + 2 < dense.len() && dense[j + 1].0 <= t {
            j += 1;
        }
        let (ta, a) = dense[j];
        let (tb, b) = dense[j + 1];
        samples.push((t, hermite(params, ta, a, tb, b, t)));
    }
    Ok(Cycle {
        period,
        samples,
        kind: CycleKind::UnstableLC,
    })
}

/// Cubic Hermite interpolation using the vector field as derivative.
fn hermite(params: &ModelParams, ta: f64, a: PhaseState, tb: f64, b: PhaseState, t: f64) -> PhaseState {
    let h = tb - ta;
    if h <= 0.0 {
        return a;
    }
    let u = ((t - ta) / h).clamp(0.0, 1.0);
    let (u2, u3) = (u * u, u * u * u);
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    let ma = velocity(params, a);
    let mb = velocity(params, b);
    a * h00 + ma * (h10 * h) + b * h01 + mb * (h11 * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasinLabel {
    FixedPointBasin,
    LimitCycleBasin,
}

impl std::fmt::Display for BasinLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BasinLabel::FixedPointBasin => "fp",
            BasinLabel::LimitCycleBasin => "lc",
        })
    }
}

/// Noise-free basin test built once per parameter set.
#[derive(Debug, Clone)]
pub struct BasinClassifier {
    params: ModelParams,
    center: PhaseState,
    polygon: Vec<PhaseState>,
    margin: f64,
    separatrix_max_v: f64,
    pub fixed_point_tol: f64,
    pub horizon: f64,
    pub dt: f64,
}

impl BasinClassifier {
    pub fn new(params: &ModelParams, stable: &Cycle, separatrix: &Cycle) -> Result<Self> {
        let center = enclosed_fixed_point(params, stable)?;
        let polygon = separatrix.open_states();
        // deviation of the true curve from each chord, from the Hermite midpoint
        let h = separatrix.spacing();
        let mut chord = 0.0f64;
        for i in 0..polygon.len() {
            let a = polygon[i];
            let b = polygon[(i + 1) % polygon.len()];
            let dev = (velocity(params, a) - velocity(params, b)) * (h / 8.0);
            chord = chord.max(dev.norm());
        }
        Ok(Self {
            params: *params,
            center,
            polygon,
            margin: 2.0 * chord + 1e-9,
            separatrix_max_v: separatrix.max_v(),
            fixed_point_tol: 1e-4,
            horizon: 5000.0,
            dt: DEFAULT_DT,
        })
    }

    pub fn fixed_point(&self) -> PhaseState {
        self.center
    }

    /// Band around the separatrix polygon inside which integration decides.
    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Signed distance to the separatrix polygon, negative inside.
    pub fn signed_distance(&self, s: PhaseState) -> f64 {
        let n = self.polygon.len();
        let mut inside = false;
        let mut best = f64::INFINITY;
        for i in 0..n {
            let a = self.polygon[i];
            let b = self.polygon[(i + 1) % n];
            if (a.w > s.w) != (b.w > s.w) {
                let x = a.v + (s.w - a.w) / (b.w - a.w) * (b.v - a.v);
                if s.v < x {
                    inside = !inside;
                }
            }
            let e = b - a;
            let len2 = e.dot(e);
            let u = if len2 > 0.0 { ((s - a).dot(e) / len2).clamp(0.0, 1.0) } else { 0.0 };
            best = best.min(s.distance(a + e * u));
        }
        if inside {
            -best
        } else {
            best
        }
    }

    pub fn classify(&self, s0: PhaseState) -> Result<BasinLabel> {
        let stride = (0.1 / self.dt).round().max(1.0) as usize;
        let n_max = (self.horizon / self.dt).round() as usize;
        let mut s = s0;
        let mut i = 0;
        loop {
            if s.distance(self.center) < self.fixed_point_tol {
                return Ok(BasinLabel::FixedPointBasin);
            }
            if s.v > self.separatrix_max_v + self.margin {
                return Ok(BasinLabel::LimitCycleBasin);
            }
            let d = self.signed_distance(s);
            if d < -self.margin {
                return Ok(BasinLabel::FixedPointBasin);
            }
            if d > self.margin {
                return Ok(BasinLabel::LimitCycleBasin);
            }
            if i >= n_max {
                return Err(Error::Undecided {
                    horizon: self.horizon,
                });
            }
            for _ in 0..stride {
                s = rk4_step(&self.params, s, self.dt);
                i += 1;
            }
            if !in_bounds(s) {
                return Err(Error::NonFinite {
                    time: i as f64 * self.dt,
                });
            }
        }
    }
}

/// Everything needed to reason about bistability at one parameter set.
#[derive(Debug, Clone)]
pub struct BistableGeometry {
    pub stable: Cycle,
    pub separatrix: Separatrix,
    pub classifier: BasinClassifier,
}

impl BistableGeometry {
    pub fn compute(params: &ModelParams) -> Result<Self> {
        let stable = find_stable_cycle(params)
            .ok_or_else(|| Error::NotBistable("no stable limit cycle".into()))?;
        let separatrix = separatrix_rays(params, &stable, &SeparatrixSearch::default())?;
        let classifier = BasinClassifier::new(params, &stable, &separatrix.cycle)?;
        Ok(Self {
            stable,
            separatrix,
            classifier,
        })
    }
}

pub fn classify_basin(params: &ModelParams, s0: PhaseState) -> Result<BasinLabel> {
    BistableGeometry::compute(params)?.classifier.classify(s0)
}

/// Bisection on existence of the stable cycle, to `1e-5` in ε.
pub fn saddle_node_epsilon(params: &ModelParams, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::BadBracket { lo, hi });
    }
    let exists = |e: f64| -> Result<bool> {
        Ok(find_stable_cycle_with(&params.with_epsilon(e)?, &existence_search()).is_some())
    };
    let e_lo = exists(lo)?;
    if e_lo == exists(hi)? {
        return Err(Error::BadBracket { lo, hi });
    }
    while hi - lo > 1e-5 {
        let mid = 0.5 * (lo + hi);
        if exists(mid)? == e_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn existence_search() -> CycleSearch {
    CycleSearch {
        samples: 256,
        ..CycleSearch::default()
    }
}
