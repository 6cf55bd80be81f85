//! Stochastic sensitivity of the fixed point (algebraic Lyapunov equation) and
//! of the stable cycle (periodic scalar boundary problem).

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector2, Vector4};
use rayon::prelude::*;
use serde::Serialize;

use crate::det_analysis::fixed_points;
use crate::error::{Error, Result};
use crate::model::{ModelParams, PhaseState};
use crate::orbits::{Cycle, CycleKind};
use crate::sde::{self, NoiseStream, Scheme};

/// Diffusion matrix of the additive noise, `diag(1, 0)`.
pub fn diffusion_matrix() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointSensitivity {
    pub location: PhaseState,
    #[serde(skip)]
    pub omega: Matrix2<f64>,
    /// `(λ₁, λ₂)` with `λ₁ ≤ λ₂`.
    pub eigenvalues: (f64, f64),
    #[serde(skip)]
    pub eigenvectors: (Vector2<f64>, Vector2<f64>),
    #[serde(skip)]
    pub omega_inverse: Matrix2<f64>,
}

impl FixedPointSensitivity {
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.1
    }

    /// `‖JΩ + ΩJᵀ + G‖` for the given Jacobian.
    pub fn lyapunov_residual(&self, jacobian: &Matrix2<f64>) -> f64 {
        (jacobian * self.omega + self.omega * jacobian.transpose() + diffusion_matrix()).norm()
    }
}

/// Solves `JΩ + ΩJᵀ + G = 0` at the stable fixed point closest to the origin.
pub fn ssf_fixed_point(params: &ModelParams) -> Result<FixedPointSensitivity> {
    let fp = fixed_points(params)
        .into_iter()
        .min_by(|x, y| x.location.norm().total_cmp(&y.location.norm()))
        .expect("the origin is always an equilibrium");
    let max_re = fp.max_real_part();
    if max_re >= 0.0 {
        return Err(Error::NotExponentiallyStable {
            max_real_part: max_re,
        });
    }
    let j = fp.jacobian;
    let g = diffusion_matrix();
    // unknowns (Ω11, Ω12, Ω21, Ω22), row-major
    #[rustfmt::skip]
    let system = Matrix4::new(
        2.0 * j[(0, 0)], j[(0, 1)],            j[(0, 1)],            0.0,
        j[(1, 0)],       j[(0, 0)] + j[(1, 1)], 0.0,                  j[(0, 1)],
        j[(1, 0)],       0.0,                  j[(0, 0)] + j[(1, 1)], j[(0, 1)],
        0.0,             j[(1, 0)],            j[(1, 0)],            2.0 * j[(1, 1)],
    );
    let rhs = -Vector4::new(g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let x = system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Precondition("singular Lyapunov system".into()))?;
    let omega = Matrix2::new(x[0], x[1], x[2], x[3]);
    let sym = 0.5 * (omega + omega.transpose());
    let eig = SymmetricEigen::new(sym);
    let (i1, i2) = if eig.eigenvalues[0] <= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let u1: Vector2<f64> = eig.eigenvectors.column(i1).into_owned().normalize();
    let u2: Vector2<f64> = eig.eigenvectors.column(i2).into_owned().normalize();
    let omega_inverse = omega
        .try_inverse()
        .ok_or_else(|| Error::Precondition("singular sensitivity matrix".into()))?;
    Ok(FixedPointSensitivity {
        location: fp.location,
        omega,
        eigenvalues: (eig.eigenvalues[i1], eig.eigenvalues[i2]),
        eigenvectors: (u1, u2),
        omega_inverse,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleSensitivity {
    /// `μ(t)` on the cycle grid, `M + 1` values.
    pub mu: Vec<f64>,
    #[serde(skip)]
    pub q: Vec<Vector2<f64>>,
    /// Projector onto the normal direction, `qqᵀ`.
    #[serde(skip)]
    pub projector: Vec<Matrix2<f64>>,
    #[serde(skip)]
    pub theta: Vec<Matrix2<f64>>,
    #[serde(skip)]
    pub theta_plus: Vec<Matrix2<f64>>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// `|x'(t)|²` along the cycle.
    pub speed_sq: Vec<f64>,
    /// `∫₀ᵀ α`; negative for an exponentially stable cycle.
    pub alpha_integral: f64,
    pub mu_max: f64,
    /// `max_t μ(t)|x'(t)|²`.
    pub ssf_max: f64,
}

/// Periodic sensitivity of the stable cycle.
pub fn ssf_cycle(params: &ModelParams, cycle: &Cycle) -> Result<CycleSensitivity> {
    if cycle.kind != CycleKind::StableLC {
        return Err(Error::Precondition("cycle sensitivity needs the stable cycle".into()));
    }
    let eps = params.epsilon();
    let (b, c) = (params.b(), params.c());
    let n = cycle.samples.len();
    let mut q = Vec::with_capacity(n);
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    let mut speed_sq = Vec::with_capacity(n);
    for (index, &(_, s)) in cycle.samples.iter().enumerate() {
        let f = params.f(s.v, s.w);
        let g = params.g(s.v, s.w);
        let fv = params.df_dv(s.v);
        let n2 = f * f + eps * eps * g * g;
        let speed = n2.sqrt();
        if speed < 1e-10 {
            return Err(Error::DegenerateSpeed { index, speed });
        }
        q.push(Vector2::new(-eps * g, f) / speed);
        alpha.push(
            (2.0 * eps * eps * fv * g * g - 2.0 * eps * (eps * b - 1.0) * g * f - 2.0 * eps * c * f * f)
                / n2,
        );
        beta.push(eps * eps * g * g / n2);
        speed_sq.push(n2);
    }

    let h = cycle.spacing();
    let mut a_int = vec![0.0; n];
    for i in 1..n {
        a_int[i] = a_int[i - 1] + 0.5 * h * (alpha[i] + alpha[i - 1]);
    }
    let weighted: Vec<f64> = (0..n).map(|i| beta[i] * (-a_int[i]).exp()).collect();
    let mut b_int = vec![0.0; n];
    for i in 1..n {
        b_int[i] = b_int[i - 1] + 0.5 * h * (weighted[i] + weighted[i - 1]);
    }
    let a_t = a_int[n - 1];
    let growth = a_t.exp();
    let constant = growth * b_int[n - 1] / (1.0 - growth);
    let mu: Vec<f64> = (0..n).map(|i| a_int[i].exp() * (b_int[i] + constant)).collect();

    let projector: Vec<Matrix2<f64>> = q.iter().map(|v| v * v.transpose()).collect();
    let theta = projector.iter().zip(&mu).map(|(p, m)| p * *m).collect();
    let theta_plus = projector.iter().zip(&mu).map(|(p, m)| p / *m).collect();
    let mu_max = mu.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ssf_max = mu
        .iter()
        .zip(&speed_sq)
        .map(|(m, s)| m * s)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(CycleSensitivity {
        mu,
        q,
        projector,
        theta,
        theta_plus,
        alpha,
        beta,
        speed_sq,
        alpha_integral: a_t,
        mu_max,
        ssf_max,
    })
}

impl CycleSensitivity {
    /// `max_i |μ'(t_i) - α μ - β|` by central differences on the periodic grid.
    pub fn boundary_residual(&self, spacing: f64) -> f64 {
        let m = self.mu.len() - 1;
        (0..m)
            .map(|i| {
                let next = self.mu[(i + 1) % m];
                let prev = self.mu[(i + m - 1) % m];
                let d = (next - prev) / (2.0 * spacing);
                (d - self.alpha[i] * self.mu[i] - self.beta[i]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Monte Carlo estimate of the stationary covariance at the fixed point,
/// divided by `σ²`.
///
/// Each trial starts at the fixed point and runs a transient of five e-folding
/// times of the covariance (capped at `horizon`), then samples every time unit
/// for `horizon`. A trial that moves 0.25 away in `v` counts as escaped.
pub fn empirical_covariance_check(
    params: &ModelParams,
    trials: usize,
    horizon: f64,
    seed: u64,
) -> Result<Matrix2<f64>> {
    let sigma = params.sigma();
    if sigma <= 0.0 {
        return Err(Error::Precondition("sigma must be > 0 to normalise the covariance".into()));
    }
    if trials == 0 || !(horizon > 0.0) {
        return Err(Error::Precondition("need at least one trial and a positive horizon".into()));
    }
    let fp = ssf_fixed_point(params)?;
    let decay = -fp_decay_rate(params)?;
    let dt = crate::orbits::DEFAULT_DT;
    let transient = (2.5 / decay).min(horizon);
    let n_transient = (transient / dt).round() as usize;
    let n_sample = (horizon / dt).round() as usize;
    let stride = (1.0 / dt).round() as usize;
    let center = fp.location;

    let per_trial: Vec<Result<Option<[f64; 5]>>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut stream = NoiseStream::new(seed, trial as u64);
            let sqrt_dt = dt.sqrt();
            let mut s = center;
            let mut sums = [0.0; 5];
            for i in 0..n_transient + n_sample {
                let dw = sqrt_dt * stream.normal();
                s = sde::step(params, s, dt, dw, Scheme::StochasticRK4).map_err(|e| Error::Trial {
                    trial,
                    source: Box::new(e),
                })?;
                if (s.v - center.v).abs() >= 0.25 {
                    return Ok(None);
                }
                if i >= n_transient && (i - n_transient) % stride == 0 {
                    let (x, y) = (s.v - center.v, s.w - center.w);
                    sums[0] += x;
                    sums[1] += y;
                    sums[2] += x * x;
                    sums[3] += x * y;
                    sums[4] += y * y;
                }
            }
            Ok(Some(sums))
        })
        .collect();

    let mut total = [0.0; 5];
    let mut escaped = 0;
    for r in per_trial {
        match r? {
            Some(s) => (0..5).for_each(|k| total[k] += s[k]),
            None => escaped += 1,
        }
    }
    if escaped > 0 {
        return Err(Error::BasinEscape { escaped, trials });
    }
    let count = (trials * n_sample.div_ceil(stride)) as f64;
    let (mx, my) = (total[0] / count, total[1] / count);
    let scale = sigma * sigma;
    let cxx = (total[2] / count - mx * mx) / scale;
    let cxy = (total[3] / count - mx * my) / scale;
    let cyy = (total[4] / count - my * my) / scale;
    Ok(Matrix2::new(cxx, cxy, cxy, cyy))
}

fn fp_decay_rate(params: &ModelParams) -> Result<f64> {
    let fp = fixed_points(params)
        .into_iter()
        .min_by(|x, y| x.location.norm().total_cmp(&y.location.norm()))
        .expect("the origin is always an equilibrium");
    let r = fp.max_real_part();
    if r >= 0.0 {
        return Err(Error::NotExponentiallyStable { max_real_part: r });
    }
    Ok(r)
}
