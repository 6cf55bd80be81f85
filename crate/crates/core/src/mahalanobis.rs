//! Mahalanobis distances from each attractor's Gaussian cloud to the
//! separatrix.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, PhaseState};
use crate::orbits::Cycle;
use crate::ssf::{CycleSensitivity, FixedPointSensitivity};

/// `√(pᵀ Ω⁻¹ p)` with `p` measured from the fixed point.
pub fn distance_point_to_fixed_point(sensitivity: &FixedPointSensitivity, p: PhaseState) -> f64 {
    let d = p - sensitivity.location;
    let m = &sensitivity.omega_inverse;
    let q = m[(0, 0)] * d.v * d.v + (m[(0, 1)] + m[(1, 0)]) * d.v * d.w + m[(1, 1)] * d.w * d.w;
    q.max(0.0).sqrt()
}

/// `‖p - x̄(t)‖ / √μ(t)` at cycle sample `t_index`.
pub fn distance_point_to_cycle(
    cs: &CycleSensitivity,
    cycle: &Cycle,
    p: PhaseState,
    t_index: usize,
) -> f64 {
    p.distance(cycle.samples[t_index].1) / cs.mu[t_index].sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub d_fp: f64,
    pub d_lc: f64,
    pub argmin_fp: PhaseState,
    /// Cycle phase time and the separatrix sample realising `d_lc`.
    pub argmin_lc: (f64, PhaseState),
    /// Fixed-point distance restricted to the two directions `±U₂`.
    pub d_fp_along_u2: Option<f64>,
}

pub fn minimal_distances(
    fps: &FixedPointSensitivity,
    cs: &CycleSensitivity,
    stable: &Cycle,
    separatrix: &Cycle,
) -> DistanceReport {
    let sep = separatrix.open_states();
    let (d_fp, argmin_fp) = sep
        .iter()
        .map(|&p| (distance_point_to_fixed_point(fps, p), p))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("separatrix has samples");

    let m = stable.intervals();
    let (d2_lc, t_lc, p_lc) = (0..m)
        .into_par_iter()
        .map(|i| {
            let (t, x) = stable.samples[i];
            let inv_mu = 1.0 / cs.mu[i];
            let (d2, p) = sep
                .iter()
                .map(|&p| {
                    let d = p - x;
                    (d.dot(d) * inv_mu, p)
                })
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .expect("separatrix has samples");
            (d2, t, p)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)))
        .expect("cycle has samples");

    let u2 = fps.eigenvectors.1;
    let theta = u2[1].atan2(u2[0]);
    let d_fp_along_u2 = [theta, theta + std::f64::consts::PI]
        .iter()
        .filter_map(|&a| separatrix.ray_radius(fps.location, a).map(|r| (a, r)))
        .map(|(a, r)| {
            let p = fps.location + PhaseState::new(a.cos(), a.sin()) * r;
            distance_point_to_fixed_point(fps, p)
        })
        .min_by(f64::total_cmp);

    DistanceReport {
        d_fp,
        d_lc: d2_lc.sqrt(),
        argmin_fp,
        argmin_lc: (t_lc, p_lc),
        d_fp_along_u2,
    }
}

/// Unnormalised Gaussian weight `exp(-d²/2σ²)`.
pub fn escape_weight(distance: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            reason: format!("must be > 0, got {sigma}"),
        });
    }
    Ok((-(distance * distance) / (2.0 * sigma * sigma)).exp())
}

/// Distances for every piece computed from scratch at one parameter set.
pub fn distances_at(params: &ModelParams) -> Result<DistanceReport> {
    let geometry = crate::orbits::BistableGeometry::compute(params)?;
    let fps = crate::ssf::ssf_fixed_point(params)?;
    let cs = crate::ssf::ssf_cycle(params, &geometry.stable)?;
    Ok(minimal_distances(&fps, &cs, &geometry.stable, &geometry.separatrix.cycle))
}
