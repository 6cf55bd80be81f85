//! Fixed points, their linear stability, Hopf conditions and the critical
//! manifold `f(v, w) = 0` of the singular limit.

use nalgebra::{Complex, Matrix2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, PhaseState};

/// Band around `trace = 0` that is reported as marginal.
pub const MARGINAL_TRACE_TOL: f64 = 1e-9;
/// Tolerance of the degenerate-coincidence tests.
pub const COINCIDENCE_TOL: f64 = 1e-10;
/// Distance from a fold inside which the slow flow is reported singular.
pub const FOLD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub location: PhaseState,
    /// Fast-scale Jacobian.
    #[serde(skip)]
    pub jacobian: Matrix2<f64>,
    pub trace: f64,
    pub determinant: f64,
    #[serde(skip)]
    pub eigenvalues: [Complex<f64>; 2],
    pub stability: Stability,
}

impl FixedPointReport {
    fn classify(params: &ModelParams, location: PhaseState) -> Self {
        let jacobian = params.jacobian(location);
        let trace = jacobian.trace();
        let determinant = jacobian.determinant();
        let eigenvalues = eigenvalues_2x2(trace, determinant);
        let stability = if determinant > 0.0 && trace.abs() <= MARGINAL_TRACE_TOL {
            Stability::Marginal
        } else if determinant > 0.0 && trace < 0.0 {
            Stability::Stable
        } else {
            Stability::Unstable
        };
        Self {
            location,
            jacobian,
            trace,
            determinant,
            eigenvalues,
            stability,
        }
    }

    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues[0].re.max(self.eigenvalues[1].re)
    }
}

/// Roots of `λ² - tr λ + det = 0`.
pub fn eigenvalues_2x2(trace: f64, det: f64) -> [Complex<f64>; 2] {
    let half = 0.5 * trace;
    let disc = half * half - det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        [Complex::new(half - r, 0.0), Complex::new(half + r, 0.0)]
    } else {
        let r = (-disc).sqrt();
        [Complex::new(half, -r), Complex::new(half, r)]
    }
}

/// All equilibria, sorted by `v`. `v₀ = 0` always exists; the pair
/// `v₁,₂ = (a+1)/2 ± √((a-1)²/4 - b/c)` exists when the radicand is non-negative.
pub fn fixed_points(params: &ModelParams) -> Vec<FixedPointReport> {
    let (a, b, c) = (params.a(), params.b(), params.c());
    let ratio = b / c;
    let mut abscissae = vec![0.0];
    let radicand = (a - 1.0) * (a - 1.0) / 4.0 - ratio;
    if radicand >= 0.0 {
        let mid = (a + 1.0) / 2.0;
        let r = radicand.sqrt();
        abscissae.push(mid - r);
        abscissae.push(mid + r);
    }
    abscissae.sort_by(|x, y| x.total_cmp(y));
    abscissae
        .into_iter()
        .map(|v| {
            let s = newton_polish(params, PhaseState::new(v, ratio * v));
            FixedPointReport::classify(params, s)
        })
        .collect()
}

/// One Newton step on `(f, g) = 0`.
fn newton_polish(params: &ModelParams, s: PhaseState) -> PhaseState {
    let jac = Matrix2::new(params.df_dv(s.v), -1.0, params.b(), -params.c());
    let rhs = nalgebra::Vector2::new(params.f(s.v, s.w), params.g(s.v, s.w));
    match jac.lu().solve(&rhs) {
        Some(delta) if delta.iter().all(|d| d.is_finite()) => {
            PhaseState::new(s.v - delta[0], s.w - delta[1])
        }
        _ => s,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegenerateConditions {
    /// `v₁ = v₂`: `(a-1)²/4 = b/c`.
    pub saddle_node_fp: bool,
    /// `v₀ = v₁`: `b/c = -a`.
    pub merge_with_origin: bool,
}

pub fn degenerate_conditions(params: &ModelParams) -> DegenerateConditions {
    let (a, b, c) = (params.a(), params.b(), params.c());
    DegenerateConditions {
        saddle_node_fp: ((a - 1.0).powi(2) / 4.0 - b / c).abs() <= COINCIDENCE_TOL,
        merge_with_origin: (b / c + a).abs() <= COINCIDENCE_TOL,
    }
}

/// Hopf value of ε at the origin, `ε = -a/c`, defined for `a < 0` only.
pub fn hopf_epsilon_origin(params: &ModelParams) -> Option<f64> {
    (params.a() < 0.0).then(|| -params.a() / params.c())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfLocus {
    /// Abscissae where the trace vanishes, empty when `3εc > a² - a + 1`.
    pub v_candidates: Vec<f64>,
    /// Whether the Jacobian at the supplied abscissa has a complex pair.
    pub complex_pair: bool,
    /// Left minus right side of the Hopf condition at the pair `v₁,₂`.
    pub residual: f64,
}

pub fn hopf_locus(params: &ModelParams, v_star: f64) -> HopfLocus {
    let (a, b, c, eps) = (params.a(), params.b(), params.c(), params.epsilon());
    let mut v_candidates = Vec::new();
    if 3.0 * eps * c <= a * a - a + 1.0 {
        let mid = (a + 1.0) / 3.0;
        let r = ((a * a - a + 1.0 - 3.0 * eps * c) / 9.0).max(0.0).sqrt();
        v_candidates.push(mid - r);
        v_candidates.push(mid + r);
    }
    let slope = params.df_dv(v_star) / eps;
    let bound = 2.0 * (b / eps).sqrt();
    let complex_pair = slope + c - bound < 0.0 && slope + c + bound > 0.0;
    HopfLocus {
        v_candidates,
        complex_pair,
        residual: hopf_residual(a, b, c, eps),
    }
}

/// `(a-1)²(-a - 2b/c) + 4ab/c + 9b²/c² + ε²c² - ε(-(a-1)²c + 6b)`.
pub fn hopf_residual(a: f64, b: f64, c: f64, eps: f64) -> f64 {
    let r = b / c;
    let am1 = (a - 1.0) * (a - 1.0);
    am1 * (-a - 2.0 * r) + 4.0 * a * r + 9.0 * r * r + eps * eps * c * c
        - eps * (-am1 * c + 6.0 * b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `v < v₋`, attracting.
    LeftDescending,
    /// `v₋ < v < v₊`, repelling.
    Middle,
    /// `v > v₊`, attracting.
    RightDescending,
    Fold,
}

/// Critical manifold `w = -v³ + (a+1)v² - av` and its folds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ManifoldGeometry {
    pub a: f64,
    pub fold_lower: f64,
    pub fold_upper: f64,
}

impl ManifoldGeometry {
    /// `w` on the manifold.
    pub fn height(&self, v: f64) -> f64 {
        -v * v * v + (self.a + 1.0) * v * v - self.a * v
    }

    /// `dw/dv` along the manifold.
    pub fn slope(&self, v: f64) -> f64 {
        -3.0 * v * v + 2.0 * (self.a + 1.0) * v - self.a
    }

    pub fn branch(&self, v: f64) -> Branch {
        if (v - self.fold_lower).abs() <= FOLD_TOL || (v - self.fold_upper).abs() <= FOLD_TOL {
            Branch::Fold
        } else if v < self.fold_lower {
            Branch::LeftDescending
        } else if v < self.fold_upper {
            Branch::Middle
        } else {
            Branch::RightDescending
        }
    }

    /// `(v, sign(dw/dv))` on an even grid over `[lo, hi]`.
    pub fn slope_signs(&self, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        let n = n.max(2);
        (0..n)
            .map(|i| {
                let v = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                (v, self.slope(v).signum())
            })
            .collect()
    }
}

pub fn critical_manifold(params: &ModelParams) -> ManifoldGeometry {
    let a = params.a();
    let mid = (a + 1.0) / 3.0;
    let r = ((a + 1.0) * (a + 1.0) / 9.0 - a / 3.0).sqrt();
    ManifoldGeometry {
        a,
        fold_lower: mid - r,
        fold_upper: mid + r,
    }
}

/// Reduced flow `dv/dτ` on the critical manifold.
pub fn slow_flow(params: &ModelParams, v: f64) -> Result<f64> {
    let m = critical_manifold(params);
    for fold in [m.fold_lower, m.fold_upper] {
        if (v - fold).abs() < FOLD_TOL {
            return Err(Error::SingularPoint { v, fold });
        }
    }
    let numerator = params.b() * v - params.c() * m.height(v);
    Ok(numerator / m.slope(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(a: f64, b: f64, c: f64, eps: f64) -> ModelParams {
        ModelParams::new(a, b, c, eps, 0.0).unwrap()
    }

    #[test]
    fn single_stable_origin_in_bistable_window() {
        let fps = fixed_points(&p(-0.05, 1.0, 2.0, 0.02785));
        assert_eq!(fps.len(), 1);
        assert_eq!(fps[0].location, PhaseState::ORIGIN);
        assert_eq!(fps[0].stability, Stability::Stable);
    }

    #[test]
    fn three_fixed_points() {
        let params = p(2.0, 1.0, 8.0, 0.1);
        let fps = fixed_points(&params);
        let vs: Vec<f64> = fps.iter().map(|r| r.location.v).collect();
        assert_eq!(vs.len(), 3);
        assert!(vs[0].abs() < 1e-15);
        assert_relative_eq!(vs[1], 1.5 - 0.125f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(vs[2], 1.5 + 0.125f64.sqrt(), max_relative = 1e-12);
        assert!((vs[1] - 1.14645).abs() < 1e-5 && (vs[2] - 1.85355).abs() < 1e-5);
        let st: Vec<Stability> = fps.iter().map(|r| r.stability).collect();
        assert_eq!(st, [Stability::Stable, Stability::Unstable, Stability::Stable]);
        for r in &fps {
            assert!(params.f(r.location.v, r.location.w).abs() <= 1e-12);
            assert!(params.g(r.location.v, r.location.w).abs() <= 1e-12);
            assert_relative_eq!(r.location.w, r.location.v / 8.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn symmetric_pair_for_a_minus_one() {
        let fps = fixed_points(&p(-1.0, 2.0, 3.0, 0.01));
        assert_eq!(fps.len(), 3);
        assert_relative_eq!(fps[0].location.v, -fps[2].location.v, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_coincidences() {
        let d = degenerate_conditions(&p(-1.0, 2.0, 2.0, 0.1));
        assert!(d.saddle_node_fp && d.merge_with_origin);
        let d = degenerate_conditions(&p(-0.05, 1.0, 2.0, 0.1));
        assert!(!d.saddle_node_fp && !d.merge_with_origin);
        let d = degenerate_conditions(&p(3.0, 1.0, 1.0, 0.1));
        assert!(d.saddle_node_fp);
    }

    #[test]
    fn hopf_value_at_origin() {
        assert_eq!(hopf_epsilon_origin(&p(-0.05, 1.0, 2.0, 0.1)), Some(0.025));
        assert_eq!(hopf_epsilon_origin(&p(0.3, 1.0, 2.0, 0.1)), None);
        assert_relative_eq!(
            hopf_epsilon_origin(&p(-0.2, 1.0, 4.0, 0.1)).unwrap(),
            0.05,
            max_relative = 1e-15
        );
    }

    #[test]
    fn hopf_value_matches_trace_root() {
        // trace at the origin is -a - εc; bisect it independently
        let base = p(-0.05, 1.0, 2.0, 0.02);
        let trace = |e: f64| base.with_epsilon(e).unwrap().jacobian(PhaseState::ORIGIN).trace();
        let (mut lo, mut hi) = (0.001, 0.5);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if trace(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((0.5 * (lo + hi) - hopf_epsilon_origin(&base).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn purely_imaginary_pair_at_hopf() {
        let params = p(-0.05, 1.0, 2.0, 0.025);
        let fp = &fixed_points(&params)[0];
        assert!(fp.eigenvalues[0].re.abs() <= 1e-10);
        assert!(fp.eigenvalues[0].im != 0.0);
        assert_eq!(fp.stability, Stability::Marginal);
        // c² < b/ε
        assert!(params.c().powi(2) < params.b() / params.epsilon());
    }

    #[test]
    fn hopf_residual_special_cases() {
        // a = -1: zero on 3b/c - 2 = εc
        let (c, eps) = (1.5, 0.04);
        let b = c * (2.0 + eps * c) / 3.0;
        assert!(hopf_residual(-1.0, b, c, eps).abs() < 1e-12);
        assert!(hopf_residual(-1.0, b * 1.01, c, eps).abs() > 1e-8);
        // ε = 0, a = -1: zero at b/c = 2/3
        assert!(hopf_residual(-1.0, 2.0, 3.0, 0.0).abs() < 1e-12);
    }

    #[test]
    fn hopf_candidates_need_room() {
        let h = hopf_locus(&p(-0.05, 1.0, 2.0, 0.2), 0.0);
        assert!(h.v_candidates.is_empty());
        let h = hopf_locus(&p(-0.05, 1.0, 2.0, 0.025), 0.0);
        assert_eq!(h.v_candidates.len(), 2);
        assert!(h.v_candidates.iter().any(|v| v.abs() < 1e-12));
        assert!(h.complex_pair);
    }

    #[test]
    fn fold_points() {
        let m = critical_manifold(&p(-0.05, 1.0, 2.0, 0.02));
        assert!((m.fold_lower + 0.025305).abs() < 1e-6);
        assert!((m.fold_upper - 0.658638).abs() < 1e-6);
        let m = critical_manifold(&p(-1.0, 1.0, 2.0, 0.02));
        assert_relative_eq!(m.fold_lower, -1.0 / 3f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(m.fold_upper, 1.0 / 3f64.sqrt(), epsilon = 1e-14);
        let m = critical_manifold(&p(1.0, 1.0, 2.0, 0.02));
        assert_relative_eq!(m.fold_lower, 1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(m.fold_upper, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn folds_are_quadratic_roots_and_branches_have_expected_slopes() {
        for a in [-0.9, -0.05, 0.0, 0.3, 2.0] {
            let m = critical_manifold(&p(a, 1.0, 2.0, 0.02));
            // -3v² + 2(a+1)v - a = 0 by the quadratic formula
            let disc = (4.0 * (a + 1.0).powi(2) - 12.0 * a).sqrt();
            let r1 = (-2.0 * (a + 1.0) + disc) / -6.0;
            let r2 = (-2.0 * (a + 1.0) - disc) / -6.0;
            assert!((m.fold_lower - r1.min(r2)).abs() <= 1e-12);
            assert!((m.fold_upper - r1.max(r2)).abs() <= 1e-12);
            assert!(m.slope(m.fold_lower).abs() <= 1e-10);
            assert!(m.slope(m.fold_upper).abs() <= 1e-10);
            for (v, sign) in m.slope_signs(-3.0, 3.0, 601) {
                match m.branch(v) {
                    Branch::LeftDescending | Branch::RightDescending => assert_eq!(sign, -1.0),
                    Branch::Middle => assert_eq!(sign, 1.0),
                    Branch::Fold => {}
                }
            }
        }
    }

    #[test]
    fn slow_flow_values() {
        let params = p(2.0, 1.0, 8.0, 0.1);
        assert_relative_eq!(slow_flow(&params, 0.5).unwrap(), 14.0, max_relative = 1e-12);
        for fp in fixed_points(&params) {
            assert!(slow_flow(&params, fp.location.v).unwrap().abs() < 1e-10);
        }
        let params = p(-0.05, 1.0, 2.0, 0.02);
        let m = critical_manifold(&params);
        assert!(matches!(
            slow_flow(&params, m.fold_lower + 1e-9),
            Err(Error::SingularPoint { .. })
        ));
        assert!(matches!(
            slow_flow(&params, m.fold_lower - 1e-9),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn descending_branch_fixed_points_are_stable() {
        for &(a, b, c) in &[(2.0, 1.0, 8.0), (0.2, 0.05, 1.0), (-1.0, 0.3, 1.0)] {
            for k in 1..40 {
                let eps = k as f64 / 40.0;
                let params = p(a, b, c, eps);
                let m = critical_manifold(&params);
                for fp in fixed_points(&params) {
                    if m.slope(fp.location.v) < 0.0 {
                        assert_eq!(fp.stability, Stability::Stable, "a={a} eps={eps}");
                    }
                }
            }
        }
    }
}
