//! Model parameters, phase-plane state and the FitzHugh–Nagumo vector field.
//!
//! The drift is `f(v, w) = v(a - v)(v - 1) - w`, `g(v, w) = b v - c w`. On the
//! fast time scale the system reads `dv = f dt + σ dW`, `dw = ε g dt`; on the
//! slow scale `τ = ε t` it reads `dv = f/ε dτ + σ/√ε dW`, `dw = g dτ`.

use std::ops::{Add, Mul, Sub};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters `(a, b, c, ε, σ)`. Immutable once constructed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    a: f64,
    b: f64,
    c: f64,
    epsilon: f64,
    sigma: f64,
}

impl ModelParams {
    pub fn new(a: f64, b: f64, c: f64, epsilon: f64, sigma: f64) -> Result<Self> {
        fn finite(name: &'static str, x: f64) -> Result<()> {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("{x} is not finite"),
                })
            }
        }
        finite("a", a)?;
        finite("b", b)?;
        finite("c", c)?;
        finite("epsilon", epsilon)?;
        finite("sigma", sigma)?;
        let positive = |name: &'static str, x: f64| {
            if x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be > 0, got {x}"),
                })
            }
        };
        positive("b", b)?;
        positive("c", c)?;
        positive("epsilon", epsilon)?;
        if sigma < 0.0 {
            return Err(Error::InvalidParameter {
                name: "sigma",
                reason: format!("must be >= 0, got {sigma}"),
            });
        }
        Ok(Self {
            a,
            b,
            c,
            epsilon,
            sigma,
        })
    }

    /// The bistable parameter set `a = -0.05, b = 1, c = 2` at the given ε, noise-free.
    pub fn bistable(epsilon: f64) -> Result<Self> {
        Self::new(-0.05, 1.0, 2.0, epsilon, 0.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.a, self.b, self.c, epsilon, self.sigma)
    }

    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Self::new(self.a, self.b, self.c, self.epsilon, sigma)
    }

    /// Cubic nonlinearity `f(v, w)`.
    #[inline]
    pub fn f(&self, v: f64, w: f64) -> f64 {
        v * (self.a - v) * (v - 1.0) - w
    }

    /// Linear recovery `g(v, w)`.
    #[inline]
    pub fn g(&self, v: f64, w: f64) -> f64 {
        self.b * v - self.c * w
    }

    /// `∂f/∂v = -3v² + 2(a+1)v - a`.
    #[inline]
    pub fn df_dv(&self, v: f64) -> f64 {
        -3.0 * v * v + 2.0 * (self.a + 1.0) * v - self.a
    }

    /// Fast-scale drift `(f, εg)` without allocation.
    #[inline]
    pub fn fast_drift(&self, v: f64, w: f64) -> (f64, f64) {
        (self.f(v, w), self.epsilon * self.g(v, w))
    }

    /// Jacobian of the fast-scale drift at `(v, w)`.
    pub fn jacobian(&self, s: PhaseState) -> Matrix2<f64> {
        Matrix2::new(
            self.df_dv(s.v),
            -1.0,
            self.epsilon * self.b,
            -self.epsilon * self.c,
        )
    }
}

/// A point `(v, w)` in the phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseState {
    pub v: f64,
    pub w: f64,
}

impl PhaseState {
    pub const ORIGIN: PhaseState = PhaseState { v: 0.0, w: 0.0 };

    pub const fn new(v: f64, w: f64) -> Self {
        Self { v, w }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.w.is_finite()
    }

    pub fn norm(&self) -> f64 {
        self.v.hypot(self.w)
    }

    pub fn dot(&self, other: PhaseState) -> f64 {
        self.v * other.v + self.w * other.w
    }

    pub fn distance(&self, other: PhaseState) -> f64 {
        (*self - other).norm()
    }
}

impl Add for PhaseState {
    type Output = PhaseState;
    fn add(self, rhs: PhaseState) -> PhaseState {
        PhaseState::new(self.v + rhs.v, self.w + rhs.w)
    }
}

impl Sub for PhaseState {
    type Output = PhaseState;
    fn sub(self, rhs: PhaseState) -> PhaseState {
        PhaseState::new(self.v - rhs.v, self.w - rhs.w)
    }
}

impl Mul<f64> for PhaseState {
    type Output = PhaseState;
    fn mul(self, k: f64) -> PhaseState {
        PhaseState::new(self.v * k, self.w * k)
    }
}

/// Which time variable the equations are written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeScale {
    /// Slow time `τ`.
    Slow,
    /// Fast time `t = τ/ε`; all numerics run here.
    Fast,
}

/// Deterministic drift on the requested time scale.
pub fn vector_field(params: &ModelParams, s: PhaseState, scale: TimeScale) -> PhaseState {
    let f = params.f(s.v, s.w);
    let g = params.g(s.v, s.w);
    match scale {
        TimeScale::Fast => PhaseState::new(f, params.epsilon * g),
        TimeScale::Slow => PhaseState::new(f / params.epsilon, g),
    }
}

/// Coefficient of `dW` in the v-equation; the w-equation carries no noise.
pub fn diffusion_coefficient(params: &ModelParams, scale: TimeScale) -> f64 {
    match scale {
        TimeScale::Fast => params.sigma,
        TimeScale::Slow => params.sigma / params.epsilon.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn origin_is_equilibrium() {
        let p = ModelParams::new(-0.05, 1.0, 2.0, 0.02785, 0.0).unwrap();
        let d = vector_field(&p, PhaseState::ORIGIN, TimeScale::Fast);
        assert_eq!(d, PhaseState::ORIGIN);
    }

    #[test]
    fn cubic_root_at_one() {
        let p = ModelParams::new(-0.05, 1.0, 2.0, 0.02785, 0.0).unwrap();
        let d = vector_field(&p, PhaseState::new(1.0, 0.0), TimeScale::Fast);
        assert_eq!(d.v, 0.0);
        assert_relative_eq!(d.w, 0.02785, max_relative = 1e-15);
    }

    #[test]
    fn hand_evaluated_drift() {
        let p = ModelParams::new(-0.05, 1.0, 2.0, 0.1, 0.0).unwrap();
        let d = vector_field(&p, PhaseState::new(0.5, 0.1), TimeScale::Fast);
        assert_relative_eq!(d.v, 0.0375, max_relative = 1e-12);
        assert_relative_eq!(d.w, 0.03, max_relative = 1e-12);
    }

    #[test]
    fn diffusion_on_both_scales() {
        let p = ModelParams::new(-0.05, 1.0, 2.0, 0.3, 0.0).unwrap();
        assert_eq!(diffusion_coefficient(&p, TimeScale::Fast), 0.0);
        let p = ModelParams::new(-0.05, 1.0, 2.0, 0.04, 1e-4).unwrap();
        assert_relative_eq!(
            diffusion_coefficient(&p, TimeScale::Slow),
            5e-4,
            max_relative = 1e-12
        );
        assert_eq!(diffusion_coefficient(&p, TimeScale::Fast), 1e-4);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ModelParams::new(-0.05, 0.0, 2.0, 0.02, 0.0).is_err());
        assert!(ModelParams::new(-0.05, 1.0, -2.0, 0.02, 0.0).is_err());
        assert!(ModelParams::new(-0.05, 1.0, 2.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(-0.05, 1.0, 2.0, 0.02, -1e-3).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 2.0, 0.02, 0.0).is_err());
        assert!(ModelParams::new(0.1, 1.0, f64::INFINITY, 0.02, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn slow_and_fast_drifts_are_parallel(
            v in -2.0f64..2.0, w in -1.0f64..1.0, eps in 1e-3f64..0.9,
        ) {
            let p = ModelParams::new(-0.05, 1.0, 2.0, eps, 0.0).unwrap();
            let s = PhaseState::new(v, w);
            let fast = vector_field(&p, s, TimeScale::Fast);
            let slow = vector_field(&p, s, TimeScale::Slow);
            prop_assert!((slow.v - fast.v / eps).abs() <= 1e-12 * (1.0 + slow.v.abs()));
            prop_assert!((slow.w - fast.w / eps).abs() <= 1e-12 * (1.0 + slow.w.abs()));
        }

        #[test]
        fn cubic_is_odd_when_a_is_minus_one(
            v in -2.0f64..2.0, w in -1.0f64..1.0, b in 0.1f64..3.0, c in 0.1f64..3.0,
        ) {
            let p = ModelParams::new(-1.0, b, c, 0.05, 0.0).unwrap();
            let lhs = p.f(-v, -w);
            let rhs = -p.f(v, w);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }
}
