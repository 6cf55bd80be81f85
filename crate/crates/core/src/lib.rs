//! Noise-driven FitzHugh–Nagumo neuron in its bistable regime.
//!
//! The crate covers the deterministic skeleton (fixed points, Hopf and fold
//! structure, stable and unstable limit cycles), stochastic sensitivity of
//! both attractors, Mahalanobis distances to the separatrix, an additive-noise
//! SDE integrator, and Monte Carlo spike counting for inverse stochastic
//! resonance sweeps.
//!
//! ```no_run
//! use fhn_isr::{model::ModelParams, orbits, ssf};
//!
//! let params = ModelParams::bistable(0.0266).unwrap();
//! let cycle = orbits::find_stable_cycle(&params).expect("cycle");
//! let fp = ssf::ssf_fixed_point(&params).unwrap();
//! let lc = ssf::ssf_cycle(&params, &cycle).unwrap();
//! println!("fixed point {:.3}, cycle {:.3}", fp.lambda_max(), lc.ssf_max);
//! ```

pub mod cli;
pub mod det_analysis;
pub mod error;
pub mod mahalanobis;
pub mod model;
pub mod orbits;
pub mod sde;
pub mod spikes;
pub mod ssf;

pub use error::{Error, Result};
pub use model::{ModelParams, PhaseState, TimeScale};
