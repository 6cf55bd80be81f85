//! Mean spike count against noise from both basins, and the U-shape test.
//!
//! Small by default; pass `trials horizon` to scale up, e.g.
//! `cargo run --release --example isr_sweep -- 200 7500`.

use std::collections::BTreeMap;

use fhn_isr::orbits::BasinLabel;
use fhn_isr::spikes::{isr_sweep, log_grid, u_shape_metric, verify_basins, SpikeExperiment};
use fhn_isr::{ModelParams, PhaseState};

fn main() -> fhn_isr::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().map_or(20, |a| a.parse().expect("trials"));
    let horizon = args.next().map_or(1000.0, |a| a.parse().expect("horizon"));
    let exp = SpikeExperiment {
        trials,
        horizon,
        seed: 7,
        ..SpikeExperiment::default()
    };
    let ics = BTreeMap::from([
        (BasinLabel::FixedPointBasin, PhaseState::new(0.001, 0.001)),
        (BasinLabel::LimitCycleBasin, PhaseState::new(-0.4, 0.2)),
    ]);
    let eps = [0.0266, 0.02785];
    for &e in &eps {
        verify_basins(&ModelParams::bistable(e)?, &ics)?;
    }
    let grid = log_grid(1e-8, 1e-3, 11, true);
    for sweep in isr_sweep(&ModelParams::bistable(0.026)?, &eps, &ics, &grid, &exp)? {
        let m = u_shape_metric(&sweep)?;
        println!("epsilon {} from {} basin: has_isr = {}", sweep.epsilon, sweep.basin, m.has_isr);
        for (i, s) in sweep.sigma_grid.iter().enumerate() {
            println!("  {s:9.2e}  {:7.2} +- {:.2}", sweep.mean_counts[i], sweep.stderr(i));
        }
    }
    Ok(())
}
