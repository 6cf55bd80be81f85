//! Deterministic skeleton across epsilon: fixed points, the Hopf value at the
//! origin, the saddle-node of cycles and the stable cycle's period.
//!
//! ```text
//! cargo run --example bifurcation
//! ```

use fhn_isr::det_analysis::{critical_manifold, fixed_points, hopf_epsilon_origin};
use fhn_isr::orbits::{find_stable_cycle, saddle_node_epsilon};
use fhn_isr::ModelParams;

fn main() -> fhn_isr::Result<()> {
    let base = ModelParams::bistable(0.026)?;
    let m = critical_manifold(&base);
    println!("folds at v = {:.5} and {:.5}", m.fold_lower, m.fold_upper);
    println!("Hopf at origin: epsilon = {:?}", hopf_epsilon_origin(&base));
    let eps_sn = saddle_node_epsilon(&base, (0.026, 0.029))?;
    println!("saddle-node of cycles: epsilon = {eps_sn:.6}");

    for fp in fixed_points(&base) {
        println!(
            "fixed point ({:+.5}, {:+.5}): {:?}, eigenvalues {:.4} / {:.4}",
            fp.location.v, fp.location.w, fp.stability, fp.eigenvalues[0], fp.eigenvalues[1]
        );
    }

    println!("\nepsilon    period");
    for eps in [0.0245, 0.02501, 0.026, 0.0266, 0.0275, 0.02785, 0.0279] {
        let p = base.with_epsilon(eps)?;
        match find_stable_cycle(&p) {
            Some(c) => println!("{eps:<10} {:.3}", c.period),
            None => println!("{eps:<10} no cycle"),
        }
    }
    Ok(())
}
