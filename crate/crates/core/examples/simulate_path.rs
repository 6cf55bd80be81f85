//! One noisy trajectory from the cycle basin with its spike train.
//!
//! ```text
//! cargo run --example simulate_path -- 2e-6 > path.csv
//! ```
//!
//! The argument is the noise intensity; the SDE amplitude is its square root.

use fhn_isr::sde::{simulate_strided, NoiseStream, Scheme};
use fhn_isr::spikes::{count_spikes, NoiseScale};
use fhn_isr::{ModelParams, PhaseState};

fn main() -> fhn_isr::Result<()> {
    let intensity: f64 = std::env::args().nth(1).map_or(2e-6, |a| a.parse().expect("sigma"));
    let p = ModelParams::bistable(0.02785)?.with_sigma(NoiseScale::Intensity.amplitude(intensity))?;
    let mut stream = NoiseStream::new(42, 0);
    let path = simulate_strided(&p, PhaseState::new(-0.4, 0.2), 2000.0, 1e-3, &mut stream, Scheme::StochasticRK4, 100)?;
    let spikes = count_spikes(&path, 0.25, 0.0)?;
    eprintln!("{} spikes, last at t = {:?}", spikes.count, spikes.crossing_times.last());
    println!("t,v,w");
    for (i, s) in path.states.iter().enumerate() {
        println!("{:.1},{:.6},{:.6}", i as f64 * path.sample_interval(), s.v, s.w);
    }
    Ok(())
}
