//! Stochastic sensitivity of the fixed point (`lambda1`, `lambda2`) and of the
//! stable cycle (`ssf_max`) across the bistable window, as CSV on stdout.

use fhn_isr::cli::sign_changes;
use fhn_isr::orbits::find_stable_cycle;
use fhn_isr::ssf::{ssf_cycle, ssf_fixed_point};
use fhn_isr::ModelParams;

fn main() -> fhn_isr::Result<()> {
    let n = 20;
    let mut gap = Vec::new();
    println!("epsilon,lambda1,lambda2,ssf_max,mu_max");
    for k in 0..n {
        let eps = 0.02505 + (0.027815 - 0.02505) * k as f64 / (n - 1) as f64;
        let p = ModelParams::bistable(eps)?;
        let fp = ssf_fixed_point(&p)?;
        let Some(cycle) = find_stable_cycle(&p) else {
            eprintln!("no cycle at {eps}");
            continue;
        };
        let lc = ssf_cycle(&p, &cycle)?;
        println!(
            "{eps:.6},{:.6e},{:.6e},{:.6e},{:.6e}",
            fp.eigenvalues.0, fp.eigenvalues.1, lc.ssf_max, lc.mu_max
        );
        gap.push((eps, fp.lambda_max() - lc.ssf_max));
    }
    eprintln!("sensitivities cross at {:?}", sign_changes(&gap));
    Ok(())
}
