//! Monte Carlo stationary covariance around the fixed point against the
//! Lyapunov solution.

use fhn_isr::ssf::{empirical_covariance_check, ssf_fixed_point};
use fhn_isr::ModelParams;

fn main() -> fhn_isr::Result<()> {
    let p = ModelParams::bistable(0.0266)?.with_sigma(1e-6)?;
    let s = ssf_fixed_point(&p)?;
    println!("Lyapunov solution:{}", s.omega);
    println!("lyapunov residual {:.1e}", s.lyapunov_residual(&p.jacobian(s.location)));
    let empirical = empirical_covariance_check(&p, 40, 2000.0, 1)?;
    println!("empirical / sigma^2:{empirical}");
    Ok(())
}
