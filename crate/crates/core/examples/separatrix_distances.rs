//! Separatrix geometry and Mahalanobis distances at one epsilon.
//!
//! ```text
//! cargo run --example separatrix_distances -- 0.0266
//! ```

use fhn_isr::mahalanobis::{escape_weight, minimal_distances};
use fhn_isr::orbits::BistableGeometry;
use fhn_isr::ssf::{ssf_cycle, ssf_fixed_point};
use fhn_isr::{ModelParams, PhaseState};

fn main() -> fhn_isr::Result<()> {
    let eps: f64 = std::env::args().nth(1).map_or(0.0266, |a| a.parse().expect("epsilon"));
    let p = ModelParams::bistable(eps)?;
    let g = BistableGeometry::compute(&p)?;
    let sep = &g.separatrix.cycle;
    println!(
        "epsilon {eps}: cycle period {:.3}, separatrix period {:.3}, v in [{:.4}, {:.4}]",
        g.stable.period,
        sep.period,
        sep.min_v(),
        sep.max_v()
    );
    println!("classifier margin {:.2e}", g.classifier.margin());

    let fps = ssf_fixed_point(&p)?;
    let cs = ssf_cycle(&p, &g.stable)?;
    let r = minimal_distances(&fps, &cs, &g.stable, sep);
    println!("d_fp = {:.4e} at ({:+.5}, {:+.5})", r.d_fp, r.argmin_fp.v, r.argmin_fp.w);
    println!("d_lc = {:.4e} at cycle phase t = {:.3}", r.d_lc, r.argmin_lc.0);
    if let Some(d) = r.d_fp_along_u2 {
        println!("d_fp along the slow eigenvector = {d:.4e}");
    }

    println!("\nsigma       w_fp         w_lc");
    for sigma in [1e-5, 1e-4, 1e-3] {
        println!(
            "{sigma:<10.0e}  {:.3e}  {:.3e}",
            escape_weight(r.d_fp, sigma)?,
            escape_weight(r.d_lc, sigma)?
        );
    }

    for s in [PhaseState::new(0.001, 0.001), PhaseState::new(-0.4, 0.2)] {
        println!("({:+.3}, {:+.3}) lies in the {} basin", s.v, s.w, g.classifier.classify(s)?);
    }
    Ok(())
}
