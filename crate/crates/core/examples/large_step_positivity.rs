// Usage: cargo run --release --example large_step_positivity
//
// SIPMM and SIPEM stay positive for step sizes far beyond any stability limit.

use sipmm::harness::positivity_stress;
use sipmm::projection::default_exponent;
use sipmm::ModelParams;

fn main() -> sipmm::Result<()> {
    for (name, p) in [
        ("example1", ModelParams::example1()),
        ("example2", ModelParams::example2()),
        ("example3", ModelParams::example3()),
    ] {
        let report = positivity_stress(p, default_exponent(p.r), &[0.25, 1.0, 10.0, 100.0], 200, 1)?;
        println!("{name}: T = {}", report.t_end);
        for e in &report.entries {
            println!("  {:<6} h = {:<6} min {:.3e}  nonpositive {}", e.scheme.as_str(), e.h, e.min_state, e.nonpositive);
        }
        assert!(report.passed());
    }
    Ok(())
}
