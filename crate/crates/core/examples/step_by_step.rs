// Usage: cargo run --example step_by_step
//
// Single steps from the same state, including a huge step and a huge negative
// increment.

use sipmm::schemes::{bem_residual, bem_step, sipem_step, sipmm_step};
use sipmm::{ModelParams, ProjectionConfig, StepInput};

fn main() -> sipmm::Result<()> {
    let p = ModelParams::example1();
    let map = ProjectionConfig::with_default_exponent(p.r)?;
    for (h, dw) in [(2f64.powi(-8), 0.05), (0.5, -0.8), (10.0, -30.0)] {
        let input = StepInput::new(0.5, h, dw)?;
        print!("h = {h:<10} dW = {dw:<6} SIPMM {:.6e}  SIPEM {:.6e}", sipmm_step(&p, &map, input), sipem_step(&p, &map, input));
        match bem_step(&p, input) {
            Ok(y) => println!("  BEM {y:.6e} (|G| = {:.1e})", bem_residual(&p, input, y).abs()),
            Err(e) => println!("  BEM: {e}"),
        }
    }
    Ok(())
}
