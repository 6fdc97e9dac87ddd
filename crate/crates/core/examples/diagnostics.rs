// Usage: cargo run --release --example diagnostics

use sipmm::diagnostics::{bem_residual_sweep, projection_property_sweep, quadratic_residual_sweep};
use sipmm::{ModelParams, SchemeKind};

fn main() {
    for kind in [SchemeKind::Sipmm, SchemeKind::Sipem] {
        let s = quadratic_residual_sweep(kind, 20_000, 1);
        println!("{kind}: worst residual/bound {:.2e}, violations {}", s.worst_ratio, s.violations);
    }
    let s = bem_residual_sweep(20_000, 1);
    println!("BEM: worst residual/bound {:.3}, violations {}", s.worst_ratio, s.violations);

    let v = projection_property_sweep(&ModelParams::example1(), 5_000, 2);
    println!("projection properties: {} violations in {} samples", v.total(), v.samples);
}
