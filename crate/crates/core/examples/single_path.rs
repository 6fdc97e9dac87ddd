// Usage: cargo run --release --example single_path
//
// One Brownian path of Example 1 integrated with all three schemes.

use sipmm::brownian::BrownianLattice;
use sipmm::{integrate, ModelParams, ProjectionConfig, SchemeKind};

fn main() -> sipmm::Result<()> {
    let params = ModelParams::example1();
    let map = ProjectionConfig::with_default_exponent(params.r)?;
    let lattice = BrownianLattice::generate(7, 0, 8, 1.0)?;
    let h = lattice.fine_step();

    println!("h = {h}, q = {:.4}, cap = {:.4}", map.q(), map.cap(h));
    for scheme in SchemeKind::ALL {
        let path = integrate(&params, &map, scheme, lattice.increments(), h, 1.0)?;
        println!(
            "{scheme:<6} X(1) = {:.6}  min = {:.6}  steps = {}",
            path.terminal(),
            path.min_state(),
            path.len() - 1
        );
    }
    Ok(())
}
