// Usage: cargo run --release --example brownian_coupling
//
// Coarse increments are sums of fine ones, so every level sees the same path.

use sipmm::brownian::{BrownianLattice, NormalStream};

fn main() -> sipmm::Result<()> {
    let lattice = BrownianLattice::generate(42, 3, 10, 1.0)?;
    let fine_total: f64 = lattice.increments().iter().sum();
    for level in [10, 8, 4, 0] {
        let inc = lattice.coarsen(level)?;
        println!("level {level:>2}: {:>4} increments, W(1) = {:+.15}", inc.len(), inc.iter().sum::<f64>());
    }
    println!("fine sum          W(1) = {fine_total:+.15}");

    // any draw of any path is reachable directly
    let z = NormalStream::at(42, 3, 100).next_standard();
    assert_eq!(z * lattice.fine_step().sqrt(), lattice.increments()[100]);
    println!("draw 100 of path 3: {z:+.6}");
    Ok(())
}
