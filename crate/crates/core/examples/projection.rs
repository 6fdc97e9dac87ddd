// Usage: cargo run --example projection

use sipmm::projection::{admissible_range, CorrectiveMap, ProjectionConfig};

fn main() -> sipmm::Result<()> {
    for r in [2.0, 3.0, 4.0] {
        let (lo, hi) = admissible_range(r);
        println!("r = {r}: q in [{lo:.4}, {hi:.4}]");
    }

    let map = ProjectionConfig::with_default_exponent(4.0)?;
    for k in [0, 2, 6, 10] {
        let h = 2f64.powi(-k);
        println!("h = 2^-{k:<2} cap {:>8.4}  P(0.3) = {}  P(50) = {:.4}", map.cap(h), map.apply(h, 0.3), map.apply(h, 50.0));
    }
    Ok(())
}
