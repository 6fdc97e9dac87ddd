// Usage: cargo run --example regimes

use sipmm::ModelParams;

fn main() {
    for (name, p) in [
        ("example1", ModelParams::example1()),
        ("example2", ModelParams::example2()),
        ("example3", ModelParams::example3()),
    ] {
        println!("{name}: r = {}, rho = {} -> {}", p.r, p.rho, p.classify_regime());
    }

    // critical, but a₂/σ² below 4r + 1/2
    let weak = ModelParams { alpha_2: 10.0, ..ModelParams::example2() };
    println!(
        "alpha_2 = 10: {} (order-one threshold {})",
        weak.classify_regime(),
        weak.order_one_threshold()
    );

    let bad = ModelParams { r: 2.0, rho: 2.0, ..ModelParams::example1() };
    match bad.validate() {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("r = 2, rho = 2: {e}"),
    }
}
