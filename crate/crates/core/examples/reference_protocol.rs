// Usage: cargo run --release --example reference_protocol [paths]
//
// The full experiment: levels 6..10 against BEM at level 15. With the default
// 10^4 paths this takes a few minutes per core.

use sipmm::{run_strong_error, ExperimentConfig, ModelParams};

fn main() -> sipmm::Result<()> {
    let paths = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10_000);
    let cfg = ExperimentConfig {
        num_paths: paths,
        ..ExperimentConfig::reference_protocol(ModelParams::example1())
    };
    let report = run_strong_error(&cfg)?;
    for row in &report.rows {
        println!("{:<6} h = 2^-{:<3} rmse {:.4e}", row.scheme.as_str(), row.level, row.rmse);
    }
    for (s, fit) in &report.fits {
        if let Some(f) = fit {
            println!("{s}: q = {:.4}", f.rate);
        }
    }
    Ok(())
}
