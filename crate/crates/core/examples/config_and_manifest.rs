// Usage: cargo run --release --example config_and_manifest
//
// A custom model from key=value text, run, and the manifest that reproduces it.

use sipmm::cli::{parse_config, render_csv, ConfigEntries, RunManifest};
use sipmm::run_strong_error;

const CONFIG: &str = "\
# custom non-critical model
alpha_m1 = 1.0
alpha_0 = 1.0
alpha_1 = 0.5
alpha_2 = 4.0
sigma = 0.8
r = 3
rho = 1.5
x0 = 1.0
levels = 4-7
ref_level = 10
ref_scheme = SIPMM
schemes = SIPMM,SIPEM
paths = 200
seed = 11
";

fn main() -> sipmm::Result<()> {
    let parsed = parse_config(&ConfigEntries::parse_text(CONFIG, "inline")?)?;
    println!("regime: {}", parsed.regime);
    let report = run_strong_error(&parsed.experiment)?;
    print!("{}", render_csv(&report));
    println!("---");
    print!("{}", RunManifest::new("converge", &parsed.experiment, parsed.random_seed).render());
    Ok(())
}
