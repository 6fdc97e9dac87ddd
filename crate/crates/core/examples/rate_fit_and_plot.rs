// Usage: cargo run --release --example rate_fit_and_plot [out_dir]
//
// Fits a rate to hand-made points, then writes the CSV table and SVG plot of
// a small Example 3 study.

use std::path::PathBuf;

use sipmm::cli::{emit_csv, emit_plot};
use sipmm::{fit_rate, run_strong_error, ExperimentConfig, ModelParams, SchemeKind};

fn main() -> sipmm::Result<()> {
    let points = [(2f64.powi(-6), 4.1e-3), (2f64.powi(-7), 2.0e-3), (2f64.powi(-8), 1.02e-3)];
    let fit = fit_rate(&points)?;
    println!("hand-made points: rate {:.4}, residual {:.4}", fit.rate, fit.residual);

    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("sipmm-plot"));
    std::fs::create_dir_all(&out)?;
    let cfg = ExperimentConfig {
        levels: (4..=8).collect(),
        ref_level: 11,
        ref_scheme: SchemeKind::Sipmm,
        schemes: vec![SchemeKind::Bem, SchemeKind::Sipmm],
        num_paths: 300,
        seed: 3,
        ..ExperimentConfig::reference_protocol(ModelParams::example3())
    };
    let report = run_strong_error(&cfg)?;
    emit_csv(&report, &out.join("example3.csv"))?;
    emit_plot(&report, &out.join("example3.svg"))?;
    println!("wrote {}", out.display());
    Ok(())
}
