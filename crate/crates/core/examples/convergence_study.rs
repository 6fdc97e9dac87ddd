// Usage: cargo run --release --example convergence_study [paths]
//
// Strong errors of SIPMM, SIPEM and BEM against a fine SIPMM reference on
// coupled paths, with least-squares rates.

use sipmm::{run_strong_error, ExperimentConfig, ModelParams, SchemeKind};

fn main() -> sipmm::Result<()> {
    let paths = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(500);
    let cfg = ExperimentConfig {
        levels: (5..=9).collect(),
        ref_level: 12,
        ref_scheme: SchemeKind::Sipmm,
        schemes: SchemeKind::ALL.to_vec(),
        num_paths: paths,
        seed: 1,
        ..ExperimentConfig::reference_protocol(ModelParams::example1())
    };
    let report = run_strong_error(&cfg)?;

    println!("level  h          SIPMM      SIPEM      BEM");
    for &l in &cfg.levels {
        let e = |s| report.rmse(s, l).unwrap();
        println!(
            "{l:<6} {:<10.3e} {:<10.3e} {:<10.3e} {:.3e}",
            cfg.step(l),
            e(SchemeKind::Sipmm),
            e(SchemeKind::Sipem),
            e(SchemeKind::Bem)
        );
    }
    for s in SchemeKind::ALL {
        let fit = report.fit(s).unwrap();
        println!("{s:<6} rate {:.3} (residual {:.3})", fit.rate, fit.residual);
    }
    Ok(())
}
