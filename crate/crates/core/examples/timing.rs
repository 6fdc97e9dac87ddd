// Usage: cargo run --release --example timing

use sipmm::{time_schemes, ExperimentConfig, ModelParams, SchemeKind};

fn main() -> sipmm::Result<()> {
    let cfg = ExperimentConfig {
        levels: (6..=10).collect(),
        schemes: vec![SchemeKind::Sipmm, SchemeKind::Bem],
        num_paths: 200,
        ..ExperimentConfig::reference_protocol(ModelParams::example1())
    };
    let t = time_schemes(&cfg)?;
    for &l in &cfg.levels {
        let get = |s| t.iter().find(|x| x.scheme == s && x.level == l).unwrap().seconds;
        let (a, b) = (get(SchemeKind::Sipmm), get(SchemeKind::Bem));
        println!("level {l:>2}: SIPMM {a:.4} s  BEM {b:.4} s  ratio {:.2}", b / a);
    }
    Ok(())
}
