//! Reduced-size self test behind the `check` command.

use crate::brownian::{halve, BrownianLattice};
use crate::cli::config::Preset;
use crate::diagnostics;
use crate::error::Result;
use crate::harness::{self, ExperimentConfig};
use crate::model::Regime;
use crate::projection::default_exponent;
use crate::schemes::SchemeKind;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Runs every check with `paths` Monte Carlo paths where paths are needed.
pub fn run_checks(paths: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();

    let labels: Vec<Regime> = Preset::ALL.iter().map(|p| p.params().classify_regime()).collect();
    out.push(outcome(
        "regimes",
        labels == [Regime::NonCritical, Regime::CriticalOrderOne, Regime::CriticalOrderOne],
        format!("{labels:?}"),
    ));

    for preset in Preset::ALL {
        let p = preset.params();
        let report = harness::positivity_stress(p, default_exponent(p.r), &[0.25, 1.0, 10.0], paths, seed)?;
        out.push(outcome(
            &format!("positivity/{}", preset.name()),
            report.passed(),
            format!("min state {:e}", report.min_state()),
        ));
    }

    for kind in [SchemeKind::Sipmm, SchemeKind::Sipem] {
        let s = diagnostics::quadratic_residual_sweep(kind, 10_000, seed);
        out.push(outcome(
            &format!("residual/{kind}"),
            s.passed(),
            format!("worst residual/bound {:.3e}", s.worst_ratio),
        ));
    }
    let s = diagnostics::bem_residual_sweep(2_000, seed);
    out.push(outcome(
        "residual/BEM",
        s.passed(),
        format!(
            "worst residual/bound {:.3e}, {} below f64 resolution",
            s.worst_ratio, s.below_resolution
        ),
    ));

    for preset in Preset::ALL {
        let v = diagnostics::projection_property_sweep(&preset.params(), 2_000, seed);
        out.push(outcome(
            &format!("projection/{}", preset.name()),
            v.total() == 0,
            format!("{} violations in {} samples", v.total(), v.samples),
        ));
    }

    let cfg = ExperimentConfig {
        levels: vec![4, 5, 6, 7],
        ref_level: 10,
        ref_scheme: SchemeKind::Sipmm,
        schemes: vec![SchemeKind::Sipmm, SchemeKind::Bem],
        num_paths: paths.max(2),
        seed,
        ..ExperimentConfig::reference_protocol(Preset::Example1.params())
    };
    let zero = harness::self_check(&cfg)?;
    out.push(outcome("coupling/self-check", zero == 0.0, format!("rmse {zero}")));

    let lat = BrownianLattice::generate(seed, 0, 10, 1.0)?;
    let nested = (0..10).all(|l| lat.coarsen(l).ok() == lat.coarsen(l + 1).ok().map(|v| halve(&v)));
    out.push(outcome("coupling/nested-coarsening", nested, "levels 0..10".into()));

    let report = harness::run_strong_error(&cfg)?;
    let rate = report.fit(SchemeKind::Sipmm).map(|f| f.rate).unwrap_or(f64::NAN);
    out.push(outcome(
        "convergence/example1",
        (0.7..=1.3).contains(&rate),
        format!("SIPMM rate {rate:.4} over levels 4-7"),
    ));

    Ok(out)
}
