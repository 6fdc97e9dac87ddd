//! Acceptance criteria. Runs as a plain binary so that every criterion prints
//! its own line; exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use sipmm::brownian::{halve, BrownianLattice};
use sipmm::diagnostics::{bem_residual_sweep, projection_property_sweep, quadratic_residual_sweep};
use sipmm::harness::{positivity_stress, run_strong_error, self_check, ConvergenceReport, ExperimentConfig};
use sipmm::model::{classify_regime, ModelParams, Regime};
use sipmm::projection::default_exponent;
use sipmm::schemes::SchemeKind;

type Outcome = (bool, String);

fn presets() -> [(&'static str, ModelParams); 3] {
    [
        ("example1", ModelParams::example1()),
        ("example2", ModelParams::example2()),
        ("example3", ModelParams::example3()),
    ]
}

/// M = 2000, levels 5–9, SIPMM reference at level 12.
fn desk_run(params: ModelParams) -> ConvergenceReport {
    let cfg = ExperimentConfig {
        levels: (5..=9).collect(),
        ref_level: 12,
        ref_scheme: SchemeKind::Sipmm,
        schemes: vec![SchemeKind::Sipmm, SchemeKind::Sipem, SchemeKind::Bem],
        num_paths: 2000,
        seed: 20,
        ..ExperimentConfig::reference_protocol(params)
    };
    run_strong_error(&cfg).expect("desk-scale run")
}

fn rate(report: &ConvergenceReport, scheme: SchemeKind) -> f64 {
    report.fit(scheme).expect("fit").rate
}

fn positivity() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut min = f64::INFINITY;
    for (_, p) in presets() {
        let r = positivity_stress(p, default_exponent(p.r), &[0.25, 1.0, 10.0], 1000, 1).expect("stress");
        ok &= r.passed() && r.t_end == 160.0;
        min = min.min(r.min_state());
    }
    let secs = start.elapsed().as_secs_f64();
    (ok && secs < 30.0, format!("min state {min:.3e}, {secs:.1} s"))
}

fn order_one(runs: &[(&str, ConvergenceReport)], which: &[&str]) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, r) in runs.iter().filter(|(n, _)| which.contains(n)) {
        let q = rate(r, SchemeKind::Sipmm);
        ok &= (0.80..=1.15).contains(&q);
        detail.push(format!("{name} SIPMM {q:.4}"));
    }
    (ok, detail.join(", "))
}

fn order_gap(runs: &[(&str, ConvergenceReport)]) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, r) in runs {
        let (sipem, bem) = (rate(r, SchemeKind::Sipem), rate(r, SchemeKind::Bem));
        ok &= (0.40..=0.80).contains(&sipem) && (0.40..=0.80).contains(&bem);
        let below = r.config.levels.iter().all(|&l| {
            r.rmse(SchemeKind::Sipmm, l).unwrap() < r.rmse(SchemeKind::Bem, l).unwrap()
        });
        ok &= below;
        detail.push(format!("{name} SIPEM {sipem:.4} BEM {bem:.4} SIPMM<BEM {below}"));
    }
    (ok, detail.join(", "))
}

fn magnitude() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        levels: vec![8],
        ..ExperimentConfig::reference_protocol(ModelParams::example1())
    };
    let r = run_strong_error(&cfg).expect("full-scale run");
    let sipmm = r.rmse(SchemeKind::Sipmm, 8).unwrap();
    let bem = r.rmse(SchemeKind::Bem, 8).unwrap();
    let within = |x: f64, target: f64| x >= target / 2.0 && x <= target * 2.0;
    (
        within(sipmm, 0.0017) && within(bem, 0.0043),
        format!(
            "SIPMM {sipmm:.4e} (0.0017), BEM {bem:.4e} (0.0043), {:.0} s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn residuals() -> Outcome {
    let sipmm = quadratic_residual_sweep(SchemeKind::Sipmm, 100_000, 6);
    let sipem = quadratic_residual_sweep(SchemeKind::Sipem, 100_000, 7);
    let bem = bem_residual_sweep(10_000, 8);
    (
        sipmm.passed() && sipem.passed() && bem.passed(),
        format!(
            "worst ratio SIPMM {:.2e}, SIPEM {:.2e}, BEM {:.2e} ({} below f64 resolution)",
            sipmm.worst_ratio, sipem.worst_ratio, bem.worst_ratio, bem.below_resolution
        ),
    )
}

fn projection_properties() -> Outcome {
    let mut total = 0;
    for (i, (_, p)) in presets().into_iter().enumerate() {
        total += projection_property_sweep(&p, 10_000, 100 + i as u64).total();
    }
    (total == 0, format!("{total} violations over 3 × 10^4 samples"))
}

fn coupling() -> Outcome {
    let mut ok = true;
    for scheme in [SchemeKind::Bem, SchemeKind::Sipmm] {
        let cfg = ExperimentConfig {
            levels: vec![6],
            ref_level: 10,
            ref_scheme: scheme,
            num_paths: 50,
            ..ExperimentConfig::reference_protocol(ModelParams::example1())
        };
        ok &= self_check(&cfg).expect("self-check") == 0.0;
    }
    for path in 0..20 {
        let lat = BrownianLattice::generate(3, path, 12, 1.0).unwrap();
        for l in 0..12 {
            ok &= lat.coarsen(l).unwrap() == halve(&lat.coarsen(l + 1).unwrap());
        }
    }
    (ok, "self-check rmse 0, nested coarsening bitwise".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let csv = |threads: &str| {
        let out = dir.path().join(threads);
        let status = Command::new(env!("CARGO_BIN_EXE_sipmm"))
            .args(["converge", "--preset", "example1", "--seed", "42", "--levels", "5-9", "--ref-level", "12"])
            .args(["--ref-scheme", "sipmm", "--scheme", "sipmm,bem", "--paths", "500", "--threads", threads])
            .arg("--out")
            .arg(&out)
            .output()
            .expect("binary runs")
            .status;
        assert!(status.success());
        std::fs::read(out.join("convergence.csv")).unwrap()
    };
    let (one, eight) = (csv("1"), csv("8"));
    (one == eight, format!("{} bytes, identical {}", one.len(), one == eight))
}

fn regimes() -> Outcome {
    let labels: Vec<Regime> = presets().iter().map(|(_, p)| classify_regime(p)).collect();
    let expected = [Regime::NonCritical, Regime::CriticalOrderOne, Regime::CriticalOrderOne];
    let rejected = ModelParams {
        r: 2.0,
        rho: 2.0,
        ..ModelParams::example1()
    }
    .validate()
    .is_err();
    let labels_text: Vec<String> = labels.iter().map(|r| r.to_string()).collect();
    (
        labels == expected && rejected,
        format!("{}; r + 1 < 2rho rejected {rejected}", labels_text.join(", ")),
    )
}

fn main() -> ExitCode {
    // `cargo test -- --list` and similar probes
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let runs: Vec<(&str, ConvergenceReport)> = presets().into_iter().map(|(n, p)| (n, desk_run(p))).collect();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 unconditional positivity", Box::new(positivity)),
        ("2 order one, example 1", Box::new(|| order_one(&runs, &["example1"]))),
        ("3 order one, examples 2 and 3", Box::new(|| order_one(&runs, &["example2", "example3"]))),
        ("4 order gap", Box::new(|| order_gap(&runs))),
        ("5 rmse magnitude at full scale", Box::new(magnitude)),
        ("6 implicit-step residuals", Box::new(residuals)),
        ("7 corrective-map properties", Box::new(projection_properties)),
        ("8 coupling and self-check", Box::new(coupling)),
        ("9 thread-count determinism", Box::new(determinism)),
        ("10 regime labels", Box::new(regimes)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let (ok, detail) = check();
        println!("{} criterion {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
