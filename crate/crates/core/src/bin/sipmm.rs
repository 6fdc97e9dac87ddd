use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sipmm::cli::check::run_checks;
use sipmm::cli::{self, ConfigEntries, ParsedConfig, RunManifest};
use sipmm::harness::{self, ConvergenceReport};
use sipmm::{Error, Result};

#[derive(Parser)]
#[command(name = "sipmm", version, about = "Strong-convergence experiments for the Ait-Sahalia model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate strong errors and fitted rates; writes CSV, SVG and manifest.
    Converge(Common),
    /// Run SIPMM and SIPEM with large step sizes and report the smallest state.
    Stress {
        #[command(flatten)]
        common: Common,
        /// Step sizes to stress.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 1.0, 10.0])]
        steps: Vec<f64>,
    },
    /// Time each scheme per level, single-threaded.
    Bench(Common),
    /// Run the reduced self-test suite.
    Check {
        #[arg(long, default_value_t = 100)]
        paths: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Common {
    /// example1, example2 or example3.
    #[arg(long)]
    preset: Option<String>,
    /// key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Schemes under test, e.g. SIPMM,BEM.
    #[arg(long)]
    scheme: Option<String>,
    /// Coarse levels l (h = T/2^l), e.g. 6,7,8 or 6-10.
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    ref_level: Option<u32>,
    #[arg(long)]
    ref_scheme: Option<String>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation exponent.
    #[arg(long)]
    q: Option<f64>,
    /// terminal or max.
    #[arg(long)]
    metric: Option<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn resolve(&self) -> Result<ParsedConfig> {
        let mut entries = match &self.config {
            Some(path) => ConfigEntries::from_file(path)?,
            None => ConfigEntries::new(),
        };
        if let Some(v) = &self.preset {
            entries.flag("preset", v, "--preset")?;
        }
        if let Some(v) = &self.scheme {
            entries.flag("schemes", v, "--scheme")?;
        }
        if let Some(v) = &self.levels {
            entries.flag("levels", v, "--levels")?;
        }
        if let Some(v) = self.ref_level {
            entries.flag("ref_level", v, "--ref-level")?;
        }
        if let Some(v) = &self.ref_scheme {
            entries.flag("ref_scheme", v, "--ref-scheme")?;
        }
        if let Some(v) = self.paths {
            entries.flag("paths", v, "--paths")?;
        }
        if let Some(v) = self.seed {
            entries.flag("seed", v, "--seed")?;
        }
        if let Some(v) = self.q {
            entries.flag("q", v, "--q")?;
        }
        if let Some(v) = &self.metric {
            entries.flag("metric", v, "--metric")?;
        }
        if let Some(v) = self.threads {
            entries.flag("threads", v, "--threads")?;
        }
        let parsed = cli::parse_config(&entries)?;
        for w in &parsed.warnings {
            eprintln!("warning: {w}");
        }
        if parsed.random_seed {
            eprintln!("seed: {} (random)", parsed.experiment.seed);
        }
        Ok(parsed)
    }
}

fn print_report(report: &ConvergenceReport) {
    println!("{:<6} {:>5} {:>12} {:>14} {:>10}", "scheme", "level", "h", "rmse", "time_s");
    for r in &report.rows {
        let t = r.wall_time.map(|t| format!("{t:.3}")).unwrap_or_else(|| "-".into());
        println!("{:<6} {:>5} {:>12.6e} {:>14.6e} {:>10}", r.scheme.as_str(), r.level, r.h, r.rmse, t);
    }
    for (s, fit) in &report.fits {
        match fit {
            Some(f) => println!("{:<6} rate {:.4}  resid {:.4}", s.as_str(), f.rate, f.residual),
            None => println!("{:<6} rate -", s.as_str()),
        }
    }
}

fn write_outputs(command: &str, parsed: &ParsedConfig, report: &ConvergenceReport, out: &Path, stem: &str) -> Result<()> {
    std::fs::create_dir_all(out)?;
    let mut manifest = RunManifest::new(command, &parsed.experiment, parsed.random_seed);
    let csv = out.join(format!("{stem}.csv"));
    cli::emit_csv(report, &csv)?;
    manifest.add_artifact("csv", &csv);
    if report.config.levels.len() >= 2 {
        let svg = out.join(format!("{stem}.svg"));
        cli::emit_plot(report, &svg)?;
        manifest.add_artifact("svg", &svg);
    }
    let path = out.join(format!("{stem}.manifest"));
    manifest.write(&path)?;
    for (kind, p) in &manifest.artifacts {
        println!("wrote {kind}: {}", p.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Converge(common) => {
            let parsed = common.resolve()?;
            let report = harness::run_strong_error(&parsed.experiment)?;
            print_report(&report);
            write_outputs("converge", &parsed, &report, &common.out, "convergence")?;
            Ok(true)
        }
        Command::Bench(common) => {
            let parsed = common.resolve()?;
            let mut cfg = parsed.experiment.clone();
            cfg.threads = 1;
            let mut report = harness::run_strong_error(&cfg)?;
            let timings = harness::time_schemes(&cfg)?;
            report.attach_timings(&timings);
            print_report(&report);
            write_outputs("bench", &parsed, &report, &common.out, "bench")?;
            Ok(true)
        }
        Command::Stress { common, steps } => {
            let parsed = common.resolve()?;
            let cfg = &parsed.experiment;
            let report = harness::positivity_stress(cfg.params, cfg.q, &steps, cfg.num_paths, cfg.seed)?;
            println!("T = {}", report.t_end);
            for e in &report.entries {
                println!(
                    "{:<6} h = {:<8} min state {:.6e}  nonpositive {}/{}",
                    e.scheme.as_str(),
                    e.h,
                    e.min_state,
                    e.nonpositive,
                    e.states
                );
            }
            println!("{}", if report.passed() { "PASS" } else { "FAIL" });
            Ok(report.passed())
        }
        Command::Check { paths, seed } => {
            let outcomes = run_checks(paths, seed)?;
            for o in &outcomes {
                println!("[{}] {:<28} {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
            }
            Ok(outcomes.iter().all(|o| o.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            let (code, status) = err.code();
            eprintln!("error[{code}]: {err}");
            if let Error::Experiment { .. } | Error::Step { .. } = err {
                eprintln!("cause: {}", err.root_cause());
            }
            ExitCode::from(status as u8)
        }
    }
}
