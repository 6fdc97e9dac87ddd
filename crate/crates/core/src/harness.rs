//! Monte Carlo strong-error experiments.
//!
//! Every path draws one fine lattice; the reference solution runs on the fine
//! increments and each scheme under test runs on the coarsened increments of the
//! same path, so the pathwise difference isolates discretisation error.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::brownian::{self, BrownianLattice, NormalStream, MAX_LEVEL};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::projection::ProjectionConfig;
use crate::schemes::{self, SchemeKind};

/// How the per-path error is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorMetric {
    /// `|Y_N − X̂_T|`.
    #[default]
    Terminal,
    /// `max_k |Y_k − X̂_{t_k}|` over the coarse grid.
    MaxOverGrid,
}

/// Source of the Brownian increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Noise {
    #[default]
    Brownian,
    /// Every increment is zero; turns each path into the same deterministic ODE
    /// solve.
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: ModelParams,
    pub q: f64,
    pub t_end: f64,
    pub levels: Vec<u32>,
    pub ref_level: u32,
    pub ref_scheme: SchemeKind,
    pub schemes: Vec<SchemeKind>,
    pub num_paths: usize,
    pub seed: u64,
    /// Worker count; `0` lets the pool decide. Never affects results.
    pub threads: usize,
    pub metric: ErrorMetric,
    pub noise: Noise,
}

impl ExperimentConfig {
    /// The reference protocol for one parameter set: levels 6–10 against BEM at
    /// level 15 over 10⁴ paths.
    pub fn reference_protocol(params: ModelParams) -> Self {
        ExperimentConfig {
            q: crate::projection::default_exponent(params.r),
            params,
            t_end: 1.0,
            levels: (6..=10).collect(),
            ref_level: 15,
            ref_scheme: SchemeKind::Bem,
            schemes: vec![SchemeKind::Bem, SchemeKind::Sipmm],
            num_paths: 10_000,
            seed: 0,
            threads: 0,
            metric: ErrorMetric::Terminal,
            noise: Noise::Brownian,
        }
    }

    pub fn projection(&self) -> Result<ProjectionConfig> {
        ProjectionConfig::new(self.q, self.params.r)
    }

    pub fn step(&self, level: u32) -> f64 {
        self.t_end / (1u64 << level) as f64
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_common()?;
        if let Some(&max) = self.levels.iter().max() {
            if max >= self.ref_level {
                return Err(Error::domain(format!(
                    "every level must be coarser than the reference level {}, got {max}",
                    self.ref_level
                )));
            }
        }
        Ok(())
    }

    fn validate_common(&self) -> Result<()> {
        self.params.validate()?;
        self.projection()?;
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::domain(format!("horizon must be positive, got {}", self.t_end)));
        }
        if self.levels.is_empty() {
            return Err(Error::domain("at least one level is required"));
        }
        if self.schemes.is_empty() {
            return Err(Error::domain("at least one scheme is required"));
        }
        if self.ref_level > MAX_LEVEL {
            return Err(Error::domain(format!("reference level {} exceeds {MAX_LEVEL}", self.ref_level)));
        }
        if self.num_paths < 2 {
            return Err(Error::domain(format!("need at least 2 paths, got {}", self.num_paths)));
        }
        let limit = 1.0 / self.params.alpha_1;
        if self.ref_scheme == SchemeKind::Bem && self.step(self.ref_level) >= limit {
            return Err(Error::StepSize { h: self.step(self.ref_level), limit });
        }
        if self.schemes.contains(&SchemeKind::Bem) {
            for &l in &self.levels {
                if self.step(l) >= limit {
                    return Err(Error::StepSize { h: self.step(l), limit });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// Least-squares slope of `log₂ rmse` against `log₂ h`.
    pub rate: f64,
    /// Root-mean-square of the fit residuals in `log₂` units.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub scheme: SchemeKind,
    pub level: u32,
    pub h: f64,
    pub rmse: f64,
    pub wall_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub config: ExperimentConfig,
    /// Scheme-major, then in `config.levels` order.
    pub rows: Vec<ErrorRow>,
    /// One entry per scheme; `None` when fewer than two positive errors exist.
    pub fits: Vec<(SchemeKind, Option<RateFit>)>,
}

impl ConvergenceReport {
    pub fn rmse(&self, scheme: SchemeKind, level: u32) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.scheme == scheme && r.level == level)
            .map(|r| r.rmse)
    }

    pub fn fit(&self, scheme: SchemeKind) -> Option<RateFit> {
        self.fits.iter().find(|(s, _)| *s == scheme).and_then(|(_, f)| *f)
    }

    pub fn rows_for(&self, scheme: SchemeKind) -> impl Iterator<Item = &ErrorRow> {
        self.rows.iter().filter(move |r| r.scheme == scheme)
    }

    /// Copies measured timings into the matching rows.
    pub fn attach_timings(&mut self, timings: &[Timing]) {
        for t in timings {
            if let Some(row) = self
                .rows
                .iter_mut()
                .find(|r| r.scheme == t.scheme && r.level == t.level)
            {
                row.wall_time = Some(t.seconds);
            }
        }
    }
}

/// Compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Estimates the strong error of every `(scheme, level)` pair against the
/// reference scheme on the finest level.
///
/// Results depend only on `cfg`, never on `cfg.threads`.
pub fn run_strong_error(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    sweep(cfg)
}

/// Runs the reference scheme against itself on the reference level. Any
/// nonzero result means the coupling is broken.
pub fn self_check(cfg: &ExperimentConfig) -> Result<f64> {
    let cfg = ExperimentConfig {
        levels: vec![cfg.ref_level],
        schemes: vec![cfg.ref_scheme],
        ..cfg.clone()
    };
    cfg.validate_common()?;
    let report = sweep(&cfg)?;
    Ok(report.rows[0].rmse)
}

fn sweep(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    let map = cfg.projection()?;
    let pairs: Vec<(SchemeKind, u32)> = cfg
        .schemes
        .iter()
        .flat_map(|&s| cfg.levels.iter().map(move |&l| (s, l)))
        .collect();

    let per_path = |m: usize| -> Result<Vec<f64>> { path_errors(cfg, &map, &pairs, m) };
    let errors: Vec<Vec<f64>> = with_pool(cfg.threads, || {
        (0..cfg.num_paths).into_par_iter().map(per_path).collect::<Result<Vec<_>>>()
    })?;

    let mut sums = vec![KahanSum::default(); pairs.len()];
    for path in &errors {
        for (acc, &e) in sums.iter_mut().zip(path) {
            acc.add(e);
        }
    }
    let rows: Vec<ErrorRow> = pairs
        .iter()
        .zip(&sums)
        .map(|(&(scheme, level), acc)| ErrorRow {
            scheme,
            level,
            h: cfg.step(level),
            rmse: (acc.value() / cfg.num_paths as f64).sqrt(),
            wall_time: None,
        })
        .collect();

    let fits = cfg
        .schemes
        .iter()
        .map(|&s| {
            let points: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.scheme == s)
                .map(|r| (r.h, r.rmse))
                .collect();
            (s, fit_rate(&points).ok())
        })
        .collect();

    Ok(ConvergenceReport {
        config: cfg.clone(),
        rows,
        fits,
    })
}

fn lattice(cfg: &ExperimentConfig, path: usize) -> Result<BrownianLattice> {
    match cfg.noise {
        Noise::Brownian => BrownianLattice::generate(cfg.seed, path as u64, cfg.ref_level, cfg.t_end),
        Noise::Zero => BrownianLattice::zero(cfg.ref_level, cfg.t_end),
    }
}

/// Squared error of every `(scheme, level)` pair on path `m`.
fn path_errors(
    cfg: &ExperimentConfig,
    map: &ProjectionConfig,
    pairs: &[(SchemeKind, u32)],
    m: usize,
) -> Result<Vec<f64>> {
    let lat = lattice(cfg, m)?;
    let h_ref = lat.fine_step();
    let with_ref_context = |e: Error| Error::Experiment {
        scheme: cfg.ref_scheme,
        level: cfg.ref_level,
        path: m,
        source: Box::new(e),
    };

    let mut reference = Vec::new();
    let ref_terminal = match cfg.metric {
        ErrorMetric::Terminal => {
            schemes::terminal_value(&cfg.params, map, cfg.ref_scheme, lat.increments(), h_ref, cfg.t_end)
                .map_err(with_ref_context)?
        }
        ErrorMetric::MaxOverGrid => {
            let tr = schemes::integrate(&cfg.params, map, cfg.ref_scheme, lat.increments(), h_ref, cfg.t_end)
                .map_err(with_ref_context)?;
            let last = tr.terminal();
            reference = tr.y;
            last
        }
    };

    // coarse increments for every requested level, built by repeated halving
    let min_level = cfg.levels.iter().copied().min().unwrap_or(cfg.ref_level);
    let mut by_level: Vec<Option<Vec<f64>>> = vec![None; (cfg.ref_level + 1) as usize];
    let mut current = lat.increments().to_vec();
    for level in (min_level..=cfg.ref_level).rev() {
        if level < cfg.ref_level {
            current = brownian::halve(&current);
        }
        if cfg.levels.contains(&level) {
            by_level[level as usize] = Some(current.clone());
        }
    }

    pairs
        .iter()
        .map(|&(scheme, level)| {
            let incs = by_level[level as usize].as_deref().expect("level prepared above");
            let h = cfg.step(level);
            let ctx = |e: Error| Error::Experiment {
                scheme,
                level,
                path: m,
                source: Box::new(e),
            };
            match cfg.metric {
                ErrorMetric::Terminal => {
                    let y = schemes::terminal_value(&cfg.params, map, scheme, incs, h, cfg.t_end).map_err(ctx)?;
                    Ok((y - ref_terminal).powi(2))
                }
                ErrorMetric::MaxOverGrid => {
                    let stride = 1usize << (cfg.ref_level - level);
                    let mut worst: f64 = 0.0;
                    schemes::drive(&cfg.params, map, scheme, incs, h, |k, y| {
                        worst = worst.max((y - reference[k * stride]).powi(2));
                    })
                    .map_err(ctx)?;
                    Ok(worst)
                }
            }
        })
        .collect()
}

fn with_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// Ordinary least squares of `log₂ rmse` on `log₂ h`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 2 {
        return Err(Error::domain(format!("rate fit needs at least 2 points, got {}", points.len())));
    }
    if let Some(&(h, e)) = points.iter().find(|&&(h, e)| !(h > 0.0 && e > 0.0)) {
        return Err(Error::domain(format!("rate fit needs positive (h, rmse), got ({h}, {e})")));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.log2()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.log2()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("rate fit needs at least two distinct step sizes"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let rate = sxy / sxx;
    let intercept = my - rate * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - rate * x).powi(2))
        .sum();
    Ok(RateFit {
        rate,
        residual: (ss / n).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressConfig {
    pub params: ModelParams,
    pub q: f64,
    pub steps: Vec<f64>,
    pub num_paths: usize,
    pub seed: u64,
    pub noise: Noise,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressEntry {
    pub scheme: SchemeKind,
    pub h: f64,
    pub min_state: f64,
    pub nonpositive: usize,
    pub states: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressReport {
    /// `16 · max(h)`.
    pub t_end: f64,
    pub entries: Vec<StressEntry>,
}

impl StressReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.nonpositive == 0 && e.min_state > 0.0)
    }

    pub fn min_state(&self) -> f64 {
        self.entries.iter().map(|e| e.min_state).fold(f64::INFINITY, f64::min)
    }
}

/// Runs SIPMM and SIPEM with each step size on `[0, 16·max(h)]` and records the
/// smallest state seen. Step sizes need not be small.
pub fn positivity_stress(params: ModelParams, q: f64, steps: &[f64], num_paths: usize, seed: u64) -> Result<StressReport> {
    run_stress(&StressConfig {
        params,
        q,
        steps: steps.to_vec(),
        num_paths,
        seed,
        noise: Noise::Brownian,
    })
}

pub fn run_stress(cfg: &StressConfig) -> Result<StressReport> {
    cfg.params.validate()?;
    let map = ProjectionConfig::new(cfg.q, cfg.params.r)?;
    if let Some(&h) = cfg.steps.iter().find(|&&h| !(h > 0.0 && h.is_finite())) {
        return Err(Error::domain(format!("stress step sizes must be positive, got {h}")));
    }
    let t_end = 16.0 * cfg.steps.iter().copied().fold(0.0, f64::max);
    let mut entries = Vec::new();
    for scheme in [SchemeKind::Sipmm, SchemeKind::Sipem] {
        for &h in &cfg.steps {
            let n = (t_end / h).round().max(1.0) as usize;
            let mut min_state = f64::INFINITY;
            let mut nonpositive = 0;
            let mut incs = vec![0.0; n];
            for m in 0..cfg.num_paths {
                if cfg.noise == Noise::Brownian {
                    let mut stream = NormalStream::new(cfg.seed, m as u64);
                    let scale = h.sqrt();
                    incs.iter_mut().for_each(|w| *w = scale * stream.next_standard());
                }
                schemes::drive(&cfg.params, &map, scheme, &incs, h, |_, y| {
                    min_state = min_state.min(y);
                    if !(y > 0.0) {
                        nonpositive += 1;
                    }
                })?;
            }
            entries.push(StressEntry {
                scheme,
                h,
                min_state,
                nonpositive,
                states: cfg.num_paths * (n + 1),
            });
        }
    }
    Ok(StressReport { t_end, entries })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub scheme: SchemeKind,
    pub level: u32,
    pub seconds: f64,
}

/// Single-threaded wall-clock time of the full `M`-path sweep per scheme and
/// level. Only the integration loop is timed; path generation is excluded.
pub fn time_schemes(cfg: &ExperimentConfig) -> Result<Vec<Timing>> {
    cfg.params.validate()?;
    let map = cfg.projection()?;
    let mut out = Vec::new();
    for &scheme in &cfg.schemes {
        for &level in &cfg.levels {
            let h = cfg.step(level);
            let mut elapsed = Duration::ZERO;
            for m in 0..cfg.num_paths {
                let lat = match cfg.noise {
                    Noise::Brownian => BrownianLattice::generate(cfg.seed, m as u64, level, cfg.t_end)?,
                    Noise::Zero => BrownianLattice::zero(level, cfg.t_end)?,
                };
                let start = Instant::now();
                let y = schemes::terminal_value(&cfg.params, &map, scheme, lat.increments(), h, cfg.t_end)
                    .map_err(|e| Error::Experiment {
                        scheme,
                        level,
                        path: m,
                        source: Box::new(e),
                    })?;
                elapsed += start.elapsed();
                std::hint::black_box(y);
            }
            out.push(Timing {
                scheme,
                level,
                seconds: elapsed.as_secs_f64(),
            });
        }
    }
    Ok(out)
}
