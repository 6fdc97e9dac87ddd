//! One-step maps and path integrators.
//!
//! * `SIPMM` – semi-implicit projected Milstein. Only the `a₋₁/Y` term is taken
//!   implicitly, so each step reduces to the positive root of
//!   `Y² − A·Y − a₋₁h = 0` with
//!   `A = Φ + (−a₀ + a₁Φ + f(Φ))h + g(Φ)ΔW + ½(ΔW² − h)ĝ(Φ)` and `Φ = Φ_h(Y_n)`.
//! * `SIPEM` – the same map without the `½(ΔW² − h)ĝ(Φ)` correction.
//! * `BEM` – fully drift-implicit Euler, solved by safeguarded Newton.

use std::fmt;
use std::str::FromStr;

use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::projection::{CorrectiveMap, StepMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    Sipmm,
    Sipem,
    Bem,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::Sipmm, SchemeKind::Sipem, SchemeKind::Bem];

    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeKind::Sipmm => "SIPMM",
            SchemeKind::Sipem => "SIPEM",
            SchemeKind::Bem => "BEM",
        }
    }

    /// Whether the scheme stays positive for every `h > 0` and every increment.
    pub fn is_unconditionally_positive(&self) -> bool {
        !matches!(self, SchemeKind::Bem)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "SIPMM" => Ok(SchemeKind::Sipmm),
            "SIPEM" => Ok(SchemeKind::Sipem),
            "BEM" => Ok(SchemeKind::Bem),
            other => Err(Error::Config(format!(
                "unknown scheme `{other}` (expected SIPMM, SIPEM or BEM)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInput {
    pub y: f64,
    pub h: f64,
    pub dw: f64,
}

impl StepInput {
    pub fn new(y: f64, h: f64, dw: f64) -> Result<Self> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::domain(format!("current state must be positive, got {y}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::domain(format!("step size must be positive, got {h}")));
        }
        if !dw.is_finite() {
            return Err(Error::domain(format!("Brownian increment must be finite, got {dw}")));
        }
        Ok(StepInput { y, h, dw })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
}

impl Trajectory {
    pub fn terminal(&self) -> f64 {
        *self.y.last().expect("trajectory always holds the initial value")
    }

    pub fn min_state(&self) -> f64 {
        self.y.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}

/// Positive root of `Y² − a·Y − c = 0` for `c > 0`.
///
/// For `a < 0` the conjugate form `2c / (√(a² + 4c) − a)` is used so that no
/// cancellation occurs between `a` and the square root.
#[inline]
pub fn positive_root(a: f64, c: f64) -> f64 {
    let disc = a.hypot(2.0 * c.sqrt());
    if a >= 0.0 {
        0.5 * (a + disc)
    } else {
        2.0 * c / (disc - a)
    }
}

/// `A` of the SIPMM quadratic given the already projected state `phi`.
#[inline]
pub fn sipmm_rhs(params: &ModelParams, phi: f64, h: f64, dw: f64) -> f64 {
    sipem_rhs(params, phi, h, dw) + milstein_correction(params, phi, h, dw)
}

/// `A` of the SIPEM quadratic given the already projected state `phi`.
#[inline]
pub fn sipem_rhs(params: &ModelParams, phi: f64, h: f64, dw: f64) -> f64 {
    let theta = -params.alpha_0 + params.alpha_1 * phi + params.f_unchecked(phi);
    phi + theta * h + params.g_unchecked(phi) * dw
}

/// `½(ΔW² − h)ĝ(Φ)`.
#[inline]
pub fn milstein_correction(params: &ModelParams, phi: f64, h: f64, dw: f64) -> f64 {
    0.5 * (dw * dw - h) * params.g_hat_unchecked(phi)
}

pub fn sipmm_step<M: CorrectiveMap>(params: &ModelParams, map: &M, input: StepInput) -> f64 {
    let phi = map.apply(input.h, input.y);
    positive_root(sipmm_rhs(params, phi, input.h, input.dw), params.alpha_m1 * input.h)
}

pub fn sipem_step<M: CorrectiveMap>(params: &ModelParams, map: &M, input: StepInput) -> f64 {
    let phi = map.apply(input.h, input.y);
    positive_root(sipem_rhs(params, phi, input.h, input.dw), params.alpha_m1 * input.h)
}

/// Lower end of the initial BEM bracket.
const BEM_FLOOR: f64 = 1e-12;
const BEM_MAX_ITER: usize = 200;
/// Relative residual target `|G(Y)| ≤ tol·max(1, |Y|)`.
pub const BEM_TOLERANCE: f64 = 1e-12;

/// Drift-implicit Euler residual
/// `G(Y) = Y − y − h(a₋₁/Y − a₀ + a₁Y − a₂Y^r) − g(y)ΔW`, evaluated in
/// double-double so that cancellation between large terms does not swamp it.
pub fn bem_residual(params: &ModelParams, input: StepInput, y_next: f64) -> f64 {
    let g = params.g_unchecked(input.y);
    let explicit = TwoFloat::from(input.y) + TwoFloat::new_mul(g, input.dw);
    bem_residual_dd(params, input.h, explicit, y_next)
}

/// `|G'(Y)|` times the gap between `Y` and its larger neighbour: the smallest
/// residual an f64 root can be guaranteed to reach.
pub fn bem_resolution(params: &ModelParams, input: StepInput, y_next: f64) -> f64 {
    let dg = bem_eval(params, input.h, 0.0, y_next).1;
    dg.abs() * (y_next.next_up() - y_next)
}

fn bem_residual_dd(params: &ModelParams, h: f64, explicit: TwoFloat, y: f64) -> f64 {
    let yd = TwoFloat::from(y);
    let yr = if params.r.fract() == 0.0 && params.r.abs() < 64.0 {
        yd.powi(params.r as i32)
    } else {
        yd.powf(TwoFloat::from(params.r))
    };
    let drift = params.alpha_m1 / yd - params.alpha_0 + params.alpha_1 * yd - params.alpha_2 * yr;
    f64::from(yd - explicit - h * drift)
}

/// `(G(Y), G'(Y))` with the explicit part `y + g(y)ΔW` precomputed.
#[inline]
fn bem_eval(params: &ModelParams, h: f64, explicit: f64, y: f64) -> (f64, f64) {
    let (g, dg, _) = bem_eval_scaled(params, h, explicit, y);
    (g, dg)
}

/// As [`bem_eval`], plus the sum of the magnitudes of the terms of `G`, which
/// sets the rounding floor of its f64 evaluation.
#[inline]
fn bem_eval_scaled(params: &ModelParams, h: f64, explicit: f64, y: f64) -> (f64, f64, f64) {
    let yr = y.powf(params.r);
    let inv = params.alpha_m1 / y;
    let g = y - explicit - h * (inv - params.alpha_0 + params.alpha_1 * y - params.alpha_2 * yr);
    let dg = 1.0 + h * (inv / y - params.alpha_1 + params.alpha_2 * params.r * yr / y);
    let scale = y + explicit.abs() + h * (inv + params.alpha_0 + params.alpha_1 * y + params.alpha_2 * yr);
    (g, dg, scale)
}

/// One drift-implicit Euler step. Requires `h < 1/a₁` so that `G` is strictly
/// increasing on `(0, ∞)`.
pub fn bem_step(params: &ModelParams, input: StepInput) -> Result<f64> {
    let limit = 1.0 / params.alpha_1;
    if input.h >= limit {
        return Err(Error::StepSize { h: input.h, limit });
    }
    let h = input.h;
    let noise = params.g_unchecked(input.y) * input.dw;
    let explicit = input.y + noise;
    // when the terms of G are huge the target can sit below f64 resolution
    let tol = |y: f64, scale: f64| (0.5 * BEM_TOLERANCE * y.abs().max(1.0)).max(4.0 * f64::EPSILON * scale);

    let mut lo = BEM_FLOOR;
    let mut hi = input.y + noise.abs() + h * params.alpha_m1 / BEM_FLOOR + 1.0;
    let mut iterations = 0;
    // G(0+) = −∞ and G(+∞) = +∞, so both loops terminate.
    while bem_eval(params, h, explicit, lo).0 >= 0.0 {
        hi = lo;
        lo *= 1e-3;
        iterations += 1;
    }
    while bem_eval(params, h, explicit, hi).0 <= 0.0 {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
    }

    let mut y = input.y.clamp(lo, hi);
    let mut residual = f64::INFINITY;
    while iterations < BEM_MAX_ITER {
        iterations += 1;
        let (g, dg, scale) = bem_eval_scaled(params, h, explicit, y);
        residual = g;
        if g.abs() <= tol(y, scale) {
            return Ok(polish(params, input, y, scale));
        }
        if g < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let newton = y - g / dg;
        y = if newton > lo && newton < hi {
            newton
        } else if hi > 4.0 * lo {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            // Bracket exhausted in f64: take the better endpoint.
            let (g_lo, _, s_lo) = bem_eval_scaled(params, h, explicit, lo);
            let (g_hi, _, s_hi) = bem_eval_scaled(params, h, explicit, hi);
            let (best, g_best, s_best) = if g_lo.abs() <= g_hi.abs() {
                (lo, g_lo.abs(), s_lo)
            } else {
                (hi, g_hi.abs(), s_hi)
            };
            if g_best <= tol(best, s_best) {
                return Ok(polish(params, input, best, s_best));
            }
            residual = g_best;
            break;
        }
    }
    Err(Error::Convergence { iterations, residual })
}

/// Refines a root found in f64 against the double-double residual when the f64
/// rounding floor of `G` is close to the target.
fn polish(params: &ModelParams, input: StepInput, y: f64, scale: f64) -> f64 {
    if 64.0 * f64::EPSILON * scale < BEM_TOLERANCE * y.max(1.0) {
        return y;
    }
    let g = params.g_unchecked(input.y);
    let explicit = TwoFloat::from(input.y) + TwoFloat::new_mul(g, input.dw);
    let residual = |v: f64| bem_residual_dd(params, input.h, explicit, v);
    let mut best = y;
    let mut best_g = residual(y);
    for _ in 0..4 {
        let dg = bem_eval(params, input.h, 0.0, best).1;
        let next = best - best_g / dg;
        let next_g = residual(next);
        if !(next > 0.0 && next_g.abs() < best_g.abs()) {
            break;
        }
        best = next;
        best_g = next_g;
    }
    // the exact root lies between two neighbouring floats
    for v in [best.next_down(), best.next_up()] {
        let gv = residual(v);
        if gv.abs() < best_g.abs() {
            best = v;
            best_g = gv;
        }
    }
    best
}

/// Checks that `increments.len()` steps of size `h` span `[0, t_end]`.
fn check_grid(increments: &[f64], h: f64, t_end: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain(format!("step size must be positive, got {h}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::domain(format!("horizon must be non-negative, got {t_end}")));
    }
    let span = increments.len() as f64 * h;
    if (span - t_end).abs() > 1e-9 * t_end.max(h) {
        return Err(Error::domain(format!(
            "{} steps of size {h} span {span}, not the horizon {t_end}",
            increments.len()
        )));
    }
    Ok(())
}

/// Runs `kind` over all increments, handing every state (including `x0`) to
/// `visit`.
pub(crate) fn drive<M, F>(
    params: &ModelParams,
    map: &M,
    kind: SchemeKind,
    increments: &[f64],
    h: f64,
    mut visit: F,
) -> Result<f64>
where
    M: CorrectiveMap,
    F: FnMut(usize, f64),
{
    let mut y = params.x0;
    visit(0, y);
    let c = params.alpha_m1 * h;
    match kind {
        SchemeKind::Sipmm | SchemeKind::Sipem => {
            let fixed = map.at_step(h);
            let milstein = kind == SchemeKind::Sipmm;
            for (n, &dw) in increments.iter().enumerate() {
                let phi = fixed.apply(y);
                let mut a = sipem_rhs(params, phi, h, dw);
                if milstein {
                    a += milstein_correction(params, phi, h, dw);
                }
                y = positive_root(a, c);
                visit(n + 1, y);
            }
        }
        SchemeKind::Bem => {
            for (n, &dw) in increments.iter().enumerate() {
                let input = StepInput { y, h, dw };
                y = bem_step(params, input).map_err(|e| Error::Step {
                    scheme: kind,
                    index: n,
                    source: Box::new(e),
                })?;
                visit(n + 1, y);
            }
        }
    }
    Ok(y)
}

/// Integrates `kind` from `x0` over `[0, t_end]` with `N = increments.len()`
/// uniform steps of size `h`.
pub fn integrate<M: CorrectiveMap>(
    params: &ModelParams,
    map: &M,
    kind: SchemeKind,
    increments: &[f64],
    h: f64,
    t_end: f64,
) -> Result<Trajectory> {
    check_grid(increments, h, t_end)?;
    let mut y = Vec::with_capacity(increments.len() + 1);
    drive(params, map, kind, increments, h, |_, v| y.push(v))?;
    let t = (0..y.len()).map(|k| k as f64 * h).collect();
    Ok(Trajectory { t, y })
}

/// Same recursion as [`integrate`] but only keeps the terminal value.
pub fn terminal_value<M: CorrectiveMap>(
    params: &ModelParams,
    map: &M,
    kind: SchemeKind,
    increments: &[f64],
    h: f64,
    t_end: f64,
) -> Result<f64> {
    check_grid(increments, h, t_end)?;
    drive(params, map, kind, increments, h, |_, _| {})
}
