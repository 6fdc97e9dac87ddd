//! Coefficients of the generalised Aït-Sahalia interest-rate model
//!
//! ```text
//! dX = (a₋₁/X − a₀ + a₁X − a₂X^r) dt + σ X^ρ dW,   X₀ = x0 > 0
//! ```
//!
//! The polynomial pieces are split out as `f(x) = −a₂x^r`, `g(x) = σx^ρ` and the
//! Milstein coefficient `ĝ(x) = g'(x)g(x) = ρσ²x^(2ρ−1)`.

use std::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance for deciding `r + 1 = 2ρ`.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub alpha_m1: f64,
    pub alpha_0: f64,
    pub alpha_1: f64,
    pub alpha_2: f64,
    pub sigma: f64,
    pub r: f64,
    pub rho: f64,
    pub x0: f64,
}

/// Which convergence regime a parameter set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `r + 1 > 2ρ`.
    NonCritical,
    /// `r + 1 = 2ρ` and `a₂/σ² ≥ 4r + 1/2`: order one applies.
    CriticalOrderOne,
    /// `r + 1 = 2ρ` and `(r + 2 + 1/r)/8 < a₂/σ² < 4r + 1/2`: the model is well
    /// behaved but only the order-1/2 theory is available.
    CriticalHalfOnly,
    Inadmissible,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::NonCritical => "non-critical",
            Regime::CriticalOrderOne => "critical (order one)",
            Regime::CriticalHalfOnly => "critical (order 1/2 only)",
            Regime::Inadmissible => "inadmissible",
        };
        f.write_str(s)
    }
}

impl ModelParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha_m1: f64,
        alpha_0: f64,
        alpha_1: f64,
        alpha_2: f64,
        sigma: f64,
        r: f64,
        rho: f64,
        x0: f64,
    ) -> Result<Self> {
        ModelParams {
            alpha_m1,
            alpha_0,
            alpha_1,
            alpha_2,
            sigma,
            r,
            rho,
            x0,
        }
        .validate()
    }

    /// Non-critical case `r = 4, ρ = 1.5`.
    pub fn example1() -> Self {
        Self::with_exponents(4.0, 1.5)
    }

    /// Critical case `r = 3, ρ = 2`.
    pub fn example2() -> Self {
        Self::with_exponents(3.0, 2.0)
    }

    /// Critical case `r = 2, ρ = 1.5`.
    pub fn example3() -> Self {
        Self::with_exponents(2.0, 1.5)
    }

    fn with_exponents(r: f64, rho: f64) -> Self {
        ModelParams {
            alpha_m1: 1.5,
            alpha_0: 2.0,
            alpha_1: 1.0,
            alpha_2: 13.0,
            sigma: 1.0,
            r,
            rho,
            x0: 0.5,
        }
    }

    /// Returns `self` unchanged if every coefficient constraint holds, otherwise
    /// an error naming the first violated one.
    pub fn validate(self) -> Result<Self> {
        let positive = [
            ("alpha_m1", self.alpha_m1),
            ("alpha_0", self.alpha_0),
            ("alpha_1", self.alpha_1),
            ("alpha_2", self.alpha_2),
            ("sigma", self.sigma),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be a finite positive number, got {v}")));
            }
        }
        if !(self.r > 1.0 && self.r.is_finite()) {
            return Err(Error::domain(format!("r must be > 1, got {}", self.r)));
        }
        if !(self.rho > 1.0 && self.rho.is_finite()) {
            return Err(Error::domain(format!("rho must be > 1, got {}", self.rho)));
        }
        if self.r + 1.0 < 2.0 * self.rho - CRITICAL_TOLERANCE {
            return Err(Error::domain(format!(
                "admissibility requires r + 1 >= 2 rho, got r + 1 = {} < {} = 2 rho",
                self.r + 1.0,
                2.0 * self.rho
            )));
        }
        if !(self.x0 > 0.0 && self.x0.is_finite()) {
            return Err(Error::domain(format!("x0 must be a finite positive number, got {}", self.x0)));
        }
        Ok(self)
    }

    pub fn is_critical(&self) -> bool {
        (self.r + 1.0 - 2.0 * self.rho).abs() <= CRITICAL_TOLERANCE
    }

    /// `4r + 1/2`, the smallest `a₂/σ²` for which the order-one result covers the
    /// critical case.
    pub fn order_one_threshold(&self) -> f64 {
        4.0 * self.r + 0.5
    }

    /// `(r + 2 + 1/r)/8`, below which the critical case loses its monotonicity
    /// estimate.
    pub fn monotonicity_threshold(&self) -> f64 {
        (self.r + 2.0 + 1.0 / self.r) / 8.0
    }

    pub fn classify_regime(&self) -> Regime {
        if self.is_critical() {
            let ratio = self.alpha_2 / (self.sigma * self.sigma);
            if ratio >= self.order_one_threshold() {
                Regime::CriticalOrderOne
            } else if ratio > self.monotonicity_threshold() {
                Regime::CriticalHalfOnly
            } else {
                Regime::Inadmissible
            }
        } else if self.r + 1.0 > 2.0 * self.rho {
            Regime::NonCritical
        } else {
            Regime::Inadmissible
        }
    }

    pub fn drift(&self, x: f64) -> Result<f64> {
        check_state(x)?;
        Ok(self.drift_unchecked(x))
    }

    pub fn f(&self, x: f64) -> Result<f64> {
        check_state(x)?;
        Ok(self.f_unchecked(x))
    }

    pub fn g(&self, x: f64) -> Result<f64> {
        check_state(x)?;
        Ok(self.g_unchecked(x))
    }

    /// `g'(x) = ρσx^(ρ−1)`.
    pub fn g_prime(&self, x: f64) -> Result<f64> {
        check_state(x)?;
        Ok(self.rho * self.sigma * x.powf(self.rho - 1.0))
    }

    pub fn g_hat(&self, x: f64) -> Result<f64> {
        check_state(x)?;
        Ok(self.g_hat_unchecked(x))
    }

    #[inline]
    pub(crate) fn drift_unchecked(&self, x: f64) -> f64 {
        self.alpha_m1 / x - self.alpha_0 + self.alpha_1 * x + self.f_unchecked(x)
    }

    #[inline]
    pub(crate) fn f_unchecked(&self, x: f64) -> f64 {
        -self.alpha_2 * x.powf(self.r)
    }

    #[inline]
    pub(crate) fn g_unchecked(&self, x: f64) -> f64 {
        self.sigma * x.powf(self.rho)
    }

    #[inline]
    pub(crate) fn g_hat_unchecked(&self, x: f64) -> f64 {
        self.rho * self.sigma * self.sigma * x.powf(2.0 * self.rho - 1.0)
    }
}

/// Free-function form of [`ModelParams::validate`].
pub fn validate(params: ModelParams) -> Result<ModelParams> {
    params.validate()
}

/// Free-function form of [`ModelParams::classify_regime`].
pub fn classify_regime(params: &ModelParams) -> Regime {
    params.classify_regime()
}

fn check_state(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("state must be a finite positive number, got {x}")))
    }
}
