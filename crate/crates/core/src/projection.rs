//! Step-size dependent corrective mappings applied to the state before the
//! explicit part of a step.
//!
//! The shipped mapping is the truncation `P_h(x) = min{1, h^(−q)/|x|}·x`, which on
//! the positive half-line is simply `min(x, h^(−q))`.

use crate::error::{Error, Result};

/// A corrective mapping `Φ_h: (0, ∞) → (0, ∞)`.
///
/// Implementations must satisfy `Φ_h(x) ≤ x`, be non-expansive up to `1 + L₂h`, and
/// keep `f∘Φ_h` and `ĝ∘Φ_h` Lipschitz with constant `O(h^(−1/2))`.
pub trait CorrectiveMap: Sync {
    type AtStep: StepMap;

    /// Freezes the step size so repeated application does not recompute
    /// step-dependent quantities.
    fn at_step(&self, h: f64) -> Self::AtStep;

    fn apply(&self, h: f64, x: f64) -> f64 {
        self.at_step(h).apply(x)
    }

    fn name(&self) -> String;
}

/// A corrective mapping with its step size fixed.
pub trait StepMap: Copy {
    fn apply(&self, x: f64) -> f64;
}

/// Exponent configuration of the truncation operator `P_h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionConfig {
    q: f64,
    r: f64,
}

/// Admissible range slack for decimal-literal exponents.
const RANGE_SLACK: f64 = 1e-12;

impl ProjectionConfig {
    /// Builds a config after checking `1/(2r) ≤ q ≤ 1/(2r−2)`.
    pub fn new(q: f64, r: f64) -> Result<Self> {
        if !(r > 1.0 && r.is_finite()) {
            return Err(Error::domain(format!("projection needs r > 1, got {r}")));
        }
        let (lo, hi) = admissible_range(r);
        if !(q >= lo * (1.0 - RANGE_SLACK) && q <= hi * (1.0 + RANGE_SLACK)) {
            return Err(Error::domain(format!(
                "projection exponent q = {q} outside [1/(2r), 1/(2r-2)] = [{lo}, {hi}]"
            )));
        }
        Ok(ProjectionConfig { q, r })
    }

    /// Largest admissible exponent, `q = 1/(2r−2)`.
    pub fn with_default_exponent(r: f64) -> Result<Self> {
        Self::new(default_exponent(r), r)
    }

    /// Smallest admissible exponent, `q = 1/(2r)`.
    pub fn with_smallest_exponent(r: f64) -> Result<Self> {
        Self::new(1.0 / (2.0 * r), r)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Truncation level `h^(−q)`.
    pub fn cap(&self, h: f64) -> f64 {
        h.powf(-self.q)
    }

    /// Checked `P_h(x)`.
    pub fn project(&self, h: f64, x: f64) -> Result<f64> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::domain(format!("step size must be positive, got {h}")));
        }
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::domain(format!("projected state must be positive, got {x}")));
        }
        Ok(self.apply(h, x))
    }
}

/// `P_h` with `h` frozen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub cap: f64,
}

impl StepMap for Truncation {
    #[inline]
    fn apply(&self, x: f64) -> f64 {
        x.min(self.cap)
    }
}

impl CorrectiveMap for ProjectionConfig {
    type AtStep = Truncation;

    fn at_step(&self, h: f64) -> Truncation {
        Truncation { cap: self.cap(h) }
    }

    fn name(&self) -> String {
        format!("truncation(q={})", self.q)
    }
}

/// The exponent used in the reference experiments, `1/(2r−2)`: the weakest
/// admissible truncation.
pub fn default_exponent(r: f64) -> f64 {
    1.0 / (2.0 * r - 2.0)
}

/// `[1/(2r), 1/(2r−2)]`.
pub fn admissible_range(r: f64) -> (f64, f64) {
    (1.0 / (2.0 * r), default_exponent(r))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn default_exponents() {
        assert_eq!(default_exponent(4.0), 1.0 / 6.0);
        assert_eq!(default_exponent(2.0), 0.5);
        assert_eq!(default_exponent(3.0), 0.25);
    }

    #[test]
    fn identity_below_cap() {
        let cfg = ProjectionConfig::with_default_exponent(4.0).unwrap();
        let h = 2f64.powi(-6);
        assert_eq!(cfg.project(h, 0.5).unwrap(), 0.5);
        assert_eq!(cfg.project(h, 1.999).unwrap(), 1.999);
    }

    #[test]
    fn dyadic_cap() {
        let cfg = ProjectionConfig::new(1.0 / 6.0, 4.0).unwrap();
        let h = 2f64.powi(-6);
        assert_eq!(cfg.cap(h), 2.0);
        assert_eq!(cfg.project(h, 100.0).unwrap(), 2.0);
    }

    #[test]
    fn rejects_out_of_range_exponent() {
        assert!(ProjectionConfig::new(0.1, 4.0).is_err());
        assert!(ProjectionConfig::new(0.2, 4.0).is_err());
        assert!(ProjectionConfig::new(0.125, 4.0).is_ok());
        assert!(ProjectionConfig::new(0.5, 1.0).is_err());
        // decimal literal of 1/6
        assert!(ProjectionConfig::new(0.16666666666666666, 4.0).is_ok());
    }

    #[test]
    fn rejects_nonpositive_arguments() {
        let cfg = ProjectionConfig::with_default_exponent(2.0).unwrap();
        assert!(cfg.project(0.0, 1.0).is_err());
        assert!(cfg.project(0.1, 0.0).is_err());
        assert!(cfg.project(0.1, -3.0).is_err());
    }

    fn config() -> impl Strategy<Value = ProjectionConfig> {
        (1.05f64..6.0, 0.0f64..=1.0).prop_map(|(r, t)| {
            let (lo, hi) = admissible_range(r);
            ProjectionConfig::new(lo + t * (hi - lo), r).unwrap()
        })
    }

    proptest! {
        #[test]
        fn never_grows_and_respects_cap(cfg in config(), h in 1e-6f64..=1.0, x in 1e-6f64..1e3) {
            let p = cfg.project(h, x).unwrap();
            prop_assert!(p > 0.0);
            prop_assert!(p <= x);
            prop_assert!(p <= cfg.cap(h));
        }

        #[test]
        fn non_expansive(cfg in config(), h in 1e-6f64..=1.0, x in 1e-6f64..1e3, y in 1e-6f64..1e3) {
            let d = (cfg.project(h, x).unwrap() - cfg.project(h, y).unwrap()).abs();
            prop_assert!(d <= (x - y).abs());
        }
    }
}
