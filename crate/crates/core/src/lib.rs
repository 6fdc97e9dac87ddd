//! Positivity-preserving time stepping for the Aït-Sahalia interest-rate model.
//!
//! The semi-implicit projected Milstein method (SIPMM) truncates the current
//! state, applies the explicit Milstein terms and resolves the `a₋₁/Y` drift
//! implicitly through a closed-form quadratic root. Every step is positive for
//! every step size, and the scheme converges with strong order one.
//!
//! Modules:
//! - [`model`]: coefficients, validation and regime classification
//! - [`projection`]: the truncation operator applied before each step
//! - [`schemes`]: SIPMM, the Euler variant SIPEM, and backward Euler (BEM)
//! - [`brownian`]: keyed Brownian lattices and exact coarsening
//! - [`harness`]: strong-error estimation, rate fits, positivity stress, timing
//! - [`diagnostics`]: randomized residual and corrective-map property sweeps
//! - [`cli`]: config files, CSV/SVG/manifest output for the `sipmm` binary

pub mod brownian;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod model;
pub mod projection;
pub mod schemes;

pub use brownian::BrownianLattice;
pub use error::{Error, Result};
pub use harness::{
    fit_rate, positivity_stress, run_strong_error, time_schemes, ConvergenceReport, ExperimentConfig, RateFit,
};
pub use model::{ModelParams, Regime};
pub use projection::{CorrectiveMap, ProjectionConfig};
pub use schemes::{integrate, SchemeKind, StepInput, Trajectory};
