use thiserror::Error;

use crate::schemes::SchemeKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// BEM was asked to step with `h >= 1/alpha_1`.
    #[error("step size h = {h} violates h < 1/alpha_1 = {limit}")]
    StepSize { h: f64, limit: f64 },

    /// The safeguarded Newton iteration ran out of budget.
    #[error("root finder did not converge after {iterations} iterations (last residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    /// A step failed inside a path integration.
    #[error("{scheme} step {index} failed: {source}")]
    Step {
        scheme: SchemeKind,
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// A path failed inside a Monte Carlo sweep.
    #[error("{scheme} at level {level}, path {path}: {source}")]
    Experiment {
        scheme: SchemeKind,
        level: u32,
        path: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Innermost error after peeling off step/path context.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Step { source, .. } | Error::Experiment { source, .. } => source.root_cause(),
            other => other,
        }
    }

    /// Stable machine-readable code, also used as the CLI exit status.
    pub fn code(&self) -> (&'static str, i32) {
        match self.root_cause() {
            Error::Config(_) => ("CONFIG", 2),
            Error::Domain(_) => ("DOMAIN", 3),
            Error::StepSize { .. } => ("STEP_SIZE", 4),
            Error::Convergence { .. } => ("CONVERGENCE", 5),
            Error::Io(_) => ("IO", 6),
            Error::Step { .. } | Error::Experiment { .. } => unreachable!(),
        }
    }
}
