//! A desk-scale laboratory for mutual forbearance between two conglomerate
//! firms under incomplete information.
//!
//! The crate bundles four pieces that feed each other:
//!
//! - [`econ`] — static primitives: firm growth under an information index,
//!   stage profit on linear differentiated demand, best-response pricing,
//!   aggregate demand and a Cobb–Douglas production core.
//! - [`game`] — the repeated two-firm Bertrand game: grim-trigger play,
//!   discounted payoffs, the critical discount factor for sustainable
//!   cooperation and a collusion index.
//! - [`dynamics`] — the planar affine growth system: eigenvalues, stability
//!   classification, equilibrium, RK4 trajectories and phase-portrait export
//!   (SVG quiver plots plus CSV grids, see [`plot`]).
//! - [`panel`] / [`econometrics`] — synthetic firm-year panels and
//!   from-scratch GLM (Gaussian identity) and fixed-effects estimation with
//!   classical inference.
//!
//! Everything is deterministic given a seed. The `examples/` directory holds
//! one runnable program per capability; the `forbearance` binary exposes the
//! same pipelines as subcommands.

pub mod cli;
pub mod dynamics;
pub mod econ;
pub mod econometrics;
pub mod game;
pub mod linalg;
pub mod panel;
pub mod plot;
pub mod tdist;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A value violates a domain invariant (bounds, finiteness, ordering).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A linear system has no unique solution.
    #[error("singular system: {0}")]
    Singular(String),
    /// A design matrix column is (numerically) linearly dependent.
    #[error("rank-deficient design: column `{column}` is linearly dependent on earlier columns")]
    RankDeficient { column: String },
    /// Not enough data to run the requested estimator.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// A CSV record failed to parse or validate.
    #[error("csv line {line}: {message}")]
    Csv { line: u64, message: String },
    /// Numerical integration left the finite range.
    #[error("trajectory diverged at t = {t}")]
    Diverged { t: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Checks that `value` is finite, naming the offending field otherwise.
pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {value}")))
    }
}
