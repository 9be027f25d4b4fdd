//! Statevector simulation and spectral analysis of quantum search driven by an
//! arbitrary diffusion operator.
//!
//! The search iterate is `S = D_s · I_t^φ`, where `D_s` is any unitary fixing a
//! known source state |s⟩ and `I_t^φ` rotates the phase of the unknown target
//! basis state by `e^{iφ}`. The crate provides:
//!
//! - [`spectrum`]: synthesis of concrete `D_s` operators from declarative
//!   eigenspectrum recipes, and the overlap-weighted cotangent moments that
//!   govern search performance.
//! - [`engine`]: dense statevector iteration of `S` and success-probability
//!   curves.
//! - [`analysis`]: the exact secular equation for the eigenphases of `S`
//!   (interlaced bisection), the two-level closed forms for the slow
//!   eigenphases λ±, and performance predictions (q_m, β, query cost).
//! - [`pea`]: a coherent phase-estimation circuit approximating the selective
//!   inversion of |s⟩ from black-box applications of `D_s`, with per-eigenstate
//!   error and query accounting.
//! - [`amplify`]: amplitude amplification on top of `S^{q_m}|s⟩` with exact or
//!   phase-estimated reflections, cost ledgers, and the fast-search condition
//!   classifier.
//! - [`scenario`]: named, seeded experiment configurations used by the CLI and
//!   the acceptance suite.

pub mod amplify;
pub mod analysis;
pub mod engine;
pub mod linalg;
pub mod pea;
pub mod scenario;
pub mod spectrum;

use thiserror::Error;

/// Crate-wide error type. `exit_code` groups variants into the CLI's
/// validation (2) vs numerical-failure (3) classes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("infeasible overlap geometry: {0}")]
    Infeasible(String),
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("simulation budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no maximum found up to q_max; boundary value P({q}) = {p}")]
    NoMaximum { q: usize, p: f64 },
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI exit code class: 2 = validation, 3 = numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidSpec(_)
            | Error::Infeasible(_)
            | Error::DegenerateSpectrum(_)
            | Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch(_)
            | Error::BudgetExceeded(_)
            | Error::UnknownScenario(_)
            | Error::Json(_) => 2,
            Error::NoMaximum { .. } | Error::RootFinding(_) | Error::Numerical(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
