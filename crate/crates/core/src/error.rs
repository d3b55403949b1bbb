use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A density matrix or parameter set that is not a physical state.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A negative eigenvalue beyond the clipping tolerance.
    #[error("negative eigenvalue {value:e} (index {index})")]
    NegativeEigenvalue { index: usize, value: f64 },

    /// Inputs outside the domain where a closed form is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error(
        "quadrature did not converge: estimate {estimate:e}, achieved error {achieved:e}, requested {requested:e}"
    )]
    Quadrature {
        estimate: f64,
        achieved: f64,
        requested: f64,
    },

    /// The critic-time search could not bracket or resolve a root.
    #[error("root finding unresolved: {0}")]
    RootFind(String),

    /// The measurement-grid refinement did not settle.
    #[error("measurement refinement not converged (last change {last_change:e}); best conditional entropy {best:.12} at theta={theta}, phi={phi}")]
    Refinement {
        best: f64,
        theta: f64,
        phi: f64,
        last_change: f64,
    },

    /// The amplification rate is undefined because the initial discord vanishes.
    #[error("amplification rate undefined: initial discord is {0:e}")]
    UndefinedRate(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
