use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The laser sits inside the refused band around an S-P resonance.
    #[error(
        "laser frequency {omega_laser:e} rad/s is within {guard_linewidths} linewidths of the {transition} resonance"
    )]
    GuardBandViolation {
        omega_laser: f64,
        transition: &'static str,
        guard_linewidths: f64,
    },

    #[error("no sign change of {quantity} on [{lo:e}, {hi:e}]")]
    NoSignChange {
        quantity: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("quadrature did not reach relative tolerance {tolerance:e} within {budget} subdivisions")]
    QuadratureFailure { tolerance: f64, budget: usize },

    #[error("geometry {geometry} cannot be placed: {reason}")]
    GeometryUnresolvable {
        geometry: &'static str,
        reason: String,
    },

    /// psi+ - psi- is (numerically) zero, so no intensity produces a gate.
    #[error("differential dipole coefficient cancels at {omega_laser:e} rad/s (|psi+ - psi-| = {differential:e})")]
    DifferentialCancellation { omega_laser: f64, differential: f64 },

    #[error("no gate solution: {0}")]
    NoSolution(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Malformed data or configuration document.
    #[error("{origin}:{line}: {message}")]
    Schema {
        origin: String,
        line: usize,
        message: String,
    },
}

impl Error {
    /// True for errors that stem from physics (resonances, cancellations,
    /// unreachable designs) rather than from malformed input.
    pub fn is_physics(&self) -> bool {
        matches!(
            self,
            Error::GuardBandViolation { .. }
                | Error::DifferentialCancellation { .. }
                | Error::NoSolution(_)
                | Error::NoSignChange { .. }
                | Error::QuadratureFailure { .. }
                | Error::GeometryUnresolvable { .. }
        )
    }
}
