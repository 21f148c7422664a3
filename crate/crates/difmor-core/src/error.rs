//! Error type shared by all modules of the crate.

use alloc::string::String;
use core::fmt;

/// Everything that can go wrong below the IO layer.
///
/// Validation *findings* (an algebra that fails associativity, say) are not
/// errors: validators return reports. `Error` is reserved for inputs that
/// are structurally unusable (dimension mismatches), for broken
/// preconditions, and for mathematically impossible requests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two objects that must agree in dimension do not.
    Dimension {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    /// Consecutive differentials failed to compose to zero.
    BrokenComplex { lower: usize, upper: usize },
    /// A quotient `V/W` was requested with `W ⊄ V`.
    NotContained,
    /// A cochain fed to a cohomology-level operation is not a cocycle.
    NotACocycle { degree: usize },
    /// A deformation-level operation was given an invalid deformation.
    InvalidDeformation { detail: String },
    /// An operation needs matching truncation orders or weights.
    Incompatible { context: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension {
                context,
                expected,
                got,
            } => write!(f, "dimension mismatch in {context}: expected {expected}, got {got}"),
            Error::BrokenComplex { lower, upper } => write!(
                f,
                "differentials at degrees {lower} and {upper} do not compose to zero"
            ),
            Error::NotContained => write!(f, "denominator subspace is not contained in the numerator"),
            Error::NotACocycle { degree } => write!(f, "cochain of degree {degree} is not a cocycle"),
            Error::InvalidDeformation { detail } => write!(f, "invalid deformation: {detail}"),
            Error::Incompatible { context } => write!(f, "incompatible inputs: {context}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
