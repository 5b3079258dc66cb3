//! Error type shared by all modules.

use core::fmt;

/// Failure modes of the scattering and threshold computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// Input outside the mathematical domain of the requested operation.
    /// The payload names the violated condition.
    Domain(&'static str),
    /// Transmitted and reflected spinor ratios coincide; the continuity
    /// system is singular and no amplitudes exist.
    DegenerateChannels,
    /// The incident electron never crosses the modulation front, so no
    /// scattering event takes place.
    NoScattering,
    /// The vector-potential offset is not smaller than a positive scalar
    /// offset, so the gap parameterization does not apply.
    InvalidGapCondition,
    /// A bracketing scan found no sign change.
    NoRoot,
    /// Static transmitted channel is evanescent; no propagating solution.
    EvanescentStatic,
    /// A quantity that must hold by construction failed its internal check.
    InternalConsistency(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::DegenerateChannels => {
                write!(f, "degenerate channels: transmitted and reflected spinors coincide")
            }
            Error::NoScattering => write!(f, "no scattering: electron cannot reach the front"),
            Error::InvalidGapCondition => {
                write!(f, "invalid gap condition: vector offset ratio must stay below 1")
            }
            Error::NoRoot => write!(f, "no sign change found in bracket"),
            Error::EvanescentStatic => write!(f, "static transmitted channel is evanescent"),
            Error::InternalConsistency(what) => write!(f, "internal consistency: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
