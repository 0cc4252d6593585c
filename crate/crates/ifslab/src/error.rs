//! Library error types.
//!
//! Every fallible public operation returns [`Error`]. Variants separate
//! *input* problems (malformed systems), *refusals* (hypotheses not
//! satisfied, so no answer is produced), and *numeric* failures (a solver
//! could not certify its result) so callers can map them to distinct exit
//! codes without parsing messages.

use thiserror::Error;

/// Unified error type for system analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The system description itself is malformed (dimension mismatches,
    /// empty map list, non-finite entries).
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// A map that is required to be invertible is singular.
    #[error("map {index} has singular linear part (|det| = {det:.3e})")]
    SingularMap {
        /// Position of the offending map in the system's list.
        index: usize,
        /// Magnitude of the determinant that failed the invertibility test.
        det: f64,
    },

    /// No uniform contraction bound could be certified for any word
    /// length within budget; orbit-based analysis would be meaningless.
    #[error("could not certify contraction for word lengths 1..={max_word}: \
             minimal uniform bound found was {best_bound:.6}")]
    NotContractive {
        /// Largest word length that was examined.
        max_word: usize,
        /// Smallest uniform operator-norm bound seen at any examined length.
        best_bound: f64,
    },

    /// The system fits none of the supported structural families; no
    /// dimension equation is produced. The notes say which hypotheses
    /// failed and why.
    #[error("system does not fit a supported structural family: {}", notes.join("; "))]
    Unclassified {
        /// One entry per failed hypothesis, in the order they were tested.
        notes: Vec<String>,
    },

    /// A structural hypothesis required by the requested analysis does not
    /// hold (for example, asking for a two-map planar certificate on a
    /// three-map system).
    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),

    /// The equation solver failed to certify a unique root.
    #[error("dimension equation root failure: {0}")]
    RootFailure(String),

    /// A separation certificate could not be constructed.
    #[error("certificate construction failed: {0}")]
    CertificateConstruction(String),

    /// A constructed certificate failed its own independent verification.
    #[error("certificate verification failed: {0}")]
    CertificateVerification(String),

    /// An orbit left the divergence guard; the system is not contractive
    /// in practice even if a bound was certified (indicates inconsistent
    /// input or overflow).
    #[error("orbit diverged after {steps} steps (coordinate magnitude exceeded {guard:.1e})")]
    OrbitDiverged {
        /// Number of iterations completed before the guard tripped.
        steps: usize,
        /// The magnitude guard that was exceeded.
        guard: f64,
    },

    /// Empirical measurement was asked of data that cannot support it
    /// (too few points, zero diameter, no overlap region).
    #[error("measurement not possible: {0}")]
    Measurement(String),

    /// An input/output operation failed while writing an export.
    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
