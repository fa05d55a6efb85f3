use thiserror::Error;

/// Errors raised by space construction, operator algebra and the lattice layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToyError {
    #[error("invalid roster: {0}")]
    InvalidRoster(String),

    #[error("unknown mode id {0}")]
    UnknownMode(usize),

    #[error("state {0} is not in the basis")]
    NotInBasis(String),

    #[error("operands act on different spaces")]
    SpaceMismatch,

    #[error("missing mode: {0}")]
    MissingMode(String),

    #[error("mode {0} appears more than once in a field")]
    DuplicateTerm(usize),

    #[error("contributing kets differ outside the two classified modes")]
    NotAForm,

    #[error("operator is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("hyperboloid of mass {0} contains a zero-energy point; 1/p0 is undefined")]
    DivisionByZeroEnergy(u32),

    #[error("roster is empty for masses ({0}, {1}) at max energy {2}")]
    EmptyRoster(u32, u32, u32),

    #[error("eigensolver failed to converge")]
    EigenSolver,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, ToyError>;
