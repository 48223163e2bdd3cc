use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid subsystem layout: {0}")]
    InvalidLayout(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid subsystem selection {indices:?} for a layout with {subsystems} subsystems")]
    InvalidSubsystems {
        indices: Vec<usize>,
        subsystems: usize,
    },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("operator trace is {0}, expected 1")]
    NotUnitTrace(f64),

    #[error("operator has a negative eigenvalue {0:e}")]
    NotPositive(f64),

    #[error(
        "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})"
    )]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("wire {wire} is out of range for a circuit of width {width}")]
    WireOutOfRange { wire: usize, width: usize },

    #[error("controlled-NOT control and target are both wire {0}")]
    WireClash(usize),

    #[error("wire {wire} has dimension {dim}, gates act on qubits only")]
    NotAQubit { wire: usize, dim: usize },

    #[error("circuit width {circuit} does not match state width {state}")]
    WidthMismatch { circuit: usize, state: usize },

    #[error("{name} = {value} is out of range ({allowed})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        allowed: &'static str,
    },

    #[error("the ideal state is maximally mixed, the scaling factor is undefined")]
    DegenerateFit,

    #[error("clone pairs differ by {0:e}, expected identical marginals")]
    AsymmetricPairs(f64),

    #[error("circuit text, line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range<T>(name: &'static str, value: f64, allowed: &'static str) -> Result<T> {
    Err(Error::OutOfRange {
        name,
        value,
        allowed,
    })
}
