use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument outside the domain of the operation (zero where a
    /// nonzero value is required, a residue without a lift, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("incomplete factorization: residual {residual} could not be split")]
    IncompleteFactorization { residual: String },

    /// A value that must be prime is not.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// Explicit constants that fail the conditions required by the proof.
    #[error("constants rejected: eps={epsilon}, N={n}, alpha={alpha} (cond1: {cond1}, cond2: {cond2})")]
    ConstantsRejected {
        epsilon: String,
        n: u64,
        alpha: String,
        cond1: bool,
        cond2: bool,
    },

    /// Two coordinates of an auxiliary point coincide, so a linear form
    /// vanishes there.
    #[error("degenerate form: entry {index:?} equals entry {pivot:?} at place {place}")]
    DegenerateForm {
        place: String,
        index: (usize, usize),
        pivot: (usize, usize),
    },

    /// A pair of coordinates that the curve argument needs to be distinct
    /// coincide; the point is multiplicatively dependent.
    #[error("multiplicative dependence: entries {left:?} and {right:?} coincide")]
    MultiplicativeDependence {
        left: (usize, usize),
        right: (usize, usize),
    },

    /// A mathematical invariant that must hold failed. Always a bug or an
    /// invalid input that slipped past validation.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
