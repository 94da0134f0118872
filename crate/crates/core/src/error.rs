use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Lattice size above the configured enumeration limit.
    #[error("lattice size N={n} exceeds enumeration limit N_max={max}")]
    SizeLimit { n: usize, max: usize },

    /// An explicit sum would exceed the configured term-count cap.
    #[error("explicit sum needs {terms} terms, above the cap of {cap}")]
    TermCap { terms: u128, cap: u128 },

    /// The exact result would involve an irrational power.
    #[error("irrational prefactor: {0}")]
    IrrationalPrefactor(String),

    /// A floating-point evaluation lost too many significant bits.
    #[error("loss of significance: estimated relative error 2^{log2_error:.1} exceeds 2^-32")]
    LossOfSignificance { log2_error: f64 },

    /// A resolvent was evaluated on its branch cut.
    #[error("point {0} lies on the branch cut of the resolvent")]
    OnCut(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
