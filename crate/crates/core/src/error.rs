use thiserror::Error;

/// Errors raised by the classification pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("polynomial is not irreducible over the residue field")]
    NotIrreducible,

    #[error("residue factors are not pairwise coprime")]
    NotCoprime,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("Newton polygon does not lie on or above the Young polygon of {0:?}")]
    NotDominated(Vec<u32>),

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("expected exact polynomial quotient: {0}")]
    NotPolynomial(String),

    #[error("presentation matrix is singular modulo the maximal ideal")]
    SingularPresentation,

    #[error("functional equation violated at coefficient {index}")]
    FunctionalEquationViolated { index: usize },

    #[error("roots do not all have absolute value sqrt(q)")]
    RootModulusSuspect,

    #[error("ell equals the characteristic p = {0}")]
    EllEqualsP(u64),

    #[error("Weil polynomial has multiple roots; use the surface classification for degree 4")]
    NotSquarefree,

    #[error("expected a degree-{expected} polynomial, got degree {found}")]
    WrongDegree { expected: usize, found: usize },

    #[error("constant term is zero")]
    ZeroConstantTerm,

    #[error("no dual partner for residue factor {0}")]
    UnpairedFactor(String),

    #[error("b-vector sums to {0}, expected 16")]
    BadBVector(u64),

    #[error("characteristic two is not supported")]
    CharacteristicTwo,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
