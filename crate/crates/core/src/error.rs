use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus reduces mod p to a polynomial with distinct irreducible factors; the algebra is not local")]
    NotLocal,
    #[error("modulus degree {0} exceeds the brute-force factorization bound")]
    DegreeTooLarge(usize),
    #[error("operation not supported for {0} rings")]
    WrongKind(&'static str),
    #[error("ring parameters do not match: {0}")]
    PrecisionMismatch(String),
    #[error("p^N = {0} does not fit the single-word arithmetic bound")]
    ModulusTooLarge(u128),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Teichmüller lift of zero requested")]
    ZeroResidue,
    #[error("element has nonzero Witt-direction components and does not descend")]
    NotScalar,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent overflow: |e| must stay below 2^31")]
    ExponentOverflow,
    #[error("coordinate {0} of the evaluation point is not invertible")]
    NonInvertibleCoordinate(usize),
    #[error("series constant term is not a unit")]
    NonUnitConstantTerm,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no normalizing exponent found up to {0}")]
    SearchExhausted(u32),
    #[error("leading coefficient of the divisor is not a unit; exact division undecidable")]
    DivisionUndecidable,
    #[error("point degree {requested} exceeds the configured bound {bound}")]
    DegreeBoundExceeded { requested: usize, bound: usize },
    #[error("locus polynomials must have coefficients in the prime subring")]
    NonIntegerCoefficient,
    #[error("crystal is not in normal form: {0}")]
    NormalFormMissing(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
