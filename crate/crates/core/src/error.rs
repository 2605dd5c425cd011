use thiserror::Error;

/// Errors raised by the engine.
///
/// The CLI maps these onto exit codes, see [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in the supported range (2 < p < 2^31)")]
    InvalidModulus(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operands live over different fields (p = {0} vs p = {1})")]
    FieldMismatch(u32, u32),

    #[error("matrix is singular")]
    Singular,

    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,

    #[error("degree of {monomial} is out of the bounds {bounds:?}")]
    DegreeOutOfBounds { monomial: String, bounds: Vec<u32> },

    #[error("exponent overflow in variable X{0}")]
    ExponentOverflow(usize),

    #[error("staircase is infinite: component {component} has no pure power of X{variable} among the leading monomials")]
    InfiniteStaircase { component: usize, variable: usize },

    #[error("leading monomials are not minimal: {0} divides {1}")]
    NotMinimal(String, String),

    #[error("matrices M{0} and M{1} do not commute")]
    NonCommuting(usize, usize),

    #[error("basis is not reduced: {0}")]
    NotReduced(String),

    #[error("structural assumption fails at generator {generator}: (X{i}/X{j}) * {generator} is not in the leading module")]
    AssumptionViolated { generator: String, i: usize, j: usize },

    #[error("normal form residual is nonzero: input row {0} is outside the row space of the basis matrix")]
    ResidualNonZero(usize),

    #[error("size limit exceeded: {requested} rows requested, limit is {limit}")]
    SizeLimit { requested: usize, limit: usize },

    #[error("duplicate point {0}")]
    DuplicatePoint(String),

    #[error("invalid monomial order `{0}`")]
    InvalidOrder(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for this failure class.
    ///
    /// 2: malformed input, 3: instance validation, 4: internal invariant,
    /// 5: structural assumption.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonCommuting(..) => 3,
            Error::AssumptionViolated { .. } => 5,
            Error::ResidualNonZero(_) | Error::Internal(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
