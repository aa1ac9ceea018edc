use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors raised by the arithmetic layers.
///
/// `code()` gives the stable machine-readable tag used in JSON error reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("minimal polynomial is reducible: found factor {factor}")]
    Reducible { factor: String },
    #[error("polynomial has only {real_roots} real roots out of {degree}")]
    NotTotallyReal { real_roots: usize, degree: usize },
    #[error("degree {0} outside the supported range 1..=6")]
    BadDegree(usize),
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires a quadratic field, got degree {0}")]
    NotQuadratic(usize),
    #[error("operation requires an integral minimal polynomial")]
    NonIntegralMinpoly,
    #[error("quadratic form is degenerate")]
    Degenerate,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("gram matrix is not integral")]
    NotIntegral,
    #[error("lattice is not even")]
    NotEven,
    #[error("Hilbert symbol of a zero argument")]
    ZeroInput,
    #[error("local symbol machinery requires a real quadratic field, got degree {0}")]
    NotQuadraticField(usize),
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("no quaternion algebra found with |a|,|b| <= {bound}")]
    SearchExhausted { bound: u64 },
    #[error("Brauer class has odd number of ramified places ({0})")]
    OddRamification(usize),
    #[error("archimedean ramification condition fails: ramified at {ramified} of {degree} real places")]
    RamConditionViolated { ramified: usize, degree: usize },
    #[error("corestriction class contradicts the parity rule for degree {degree}")]
    ParityViolated { degree: usize },
    #[error("center of the even Clifford algebra splits: discriminant is a rational square, so the quadric splits over Q and the fourfold is not simple")]
    SplitCenter,
    #[error("center of the even Clifford algebra is imaginary quadratic (discriminant {0})")]
    NotRealQuadratic(String),
    #[error("character is not Weyl-symmetric")]
    NotWeylSymmetric,
    #[error("character is not a nonnegative combination of irreducibles")]
    NotDecomposable,
    #[error("weight {weight} out of range for cohomological weight {m}")]
    WeightOutOfRange { weight: i64, m: u32 },
    #[error("form is not of K3 type (signatures {0})")]
    NotK3Type(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal defect: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Reducible { .. } => "Reducible",
            Error::NotTotallyReal { .. } => "NotTotallyReal",
            Error::BadDegree(_) => "BadDegree",
            Error::NotMonic => "NotMonic",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotQuadratic(_) => "NotQuadratic",
            Error::NonIntegralMinpoly => "NonIntegralMinpoly",
            Error::Degenerate => "Degenerate",
            Error::NotSymmetric => "NotSymmetric",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotIntegral => "NotIntegral",
            Error::NotEven => "NotEven",
            Error::ZeroInput => "ZeroInput",
            Error::NotQuadraticField(_) => "NotQuadraticField",
            Error::InvalidPlace(_) => "InvalidPlace",
            Error::SearchExhausted { .. } => "SearchExhausted",
            Error::OddRamification(_) => "OddRamification",
            Error::RamConditionViolated { .. } => "RamConditionViolated",
            Error::ParityViolated { .. } => "ParityViolated",
            Error::SplitCenter => "SplitCenter",
            Error::NotRealQuadratic(_) => "NotRealQuadratic",
            Error::NotWeylSymmetric => "NotSymmetric",
            Error::NotDecomposable => "NotDecomposable",
            Error::WeightOutOfRange { .. } => "WeightOutOfRange",
            Error::NotK3Type(_) => "NotK3Type",
            Error::Parse(_) => "Parse",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Internal(_) => "Internal",
        }
    }
}
