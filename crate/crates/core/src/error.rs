use thiserror::Error;

/// Errors surfaced by the algebraic and numeric routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("homogenization degree {requested} is below the polynomial degree {actual}")]
    DegreeTooSmall { requested: u32, actual: u32 },

    #[error("division by zero in a number field")]
    DivisionByZero,

    #[error("resultant operand is the zero polynomial")]
    ZeroOperand,

    #[error("polynomial is constant in {0}")]
    ConstantInVariable(char),

    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,

    #[error("intersection at the point is not isolated")]
    NonIsolated,

    #[error("critical point is not isolated")]
    NonIsolatedSingularity,

    #[error("system has a common factor and is positive dimensional")]
    PositiveDimensional,

    #[error("operation requires deg f > deg g")]
    RequiresStrictDegree,

    #[error("criterion inapplicable: {0}")]
    CriterionInapplicable(String),

    #[error("discriminant of the pencil vanishes identically")]
    PencilNonReduced,

    #[error("f and g share a nonconstant common factor {0}")]
    CommonFactor(String),

    #[error("critical locus of F is positive dimensional")]
    DegenerateCriticalLocus,

    #[error("every sample of the curve lies on g = 0")]
    CurveInPolarLocus,

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("input error: {0}")]
    Input(String),

    #[error("internal limit reached: {0}")]
    Limit(String),
}

impl Error {
    /// Errors caused by the mathematical input rather than its syntax.
    pub fn is_degenerate_math(&self) -> bool {
        matches!(
            self,
            Error::CommonFactor(_) | Error::DegenerateCriticalLocus | Error::PencilNonReduced
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
