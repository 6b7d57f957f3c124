use thiserror::Error;

/// Errors raised by the library. Every variant maps to a stable code used by
/// the command-line interface.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero series")]
    ZeroSeries,
    #[error("division by zero")]
    DivisionByZero,
    #[error("argument of exp is not purely large: {0}")]
    NotPurelyLarge(String),
    #[error("expected a single term, got {0} terms")]
    NotMonomialTerm(usize),
    #[error("value leaves the finitely supported fragment: {0}")]
    NotInFragment(String),
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("variable Y{index} exceeds arity {arity}")]
    ArityViolation { index: usize, arity: usize },
    #[error("polynomial is constant in all derivatives")]
    ConstantPolynomial,
    #[error("empty polynomial family")]
    EmptyList,
    #[error("polynomial {index} exceeds the order vector in Y{var}")]
    OrderViolation { index: usize, var: usize },
    #[error("polynomial {0} does not vanish at the point")]
    NotVanishing(usize),
    #[error("malformed set descriptor: {0}")]
    MalformedDescriptor(String),
    #[error("membership is undecidable here: {0}")]
    Undecidable(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("numerator and denominator share a factor of positive degree")]
    NotCoprime,
    #[error("zero input polynomial")]
    ZeroInput,
    #[error("no certificate: {0}")]
    NoCertificate(String),
    #[error("certificate shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::ZeroSeries => "ZeroSeries",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotPurelyLarge(_) => "NotPurelyLarge",
            Error::NotMonomialTerm(_) => "NotMonomialTerm",
            Error::NotInFragment(_) => "NotInFragment",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::ArityViolation { .. } => "ArityViolation",
            Error::ConstantPolynomial => "ConstantPolynomial",
            Error::EmptyList => "EmptyList",
            Error::OrderViolation { .. } => "OrderViolation",
            Error::NotVanishing(_) => "NotVanishing",
            Error::MalformedDescriptor(_) => "MalformedDescriptor",
            Error::Undecidable(_) => "Undecidable",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::NotCoprime => "NotCoprime",
            Error::ZeroInput => "ZeroInput",
            Error::NoCertificate(_) => "NoCertificate",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::SizeLimit(_) => "SizeLimit",
            Error::Syntax { .. } => "SyntaxError",
        }
    }

    pub fn is_syntax(&self) -> bool {
        matches!(self, Error::Syntax { .. })
    }

    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> Self {
        Error::Syntax { position, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
