use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ForgeError {
    #[error("series symbol mismatch: `{0}` vs `{1}`")]
    SymbolMismatch(String, String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("square root needs an even leading exponent, got {0}")]
    OddLead(i64),
    #[error("supplied branch does not square to the leading coefficient")]
    BadBranch,
    #[error("leading coefficient is not invertible")]
    NotInvertible,
    #[error("series reversion needs leading exponent +1 or -1, got {0}")]
    RevertLead(i64),
    #[error("requested order {requested} exceeds the valid truncation {valid}")]
    Truncation { requested: i64, valid: i64 },
    #[error("operation leaves the Weierstrass multiplicative subring (x or zeta part present)")]
    SubringViolation,
    #[error("exact antiderivative not supported: {0}")]
    NoAntiderivative(String),
    #[error("divisor is not a monomial in sn, cn: {0}")]
    NonMonomialDivisor(String),
    #[error("parameter `{0}` is unbound")]
    Unbound(String),
    #[error("evaluation at a pole: {0}")]
    Pole(String),
    #[error("degenerate elliptic data: {0}")]
    DegenerateLattice(String),
    #[error("nome must satisfy |q| < 1, got {0}")]
    NomeOutOfRange(f64),
    #[error("modulus k^2 = 1 is not supported")]
    UnitModulus,
    #[error("secular residue at order nu^-{0}")]
    SecularResidue(i64),
    #[error("integration step size collapsed near x = {0}")]
    StepCollapse(String),
    #[error("residual check failed: {0}")]
    Residual(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, ForgeError>;
