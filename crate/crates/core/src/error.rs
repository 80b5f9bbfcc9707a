use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("angle numerators must be positive, got {0}")]
    NonPositiveAngle(i64),

    #[error("need at least 3 angles, got {0}")]
    TooFewAngles(usize),

    #[error("sum of numerators {sum} is not divisible by n - 2 = {divisor}")]
    AngleSumNotDivisible { sum: i64, divisor: i64 },

    #[error("numerator {q} is not below the common denominator {k}")]
    AngleTooLarge { q: i64, k: i64 },

    #[error("common denominator {0} exceeds the supported range")]
    ModulusTooLarge(i64),

    #[error("numerators {q:?} share the common factor {gcd}")]
    NotNormalized { q: Vec<u64>, gcd: u64 },

    #[error("operation needs a triangle, got {0} angles")]
    NotTriangle(usize),

    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),

    #[error("{d} does not divide {k}")]
    NotADivisor { d: u64, k: u64 },

    #[error("residue {residue} is not a unit modulo {modulus}")]
    NotAUnit { residue: u64, modulus: u64 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("loop enumeration exceeded the cap of {0} loops")]
    CapExceeded(usize),

    #[error("vector is not an embedded loop of the digraph: {0}")]
    NotEmbeddedLoop(String),

    #[error("malformed digraph: {0}")]
    MalformedGraph(String),

    #[error("malformed cylinder digraph: {0}")]
    MalformedCylinderSpec(String),

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("invalid quadrature parameters: {0}")]
    QuadratureParams(String),

    #[error("tolerance {tol:e} not reached within {budget} evaluations (estimate {value_re} + {value_im}i, error {error:e})")]
    BudgetExhausted {
        tol: f64,
        budget: usize,
        value_re: f64,
        value_im: f64,
        error: f64,
    },
}
