use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {0} exceeds the table limit of 2^24 elements")]
    TooLarge(u64),
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no discrete logarithm")]
    ZeroHasNoLog,
    #[error("character argument must be nonzero")]
    ZeroArgument,
    #[error("field of degree {0} has no subfield of degree {1}")]
    NoSubfield(u32, u32),
    #[error("element is not in the subfield")]
    NotInSubfield,
    #[error("character order {e} does not divide {modulus}")]
    BadOrder { e: u64, modulus: u64 },
    #[error("q = {q} is not congruent to {residue} mod {modulus}")]
    WrongResidue { q: u64, residue: u64, modulus: u64 },
    #[error("q = {q} is not of the form {form}")]
    NotInFamily { q: u64, form: &'static str },
    #[error("invalid class modulus e = {e}: {reason}")]
    BadE { e: u64, reason: &'static str },
    #[error("invalid exponent l = {0}: q + 1 divides it")]
    BadEll(u64),
    #[error("invalid class index set: {0}")]
    BadIndexSet(String),
    #[error("no sign pattern matches the computed Gauss sum (closest residual {0:.3e})")]
    NoMatch(f64),
    #[error("no admissible parameters found for {0}")]
    ParamSearchFailed(String),
    #[error("parameters rejected: {0}")]
    BadParams(String),
    #[error("intersection profile mismatch: {0}")]
    ProfileMismatch(String),
    #[error("matrix is not Hadamard: rows {0} and {1} have inner product {2}")]
    NotHadamard(usize, usize, i64),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("partition fails the structural conditions: {0}")]
    BadForm(String),
    #[error("partition does not define a valid scheme: {0}")]
    SchemeInvalid(String),
    #[error("search budget of {0} candidates exhausted")]
    BudgetExceeded(u64),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
