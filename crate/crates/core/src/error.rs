use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::Valuation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("prime-power exponent must be at least 1")]
    ZeroExponent,
    #[error("denominator {denom} is divisible by {p}; use the exact path")]
    NonInvertibleDenominator { p: u64, denom: BigInt },
    #[error("inconsistent CRT input: {0}")]
    InconsistentInput(String),
    #[error("modulus {p}^{t} does not fit a machine word")]
    ModulusTooLarge { p: u64, t: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("{0} is not a valid prime for this check")]
    InvalidPrime(u64),
    #[error("check {check} needs p >= {min}, got {p}")]
    PrimeTooSmall { check: String, p: u64, min: u64 },
    #[error("{0} must be odd")]
    NotOdd(u64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("index {index} outside [{lo}, {hi}]")]
    IndexOutOfRange { index: i64, lo: i64, hi: i64 },
    #[error("parameter singularity: {0}")]
    ParameterSingularity(String),
    #[error("v_{p}(S) = {valuation} is below r = {r}: counterexample candidate")]
    ValuationTooLow {
        p: u64,
        r: u32,
        valuation: Valuation,
    },
    #[error("at p = {p}: {source}")]
    AtPrime {
        p: u64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
