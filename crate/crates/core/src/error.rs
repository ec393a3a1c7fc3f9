use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("generators must be positive integers (got 0)")]
    ZeroGenerator,

    #[error("generators have gcd {gcd}, not 1: they do not generate a numerical semigroup")]
    NotCoprime { gcd: BigUint },

    /// The oracle would need more residue classes than the configured cap.
    #[error("modulus {modulus} exceeds the residue cap {cap}; oracle is infeasible at this size")]
    ModulusTooLarge { modulus: BigUint, cap: usize },

    #[error("change-making amount {amount} exceeds the table cap {cap}")]
    AmountTooLarge { amount: BigUint, cap: usize },

    #[error("inconsistent Apery set: {0}")]
    InconsistentApery(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid parameters for family `{family}`: {reason}")]
    InvalidFamilyParams { family: String, reason: String },

    #[error("invalid coin system: {0}")]
    InvalidCoins(String),

    #[error("digit vectors differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
}
