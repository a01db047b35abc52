use thiserror::Error;

/// Errors reported by the engine. All operations are exact; anything that
/// cannot be represented exactly in 64 bits is a range error, never a
/// silently wrapped value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value must be a positive integer (got 0)")]
    Zero,

    #[error("residue {residue} out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },

    #[error("combined modulus {required} exceeds the exact-representation limit {limit}")]
    ModulusTooLarge { required: u128, limit: u64 },

    #[error("64-bit overflow while computing {context}")]
    Overflow { context: &'static str },

    #[error("{a} and {b} are not coprime (gcd = {g})")]
    NotCoprime { a: u64, b: u64, g: u64 },

    #[error("{value} is not prime")]
    NotPrime { value: u64 },

    #[error("family file line {line}: {message}")]
    FamilyFile { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
