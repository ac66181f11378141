use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be an odd prime, got {p}")]
    NotOddPrime { p: u64 },

    #[error("prime {p} exceeds the supported bound {bound} for {what}")]
    TooLarge { p: u64, bound: u64, what: &'static str },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: String, right: String },

    #[error("value {value} is not within tolerance of an integer")]
    NotAnInteger { value: f64 },

    #[error("value has non-negligible imaginary part {imag}")]
    NotReal { imag: f64 },

    #[error("operator is not constant on the cells of a double coset (coset {coset}, values {a} and {b})")]
    NotEquivariant { coset: usize, a: String, b: String },

    #[error("character selection rejected: {reason}")]
    BadCharacter { reason: String },

    #[error("{0}")]
    Invalid(String),
}
