//! Exact double-coset operator calculus on GL2(F_p).
//!
//! The crate builds the group G = GL2(F_p) together with the stabilizer
//! subgroups of points and point-pairs on the projective line over F_{p^2}
//! (Borel, split/nonsplit Cartan subgroups and their normalizers), the
//! conjugacy-class partition, the ordinary character table, coset spaces and
//! double-coset operators between the permutation modules Z[G/H], and the
//! character-sum machinery (Legendre and Soto-Andrade sums) that evaluates
//! the eigenvalues of those operators without touching matrices.
//!
//! Everything is exact: operator matrices live over arbitrary-precision
//! integers, determinants come from fraction-free elimination, ranks from
//! exact row reduction, and the only floating point in the crate is the
//! complex arithmetic of character values, whose rational outputs are
//! rounded under explicit tolerances and cross-checked against the integer
//! route.

pub mod characters;
pub mod classes;
pub mod context;
pub mod eigensums;
pub mod error;
pub mod group;
pub mod matrix;
pub mod permmod;
pub mod subgroups;

pub use context::{Fp2, PrimeContext, ProjPoint};
pub use error::Error;
pub use group::Mat;

/// Absolute tolerance for rounding a floating-point quantity that is known
/// to be an integer or rational on mathematical grounds.
pub const ROUND_TOL: f64 = 1e-6;

/// Absolute tolerance on imaginary parts of quantities known to be real.
pub const IMAG_TOL: f64 = 1e-9;

/// Outcome of one named verification, suitable for aggregation into reports.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckItem {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        CheckItem { name: name.into(), pass, detail: detail.into() }
    }
}

/// Rounds `x` to the nearest integer, checking the error against [`ROUND_TOL`].
pub fn round_to_integer(x: f64) -> Result<i64, Error> {
    let r = x.round();
    if (x - r).abs() > ROUND_TOL {
        return Err(Error::NotAnInteger { value: x });
    }
    Ok(r as i64)
}
