use alloc::string::String;

use crate::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("point {re} + {im}i is not inside the open unit disk", re = .0.re, im = .0.im)]
    OutsideDisk(Complex64),
    #[error("value {value} is outside the admissible range for {what}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("polynomial degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("integrand is not finite at node {re} + {im}i", re = .node.re, im = .node.im)]
    NonFinite { node: Complex64 },
    #[error("ratio undefined: the Bloch seminorm is zero")]
    ZeroSeminorm,
    #[error("estimate {value} violates the bound {bound}")]
    BoundViolation { value: f64, bound: f64 },
}

/// Rejects points that are not finite or not inside the open unit disk.
pub(crate) fn check_disk(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() && z.norm_sqr() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisk(z))
    }
}
