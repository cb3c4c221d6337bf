//! Numerical core for the adjoint of the Bergman projection on the unit disk.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only deterministic
//! numerics:
//!
//! * [`funcspace`]: analytic functions on the disk with exact derivatives,
//!   including the Möbius atoms, the logarithmic witness and the normalized
//!   growth family.
//! * [`diskquad`]: Gauss–Legendre × trapezoid quadrature for weighted area
//!   measures `(1-|z|²)^α dA`.
//! * [`operators`]: the Bergman projection of compactly supported monomials,
//!   the adjoint in quadrature and series form, the truncated kernel integral
//!   and the Besov pairing.
//! * [`norms`]: Bloch and Besov seminorms and weighted suprema over the disk.
//! * [`simplex`]: Nelder–Mead maximization used by the sup refinement and
//!   the search.
//! * [`extremal`]: derivative-free search for the extremal ratio
//!   `sup (1-|z|²)²|(z²f')'| / ‖f‖_B`.
#![no_std]

extern crate alloc;

pub mod diskquad;
pub mod error;
pub mod extremal;
pub mod funcspace;
pub mod norms;
pub mod operators;
pub mod simplex;

pub use num_complex::Complex64;

pub use error::{Error, Result};

/// A point of the complex plane. Operations that need a disk point check
/// `|z| < 1` themselves.
pub type ComplexPoint = Complex64;

/// Shorthand for building a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
