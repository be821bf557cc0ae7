//! Finite Blaschke products and the numerics around the universal lower bound of their
//! Bloch seminorm.
//!
//! The crate is `no_std` (it needs `alloc`) unless the `std` feature is on. Everything here is
//! a pure function of its inputs; file formats, the command line and parallel drivers live in
//! `bloch-cli`.
//!
//! Module map:
//!
//! * [`blaschke`]: the product type, evaluation, derivatives, Möbius pre-composition, random families.
//! * [`seminorm`]: the pointwise Bloch quantity, a multistart estimate of its supremum, the
//!   closed form for `z^n` and the composed-function catalog.
//! * [`slit_disk`]: maximal conformal radius of the disk slit along `[a, 1]` and the inversion
//!   that fixes the constant `a`.
//! * [`surface`]: the Schwarz–Christoffel parameter problem for the two-sheeted surface glued
//!   from a slit disk and half an annulus, and its conformal radius.
//! * [`constructive`]: explicit point with a guaranteed lower bound on `|B'(z)|(1-|z|^2)`.
//! * [`covering`]: critical points, monodromy and the sheet tree of the branched covering.
//! * [`reference`]: the published constants the verification commands compare against.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

mod math;

pub mod blaschke;
pub mod constructive;
pub mod covering;
pub mod error;
pub mod optimize;
pub mod poly;
pub mod quadrature;
pub mod reference;
pub mod seminorm;
pub mod slit_disk;
pub mod surface;

pub use num_complex::Complex64;

pub use blaschke::{BlaschkeProduct, MoebiusAutomorphism, RadialLaw};
pub use error::{Error, Result};

/// Points of the plane. Every public operation rejects non-finite components.
pub type ComplexPoint = Complex64;
