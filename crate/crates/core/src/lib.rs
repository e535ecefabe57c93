//! Exact arithmetic for rational points on nonsingular intersections of two
//! simultaneously diagonal quadrics in P³.
//!
//! The crate is organised bottom-up:
//!
//! * [`kernel`]: big-integer helpers, exact determinants, kernels, lattice saturation, primes.
//! * [`curve`]: the pencil `q = r = 0`, its Plücker height, reduction types and Jacobian data.
//! * [`points`]: rational points of bounded height and point counts over finite fields.
//! * [`detmethod`]: evaluation matrices of the determinant method and their divisibility.
//! * [`bounds`]: numeric evaluators for the counting bounds.
//! * [`search`]: scans for small pencils carrying many rational points.

pub mod bounds;
pub mod curve;
pub mod detmethod;
mod error;
pub mod kernel;
pub mod points;
pub mod search;

pub use curve::{DiagonalPencil, PluckerSixtuple, WeierstrassModel};
pub use error::{Error, Result};
pub use kernel::{IntMatrix, Valuation};
pub use points::{FpPoint, ProjectivePoint};
