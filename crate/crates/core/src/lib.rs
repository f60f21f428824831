//! Exact computer algebra for graded modules over an exterior algebra:
//! Tate resolutions, hypercohomology tables of complexes of line bundles on
//! projective space, and Beilinson monads, all over GF(p) (or ℚ) with
//! independent closed-form and brute-force oracles.

pub mod beilinson;
pub mod bgg;
pub mod cohomology;
pub mod complex;
pub mod error;
pub mod exterior;
pub mod field;
pub mod gallery;
pub mod io;
pub mod matrix;
pub mod module;
pub mod oracle;
pub mod random;
pub mod tate;

pub use cohomology::CohomologyTable;
pub use error::{Error, Result};
pub use exterior::{Ctx, ExtElem};
pub use field::{Field, PrimeField, Rationals, DEFAULT_PRIME};
pub use matrix::Mat;
pub use module::{LambdaModule, Morphism};
pub use tate::TateResolution;
