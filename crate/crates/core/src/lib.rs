//! Zeros of polyanalytic polynomials `P(z) = Σ α_{j,k} z^j z̄^k`.
//!
//! * [`poly`]: dense storage, arithmetic, Wirtinger calculus.
//! * [`zerotheory`]: existence, finiteness and counting of zeros.
//! * [`bounds`]: inclusion radii from a dominant top-degree coefficient.
//! * [`winding`]: certified winding numbers and indices.
//! * [`rootfind`]: polyanalytic Newton iteration and zero census.
//! * [`extremal`]: harmonic polynomials with `n²` zeros.
//! * [`render`]: phase plots.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod format;
pub mod poly;
pub mod render;
pub mod rootfind;
pub mod winding;
pub mod zerotheory;

pub use error::{Error, Result};
pub use poly::{DegreeTriple, PolyJet, PolyPoly, Wirtinger};
