//! Exact algebra for grid-free hypersurfaces in `P^s × P^s`: finite field
//! arithmetic, sparse polynomials, extremal graph constructions, exhaustive
//! grid search, the `s = 1` classification, plane curves and Cremona maps.

pub mod cremona;
pub mod curves;
pub mod error;
pub mod fields;
pub mod grid;
pub mod hypersurface;
pub mod linalg;
pub mod poly;
pub mod s1;
pub mod sample;
pub mod sweep;

pub use error::{Error, Result};
