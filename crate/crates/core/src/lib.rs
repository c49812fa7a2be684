//! Dickson invariants of `GL(n, F_p)` and the action of the Steenrod reduced powers and the
//! primitive Milnor operations on them, computed exactly in `F_p[x_1, ..., x_n]`.


pub mod dickson;
pub mod error;
pub mod fp_poly;
pub mod steenrod;
pub mod verify;



pub use error::{Error, Result};
pub use fp_poly::{Matrix, Monomial, Poly, Prime};
