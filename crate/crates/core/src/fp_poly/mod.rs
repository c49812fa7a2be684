//! Arithmetic in `F_p` and canonical sparse polynomials over it.

pub mod budget;
mod matrix;
mod monomial;
mod parse;
mod poly;
mod prime;

pub use matrix::{rank, Matrix};
pub use monomial::{Monomial, MAX_EXPONENT};
pub use parse::{format_monomial, format_poly, parse_poly};
pub use poly::Poly;
pub use prime::{is_prime, Coeff, Prime};
