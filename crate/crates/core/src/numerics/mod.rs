//! Scalar and polynomial arithmetic shared by the solver.

mod poly;
mod real;

pub use poly::Poly;
pub use real::{Precision, Real};
