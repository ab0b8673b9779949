//! Exact triangles generated by the recurrence, their row polynomials and
//! the Type-IV closed forms.

mod poly;
mod triangle;
mod type_iv;

pub use poly::Poly;
pub use triangle::{rows_to_strings, triangle, Triangle};
pub use type_iv::{coeff_type_iv, row_poly_product_type_iv, stirling_cycle, stirling_cycle_row};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("parameters are not of Type IV (beta = beta' = 0 required)")]
    NotTypeIV,
    #[error("index (n={n}, k={k}) out of range (rows 0..={max})")]
    IndexOutOfRange { n: usize, k: usize, max: usize },
}
