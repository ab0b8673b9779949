//! Exact engine for the six-parameter two-index recurrence
//!
//! ```text
//! |n k| = (a n + b k + c) |n-1, k| + (a' n + b' k + c') |n-1, k-1| + [n = k = 0]
//! ```
//!
//! with `|n k| = 0` whenever `n < 0` or `k < 0`.
//!
//! Modules:
//! - [`params`]: parameter tuples, the four equation types, the derived
//!   Type-I parameters and the five sign/reversal involutions.
//! - [`exact`]: triangles, row polynomials and the Type-IV closed forms.
//! - [`series`]: truncated power series over exact rationals or MPFR floats,
//!   with composition, reversion and the tree functions `T_nu`.
//! - [`egf`]: the `G^{-1}` generalized series, closed-form exponential
//!   generating functions, and the exact order-by-order PDE check.
//! - [`residue`]: row polynomials from the residue/limit formulas.
//! - [`degeneracy`]: the parameter families that produce identical triangles.

pub mod degeneracy;
pub mod egf;
pub mod exact;
pub mod params;
pub mod residue;
pub mod series;

mod util;

pub use exact::{Poly, Triangle};
pub use params::{InvolutionKind, ParamTuple, RecType, TypeIDerived};
pub use util::{binomial_q, factorial, parse_rational};
