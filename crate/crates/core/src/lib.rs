//! Numerical toolkit for explicit formulas of additive prime problems:
//! brute-force representation counts, sums over zeta zeros, complex special
//! functions, exponential sums and their mean squares.

pub mod accum;
pub mod analysis;
pub mod arith;
mod error;
pub mod explicit;
pub mod expsum;
pub mod phase;
pub mod quad;
pub mod special;
pub mod zeros;

pub use num_complex::Complex64;

pub use analysis::{BoundKind, MeanSquareReport};
pub use arith::{build_sieve, ProblemKind, SieveTable};
pub use error::{Error, Result};
pub use explicit::{FormulaReport, Term};
pub use expsum::{ComplexParam, ExpSumConfig};
pub use quad::QuadratureSpec;
pub use zeros::{load_zeros, ZeroTable, ZeroView};
