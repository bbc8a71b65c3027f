//! Exact and asymptotic computations around the Hardy-Littlewood circle
//! method for Waring's problem.
//!
//! * [`count`]: exact representation counts (the ground truth), a
//!   brute-force oracle, and lattice points in `k`-balls.
//! * [`expsums`]: Weyl sums, Gauss sums, the oscillatory integral `v`, and
//!   measured exponential-sum bounds.
//! * [`arcs`]: major/minor arcs, Dirichlet approximation, and exact
//!   integration of `f_X^d e(-Nξ)` over arbitrary arc unions.
//! * [`singular`]: the singular series as a sum and as an Euler product of
//!   local densities.
//! * [`asymptotic`]: the Γ main term, the approximation cascade, and the
//!   end-to-end verification harness.

pub mod arcs;
pub mod arith;
pub mod asymptotic;
pub mod count;
pub mod error;
pub mod expsums;
pub mod gamma;
pub mod instance;
pub mod phase;
pub mod quad;
pub mod report;
pub mod singular;

pub use error::{Result, WaringError};
pub use instance::WaringInstance;
pub use num_bigint::BigUint;

/// Complex values throughout the crate are plain double precision.
pub type ComplexValue = num_complex::Complex64;
