//! Major and minor arcs, Dirichlet approximation, and exact integration of
//! `f_X^d e(-Nξ)` over unions of arcs through the Fourier expansion.

mod decomposition;
mod fourier;
mod fraction;

pub use decomposition::{build_arcs, ArcDecomposition, ArcInterval};
pub use fourier::{fourier_ladder, fourier_ladder_with, fourier_ladder_with_coeffs, FourierLadder};
pub use fraction::{dirichlet_approx, DirichletApprox, Fraction};
