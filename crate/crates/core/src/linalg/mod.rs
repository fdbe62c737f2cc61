//! Exact linear algebra over the rationals.
//!
//! Small matrices live in [`RationalMatrix`] and are handled with direct
//! elimination. Large sparse systems (Laplacians of the bigger complexes) go
//! through [`ExactSolver`], which factors modulo a prime, lifts solutions
//! p-adically and certifies every answer by exact substitution.

mod dense;
mod exact;
mod modular;
mod qvec;
mod rational;
mod sparse;

pub use dense::{Congruence, Inertia, RationalMatrix};
pub use exact::ExactSolver;
pub use qvec::QVector;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use sparse::SparseMatrix;
