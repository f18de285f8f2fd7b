//! Exact arithmetic substrate: rationals, polynomials, truncated series and
//! kernels of rational matrices.

pub mod catalytic;
pub mod matrix;
pub mod modular;
pub mod rational;
pub mod series;
pub mod unipoly;

pub use catalytic::{Catalytic, CatalyticPoly, PolyOp};
pub use matrix::{ExactMatrix, SolveStrategy};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use series::TruncatedSeries;
pub use unipoly::{UniPoly, Var};
