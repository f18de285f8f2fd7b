//! Enumeration of constrained lattice walks and guess-and-check discovery of
//! closed descriptions (polynomial, algebraic, P-recursive, D-finite) for the
//! resulting counting sequences.

pub mod arith;
pub mod error;
pub mod guess;
pub mod report;
pub mod seqkit;
pub mod walk;

pub use error::{Error, Result};
