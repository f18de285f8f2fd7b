use num_integer::Integer;
use num_traits::Zero;

use crate::arith::rational::Rational;
use crate::error::{Error, Result};

/// An interlaced sequence written as `c(residue + period * k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compression {
    pub terms: Vec<Rational>,
    pub period: usize,
    pub residue: usize,
    /// Set when every input term was zero; the terms are then returned
    /// unchanged with period 1.
    pub all_zero: bool,
}

/// Detects the largest period `g` such that all nonzero terms sit on indices
/// congruent to one residue mod `g`, and extracts that subsequence.
pub fn compress_zeros(terms: &[Rational]) -> Result<Compression> {
    if terms.len() < 6 {
        return Err(Error::InsufficientTerms {
            have: terms.len(),
            need: 6,
        });
    }
    let nonzero: Vec<usize> = terms
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_zero())
        .map(|(i, _)| i)
        .collect();
    let Some(&first) = nonzero.first() else {
        return Ok(Compression {
            terms: terms.to_vec(),
            period: 1,
            residue: 0,
            all_zero: true,
        });
    };
    let period = nonzero
        .iter()
        .map(|&i| i - first)
        .fold(0usize, |g, d| g.gcd(&d));
    // A single nonzero term constrains nothing; leave the data alone.
    let period = if period == 0 { 1 } else { period };
    let residue = first % period;
    Ok(Compression {
        terms: terms.iter().skip(residue).step_by(period).cloned().collect(),
        period,
        residue,
        all_zero: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn aerated_catalan() {
        let c = compress_zeros(&r(&[1, 0, 1, 0, 2, 0, 5, 0, 14])).unwrap();
        assert_eq!((c.period, c.residue), (2, 0));
        assert_eq!(c.terms, r(&[1, 1, 2, 5, 14]));
    }

    #[test]
    fn identity_when_dense() {
        let c = compress_zeros(&r(&[1, 1, 2, 3, 5, 8])).unwrap();
        assert_eq!(c.period, 1);
        assert_eq!(c.terms, r(&[1, 1, 2, 3, 5, 8]));
    }

    #[test]
    fn nonzero_residue() {
        let c = compress_zeros(&r(&[0, 1, 0, 0, 2, 0, 0, 3])).unwrap();
        assert_eq!((c.period, c.residue), (3, 1));
        assert_eq!(c.terms, r(&[1, 2, 3]));
    }

    #[test]
    fn all_zero_flagged() {
        let c = compress_zeros(&r(&[0; 8])).unwrap();
        assert!(c.all_zero);
    }
}
