use num_traits::Zero;

use super::relation::{AnsatzKind, PolynomialFormula, Relation};
use super::sweep::{GuessConfig, GuessReport, GuessStatus, Shape};
use crate::arith::rational::Rational;
use crate::arith::unipoly::{UniPoly, Var};
use crate::error::{Error, Result};

/// Interpolating polynomial through `(n, values[n])`, Newton form expanded.
pub fn interpolate(values: &[Rational]) -> UniPoly {
    let m = values.len();
    // Divided differences on nodes 0, 1, ..., m-1.
    let mut dd: Vec<Rational> = values.to_vec();
    for level in 1..m {
        for i in (level..m).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / Rational::from_integer((level as i64).into());
        }
    }
    let mut poly = UniPoly::zero(Var::N);
    for i in (0..m).rev() {
        // poly = poly * (n - i) + dd[i]
        let factor = UniPoly::from_ints(Var::N, &[-(i as i64), 1]);
        poly = &(&poly * &factor) + &UniPoly::constant(Var::N, dd[i].clone());
    }
    poly
}

/// Fits the lowest-degree polynomial through the first half of the terms
/// and accepts it only if it reproduces every remaining term.
pub fn guess_polynomial(terms: &[Rational], config: &GuessConfig) -> Result<GuessReport> {
    if terms.len() < 4 {
        return Err(Error::InsufficientTerms {
            have: terms.len(),
            need: 4,
        });
    }
    if terms.iter().all(Zero::is_zero) {
        return Err(Error::Degenerate("all terms are zero".into()));
    }
    let fit_len = terms.len().div_ceil(2);
    let held = terms.len() - fit_len;
    if held < config.min_verify {
        return Err(Error::InsufficientTerms {
            have: terms.len(),
            need: 2 * config.min_verify,
        });
    }
    let poly = interpolate(&terms[..fit_len]);
    let degree = poly.degree().unwrap_or(0);
    let formula = PolynomialFormula::new(poly);
    let depth = (fit_len..terms.len())
        .take_while(|&n| formula.eval(n) == terms[n])
        .count();
    let ok = depth == held;
    Ok(GuessReport {
        kind: AnsatzKind::Polynomial,
        relation: ok.then_some(Relation::Polynomial(formula)),
        shape: ok.then_some(Shape { family: 0, degree }),
        fit_terms: fit_len,
        verify_terms: held,
        verification_depth: depth,
        bounds_reached: Shape {
            family: 0,
            degree: fit_len - 1,
        },
        shapes_evaluated: 1,
        kernel_dimension: usize::from(ok),
        status: if ok {
            GuessStatus::VerifiedConjecture
        } else {
            GuessStatus::NoFitWithinBounds
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{rat, ratio};

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn triangular_numbers() {
        let cfg = GuessConfig::default().with_min_verify(2);
        let rep = guess_polynomial(&r(&[0, 1, 3, 6, 10]), &cfg).unwrap();
        let Some(Relation::Polynomial(p)) = rep.relation else { panic!("no fit") };
        assert_eq!(p.poly, UniPoly::new(Var::N, vec![rat(0), ratio(1, 2), ratio(1, 2)]));
    }

    #[test]
    fn constant() {
        let cfg = GuessConfig::default().with_min_verify(2);
        let rep = guess_polynomial(&r(&[7, 7, 7, 7]), &cfg).unwrap();
        assert_eq!(rep.relation, Some(Relation::Polynomial(PolynomialFormula::new(UniPoly::from_ints(Var::N, &[7])))));
    }

    #[test]
    fn sum_of_squares() {
        let terms: Vec<Rational> = (0..7i64).map(|n| rat((0..=n).map(|k| k * k).sum())).collect();
        let cfg = GuessConfig::default().with_min_verify(3);
        let rep = guess_polynomial(&terms, &cfg).unwrap();
        let Some(Relation::Polynomial(p)) = rep.relation else { panic!("no fit") };
        // n(n+1)(2n+1)/6 = n^3/3 + n^2/2 + n/6
        assert_eq!(p.poly, UniPoly::new(Var::N, vec![rat(0), ratio(1, 6), ratio(1, 2), ratio(1, 3)]));
    }

    #[test]
    fn broken_interpolant_is_rejected() {
        let cfg = GuessConfig::default().with_min_verify(2);
        let rep = guess_polynomial(&r(&[1, 2, 4, 8, 16, 32]), &cfg).unwrap();
        assert_eq!(rep.status, GuessStatus::NoFitWithinBounds);
        assert!(rep.relation.is_none());
    }

    #[test]
    fn too_short() {
        assert!(guess_polynomial(&r(&[1, 2, 3]), &GuessConfig::default()).is_err());
    }
}
