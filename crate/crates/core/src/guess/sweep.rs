//! Shape sweep: parallel speculation on modular ranks, sequential commitment
//! in the documented order, exact kernels and held-out verification.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ansatz::Ansatz;
use super::relation::{AnsatzKind, Relation};
use crate::arith::matrix::{fraction_free_nullspace, uses_modular, ExactMatrix, SolveStrategy, MAX_PRIMES};
use crate::arith::modular::{annihilates, modular_kernel, word_primes};
use crate::arith::rational::Rational;
use crate::error::{Error, Result};

/// Fit/verify policy and resource limits shared by every guesser.
#[derive(Debug, Clone, PartialEq)]
pub struct GuessConfig {
    /// Fraction of the terms used for fitting (rounded up).
    pub fit_fraction: f64,
    /// Minimum number of held-out terms a verified conjecture must predict.
    pub min_verify: usize,
    /// Every swept shape needs at least this many more equations than
    /// unknowns.
    pub margin: usize,
    pub time_limit: Option<Duration>,
    pub strategy: SolveStrategy,
}

impl Default for GuessConfig {
    fn default() -> Self {
        GuessConfig {
            fit_fraction: 0.6,
            min_verify: 10,
            margin: 2,
            time_limit: None,
            strategy: SolveStrategy::Auto,
        }
    }
}

impl GuessConfig {
    pub fn with_min_verify(mut self, k: usize) -> Self {
        self.min_verify = k;
        self
    }

    pub fn with_fit_fraction(mut self, f: f64) -> Self {
        self.fit_fraction = f;
        self
    }

    pub fn with_time_limit(mut self, d: Duration) -> Self {
        self.time_limit = Some(d);
        self
    }

    pub fn fit_len(&self, len: usize) -> usize {
        ((len as f64 * self.fit_fraction).ceil() as usize).min(len)
    }

    /// Splits `len` terms, failing when too few are held out.
    pub fn split(&self, len: usize) -> Result<usize> {
        let fit = self.fit_len(len);
        if len - fit < self.min_verify || fit == 0 {
            let need = (1..)
                .find(|&l| {
                    let f = self.fit_len(l);
                    f > 0 && l - f >= self.min_verify
                })
                .unwrap_or(usize::MAX);
            return Err(Error::InsufficientTerms { have: len, need });
        }
        Ok(fit)
    }
}

/// One point of a sweep: `family` is the degree in `C`, the recurrence order
/// or the differential order; `degree` bounds every coefficient polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub family: usize,
    pub degree: usize,
}

impl Shape {
    pub fn unknowns(&self) -> usize {
        (self.family + 1) * (self.degree + 1)
    }

    /// Sweep order: fewest unknowns first, then lower family, then lower
    /// degree.
    pub fn sweep_key(&self) -> (usize, usize, usize) {
        (self.unknowns(), self.family, self.degree)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuessStatus {
    VerifiedConjecture,
    NoFitWithinBounds,
    ResourceExceeded,
}

impl GuessStatus {
    pub fn label(self) -> &'static str {
        match self {
            GuessStatus::VerifiedConjecture => "verified-conjecture",
            GuessStatus::NoFitWithinBounds => "no-fit-within-bounds",
            GuessStatus::ResourceExceeded => "resource-exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuessReport {
    pub kind: AnsatzKind,
    pub relation: Option<Relation>,
    /// Shape at which the relation was found.
    pub shape: Option<Shape>,
    pub fit_terms: usize,
    pub verify_terms: usize,
    /// Consecutive held-out equations the relation satisfies.
    pub verification_depth: usize,
    /// Largest family and degree the sweep was allowed to reach.
    pub bounds_reached: Shape,
    pub shapes_evaluated: usize,
    /// Dimension of the kernel at the winning shape (> 1 is flagged).
    pub kernel_dimension: usize,
    pub status: GuessStatus,
}

impl GuessReport {
    pub fn is_verified(&self) -> bool {
        self.status == GuessStatus::VerifiedConjecture
    }
}

pub(crate) struct SweepBounds {
    pub max_family: usize,
    pub max_degree: usize,
}

fn support(v: &[BigInt]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// Per family: the largest admissible degree and the modular kernel
/// dimension at each degree up to it.
fn speculate(ansatz: &dyn Ansatz, family: usize, dmax: usize) -> Vec<usize> {
    for p in word_primes(16) {
        if let Some(mut m) = ansatz.modular_matrix(family, dmax, p) {
            let pivots = m.eliminate(false);
            return (0..=dmax)
                .map(|d| {
                    let cols = (family + 1) * (d + 1);
                    cols - pivots.iter().filter(|&&c| c < cols).count()
                })
                .collect();
        }
    }
    // Every prime divided some denominator: assume nothing, solve exactly.
    vec![usize::MAX; dmax + 1]
}

pub(crate) fn run_sweep(
    ansatz: &dyn Ansatz,
    kind: AnsatzKind,
    terms: &[Rational],
    fit_len: usize,
    bounds: SweepBounds,
    config: &GuessConfig,
) -> Result<GuessReport> {
    let start = Instant::now();
    let families: Vec<(usize, usize)> = (ansatz.first_family()..=bounds.max_family)
        .filter_map(|f| {
            let eq = ansatz.equations(f);
            let room = eq.checked_sub(config.margin)? / (f + 1);
            let dmax = room.checked_sub(1)?.min(bounds.max_degree);
            Some((f, dmax))
        })
        .collect();
    if families.is_empty() {
        // Smallest total length whose fit window admits the smallest shape.
        let f = ansatz.first_family();
        let lost = fit_len.saturating_sub(ansatz.equations(f));
        let fit_needed = lost + config.margin + f + 1;
        let need = (terms.len() + 1..)
            .find(|&l| {
                let fit = config.fit_len(l);
                fit >= fit_needed && l - fit >= config.min_verify
            })
            .unwrap_or(usize::MAX);
        return Err(Error::InsufficientTerms {
            have: terms.len(),
            need,
        });
    }
    let reached = Shape {
        family: families.iter().map(|f| f.0).max().unwrap_or(0),
        degree: families.iter().map(|f| f.1).max().unwrap_or(0),
    };
    let kernels: Vec<Vec<usize>> = families
        .par_iter()
        .map(|&(f, dmax)| speculate(ansatz, f, dmax))
        .collect();

    let mut shapes: Vec<(Shape, usize)> = families
        .iter()
        .zip(&kernels)
        .flat_map(|(&(family, dmax), ks)| (0..=dmax).map(move |degree| (Shape { family, degree }, ks[degree])))
        .collect();
    shapes.sort_by_key(|(s, _)| s.sweep_key());

    let mut report = GuessReport {
        kind,
        relation: None,
        shape: None,
        fit_terms: fit_len,
        verify_terms: terms.len() - fit_len,
        verification_depth: 0,
        bounds_reached: reached,
        shapes_evaluated: 0,
        kernel_dimension: 0,
        status: GuessStatus::NoFitWithinBounds,
    };

    for (shape, speculated) in shapes {
        report.shapes_evaluated += 1;
        if speculated == 0 {
            continue;
        }
        if let Some(limit) = config.time_limit {
            if start.elapsed() > limit {
                report.status = GuessStatus::ResourceExceeded;
                return Ok(report);
            }
        }
        let rows = ansatz.exact_rows(shape.family, shape.degree);
        let matrix = ExactMatrix::from_rows(rows)?;
        let ints = matrix.integer_rows();
        let mut basis = if uses_modular(config.strategy, &ints, matrix.cols()) {
            modular_kernel(
                matrix.cols(),
                MAX_PRIMES,
                |p| ansatz.modular_matrix(shape.family, shape.degree, p),
                |v| annihilates(&ints, v),
            )?
        } else {
            fraction_free_nullspace(ints, matrix.cols())
        };
        if basis.is_empty() {
            continue;
        }
        basis.sort_by_key(|v| support(v));
        for v in &basis {
            let Ok(relation) = ansatz.relation(shape.family, shape.degree, v) else {
                continue;
            };
            let from = relation.first_equation_using(fit_len);
            let check = relation.verify(terms, 0);
            if !check.is_full() {
                continue;
            }
            let depth = relation.equation_count(terms.len()) - from;
            if depth < config.min_verify {
                continue;
            }
            report.relation = Some(relation);
            report.shape = Some(shape);
            report.verification_depth = depth;
            report.kernel_dimension = basis.len();
            report.status = GuessStatus::VerifiedConjecture;
            log::debug!(
                "{} fit at family {} degree {} after {:?}",
                kind.label(),
                shape.family,
                shape.degree,
                start.elapsed()
            );
            return Ok(report);
        }
    }
    Ok(report)
}
