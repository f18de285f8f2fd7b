//! Linear systems for the algebraic, P-recursive and D-finite ansatzes.
//!
//! Every ansatz is a family of shapes `(family, degree)`: the family is the
//! degree in `C`, the recurrence order or the differential order, and each
//! of the `family + 1` unknown polynomials has degree at most `degree`.
//! Columns are laid out degree-major (`j * (family + 1) + i`) so the columns
//! of shape `(f, D)` are a prefix of those of `(f, D + 1)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::relation::{convolve, derivative_coeff, AlgebraicRelation, DifferentialRelation, Recurrence, Relation};
use crate::arith::modular::{inv_mod, reduce, ModMatrix};
use crate::arith::rational::Rational;
use crate::arith::unipoly::{UniPoly, Var};
use crate::error::Result;

pub(crate) trait Ansatz: Sync {
    fn first_family(&self) -> usize {
        1
    }
    /// Number of equations contributed by the fit window for a family.
    fn equations(&self, family: usize) -> usize;
    fn exact_rows(&self, family: usize, degree: usize) -> Vec<Vec<Rational>>;
    /// `None` when some term has a denominator divisible by `p`.
    fn modular_matrix(&self, family: usize, degree: usize, p: u64) -> Option<ModMatrix>;
    fn relation(&self, family: usize, degree: usize, v: &[BigInt]) -> Result<Relation>;
}

pub(crate) fn rat_mod(r: &Rational, p: u64) -> Option<u64> {
    let d = reduce(r.denom(), p);
    if d == 0 {
        return None;
    }
    Some(reduce(r.numer(), p) * inv_mod(d, p) % p)
}

fn terms_mod(terms: &[Rational], p: u64) -> Option<Vec<u64>> {
    terms.iter().map(|t| rat_mod(t, p)).collect()
}

fn col(family: usize, i: usize, j: usize) -> usize {
    j * (family + 1) + i
}

fn unpack(var: Var, family: usize, degree: usize, v: &[BigInt]) -> Vec<UniPoly> {
    (0..=family)
        .map(|i| {
            let c: Vec<BigInt> = (0..=degree).map(|j| v[col(family, i, j)].clone()).collect();
            UniPoly::from_bigints(var, &c)
        })
        .collect()
}

/// `Σ_i q_i(n) c(n+i) = 0` over `n = 0 .. fit - order - 1`.
pub(crate) struct RecurrenceAnsatz<'a> {
    pub fit: &'a [Rational],
}

impl Ansatz for RecurrenceAnsatz<'_> {
    fn equations(&self, family: usize) -> usize {
        self.fit.len().saturating_sub(family)
    }

    fn exact_rows(&self, family: usize, degree: usize) -> Vec<Vec<Rational>> {
        let cols = (family + 1) * (degree + 1);
        (0..self.equations(family))
            .map(|n| {
                let mut row = vec![Rational::zero(); cols];
                let nr = Rational::from_integer(BigInt::from(n));
                let mut pw = Rational::one();
                for j in 0..=degree {
                    for i in 0..=family {
                        row[col(family, i, j)] = &pw * &self.fit[n + i];
                    }
                    pw *= &nr;
                }
                row
            })
            .collect()
    }

    fn modular_matrix(&self, family: usize, degree: usize, p: u64) -> Option<ModMatrix> {
        let c = terms_mod(self.fit, p)?;
        let rows = self.equations(family);
        let mut m = ModMatrix::zeros(rows, (family + 1) * (degree + 1), p);
        for n in 0..rows {
            let mut pw = 1u64;
            for j in 0..=degree {
                for i in 0..=family {
                    m.set(n, col(family, i, j), pw * c[n + i] % p);
                }
                pw = pw * (n as u64 % p) % p;
            }
        }
        Some(m)
    }

    fn relation(&self, family: usize, degree: usize, v: &[BigInt]) -> Result<Relation> {
        Recurrence::new(&unpack(Var::N, family, degree, v)).map(Relation::Recurrence)
    }
}

/// `Σ_i p_i(t) C^i = 0 mod t^fit`.
pub(crate) struct AlgebraicAnsatz {
    /// `powers[i]` = coefficients of `C^i` to the fit length.
    powers: Vec<Vec<Rational>>,
    fit: Vec<Rational>,
}

impl AlgebraicAnsatz {
    pub fn new(fit: &[Rational], max_power: usize) -> Self {
        let len = fit.len();
        let mut powers = Vec::with_capacity(max_power + 1);
        let mut cur = vec![Rational::zero(); len];
        if len > 0 {
            cur[0] = Rational::one();
        }
        powers.push(cur.clone());
        for _ in 0..max_power {
            cur = convolve(&cur, fit, len);
            powers.push(cur.clone());
        }
        AlgebraicAnsatz {
            powers,
            fit: fit.to_vec(),
        }
    }
}

impl Ansatz for AlgebraicAnsatz {
    fn equations(&self, _family: usize) -> usize {
        self.fit.len()
    }

    fn exact_rows(&self, family: usize, degree: usize) -> Vec<Vec<Rational>> {
        let cols = (family + 1) * (degree + 1);
        (0..self.fit.len())
            .map(|k| {
                let mut row = vec![Rational::zero(); cols];
                for j in 0..=degree.min(k) {
                    for i in 0..=family {
                        row[col(family, i, j)] = self.powers[i][k - j].clone();
                    }
                }
                row
            })
            .collect()
    }

    fn modular_matrix(&self, family: usize, degree: usize, p: u64) -> Option<ModMatrix> {
        let c = terms_mod(&self.fit, p)?;
        let len = c.len();
        let mut powers: Vec<Vec<u64>> = Vec::with_capacity(family + 1);
        let mut cur = vec![0u64; len];
        if len > 0 {
            cur[0] = 1;
        }
        powers.push(cur.clone());
        for _ in 0..family {
            let mut next = vec![0u64; len];
            for (a, &x) in cur.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (b, &y) in c.iter().enumerate().take(len - a) {
                    next[a + b] = (next[a + b] + x * y) % p;
                }
            }
            cur = next;
            powers.push(cur.clone());
        }
        let mut m = ModMatrix::zeros(len, (family + 1) * (degree + 1), p);
        for k in 0..len {
            for j in 0..=degree.min(k) {
                for (i, pw) in powers.iter().enumerate() {
                    m.set(k, col(family, i, j), pw[k - j]);
                }
            }
        }
        Some(m)
    }

    fn relation(&self, family: usize, degree: usize, v: &[BigInt]) -> Result<Relation> {
        AlgebraicRelation::new(&unpack(Var::T, family, degree, v)).map(Relation::Algebraic)
    }
}

/// `Σ_i r_i(t) C^{(i)} = 0`, coefficients `t^0 .. t^{fit - L - 1}`.
pub(crate) struct DifferentialAnsatz<'a> {
    pub fit: &'a [Rational],
}

impl Ansatz for DifferentialAnsatz<'_> {
    fn equations(&self, family: usize) -> usize {
        self.fit.len().saturating_sub(family)
    }

    fn exact_rows(&self, family: usize, degree: usize) -> Vec<Vec<Rational>> {
        let cols = (family + 1) * (degree + 1);
        (0..self.equations(family))
            .map(|k| {
                let mut row = vec![Rational::zero(); cols];
                for j in 0..=degree.min(k) {
                    for i in 0..=family {
                        row[col(family, i, j)] = derivative_coeff(self.fit, k - j, i);
                    }
                }
                row
            })
            .collect()
    }

    fn modular_matrix(&self, family: usize, degree: usize, p: u64) -> Option<ModMatrix> {
        let c = terms_mod(self.fit, p)?;
        let rows = self.equations(family);
        let mut m = ModMatrix::zeros(rows, (family + 1) * (degree + 1), p);
        for k in 0..rows {
            for j in 0..=degree.min(k) {
                let base = k - j;
                for i in 0..=family {
                    let mut f = c[base + i];
                    for s in (base + 1)..=(base + i) {
                        f = f * (s as u64 % p) % p;
                    }
                    m.set(k, col(family, i, j), f);
                }
            }
        }
        Some(m)
    }

    fn relation(&self, family: usize, degree: usize, v: &[BigInt]) -> Result<Relation> {
        DifferentialRelation::new(&unpack(Var::T, family, degree, v)).map(Relation::Differential)
    }
}
