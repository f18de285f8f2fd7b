//! Producers of exact terms: recurrence unrolling with a fixed-size window,
//! algebraic re-expansion and independent Catalan oracles.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::rational::Rational;
use crate::error::{Error, Result};
use crate::guess::relation::convolve;
use crate::guess::{AlgebraicRelation, PolynomialFormula, Recurrence};

/// Starting data for unrolling a recurrence of order `d`: `c(0..d)` and a
/// value of `c(n+d)` for each index `n` where the leading coefficient
/// vanishes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Seed {
    pub initial: Vec<Rational>,
    pub exceptional: BTreeMap<usize, Rational>,
}

impl Seed {
    pub fn new(initial: Vec<Rational>) -> Self {
        Seed {
            initial,
            exceptional: BTreeMap::new(),
        }
    }

    /// Takes the initial values and every exceptional value from known
    /// terms, for indices below `terms.len()`.
    pub fn from_terms(rec: &Recurrence, terms: &[Rational]) -> Result<Self> {
        let d = rec.order();
        if terms.len() < d {
            return Err(Error::InsufficientTerms {
                have: terms.len(),
                need: d,
            });
        }
        let exceptional = rec
            .exceptional_indices(terms.len().saturating_sub(d))
            .into_iter()
            .map(|n| (n, terms[n + d].clone()))
            .collect();
        Ok(Seed {
            initial: terms[..d].to_vec(),
            exceptional,
        })
    }
}

/// What a [`SequenceStream`] draws its terms from.
#[derive(Debug, Clone)]
pub enum Backing {
    Recurrence(Recurrence, Seed),
    Polynomial(PolynomialFormula),
    /// `(2n)!/(n!(n+1)!)`, no retained state.
    CatalanClosedForm,
    /// Catalan numbers by the quadratic convolution; retains every value.
    CatalanConvolution,
}

/// Pull-based cursor over an exact sequence.
#[derive(Debug, Clone)]
pub struct SequenceStream {
    backing: Backing,
    index: usize,
    window: VecDeque<Rational>,
    coeffs: Vec<Vec<BigInt>>,
}

impl SequenceStream {
    pub fn new(backing: Backing) -> Result<Self> {
        let mut coeffs = Vec::new();
        if let Backing::Recurrence(rec, seed) = &backing {
            if seed.initial.len() != rec.order() {
                return Err(Error::InsufficientTerms {
                    have: seed.initial.len(),
                    need: rec.order(),
                });
            }
            coeffs = rec
                .coeffs()
                .iter()
                .map(|q| q.coeffs().iter().map(Rational::to_integer).collect())
                .collect();
        }
        Ok(SequenceStream {
            backing,
            index: 0,
            window: VecDeque::new(),
            coeffs,
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Number of past values currently retained.
    pub fn state_size(&self) -> usize {
        self.window.len()
    }

    pub fn restart(&mut self) {
        self.index = 0;
        self.window.clear();
    }

    pub fn next_term(&mut self) -> Result<Rational> {
        let n = self.index;
        let value = match &self.backing {
            Backing::Polynomial(p) => p.eval(n),
            Backing::CatalanClosedForm => Rational::from_integer(closed_form_catalan(n)),
            Backing::CatalanConvolution => {
                let v = if n == 0 {
                    Rational::one()
                } else {
                    (0..n).map(|i| &self.window[i] * &self.window[n - 1 - i]).sum()
                };
                self.window.push_back(v.clone());
                self.index += 1;
                return Ok(v);
            }
            Backing::Recurrence(rec, seed) => {
                let d = rec.order();
                let v = if n < d {
                    seed.initial[n].clone()
                } else {
                    let m = n - d;
                    let nb = BigInt::from(m);
                    let eval = |q: &[BigInt]| q.iter().rev().fold(BigInt::zero(), |acc, a| acc * &nb + a);
                    let lead = eval(&self.coeffs[d]);
                    if lead.is_zero() {
                        seed.exceptional
                            .get(&m)
                            .cloned()
                            .ok_or(Error::MissingExceptionalValue(m))?
                    } else {
                        let s: Rational = (0..d)
                            .filter(|&i| !self.window[i].is_zero())
                            .map(|i| Rational::from_integer(eval(&self.coeffs[i])) * &self.window[i])
                            .sum();
                        -s / Rational::from_integer(lead)
                    }
                };
                if d > 0 {
                    if self.window.len() == d {
                        self.window.pop_front();
                    }
                    self.window.push_back(v.clone());
                }
                v
            }
        };
        self.index += 1;
        Ok(value)
    }

    pub fn take_terms(&mut self, count: usize) -> Result<Vec<Rational>> {
        (0..count).map(|_| self.next_term()).collect()
    }
}

/// Terms `c(0..=n)` of the recurrence. Only `d` prior values are kept.
pub fn unroll(rec: &Recurrence, seed: &Seed, n: usize) -> Result<Vec<Rational>> {
    let mut s = SequenceStream::new(Backing::Recurrence(rec.clone(), seed.clone()))?;
    s.take_terms(n + 1)
}

/// Extends `prefix` to `len` terms of the power-series root of `rel` it
/// starts. Each new coefficient is read off from the first coefficient of
/// the residual it influences, so the prefix must be long enough to exhibit
/// the valuation of `∂P/∂C` along the root.
pub fn expand_algebraic(rel: &AlgebraicRelation, prefix: &[Rational], len: usize) -> Result<Vec<Rational>> {
    let k = prefix.len();
    let deriv = derivative_along(rel, prefix);
    let Some(v) = deriv.iter().position(|x| !x.is_zero()) else {
        return Err(Error::Degenerate("the relation is singular along the given prefix".into()));
    };
    if v >= k {
        return Err(Error::InsufficientTerms { have: k, need: v + 1 });
    }
    let pivot = deriv[v].clone();
    let mut c = prefix.to_vec();
    for m in k..len {
        c.push(Rational::zero());
        let r = rel.residual_series(&extended(&c, m + v + 1));
        let next = -&r[m + v] / &pivot;
        c[m] = next;
    }
    c.truncate(len.max(k));
    Ok(c)
}

fn extended(c: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = c.to_vec();
    out.resize(len, Rational::zero());
    out
}

/// Coefficients of `Σ i p_i(t) C^{i-1}` with `C` the prefix.
fn derivative_along(rel: &AlgebraicRelation, prefix: &[Rational]) -> Vec<Rational> {
    let len = prefix.len();
    let mut out = vec![Rational::zero(); len];
    let mut power = vec![Rational::zero(); len];
    if len > 0 {
        power[0] = Rational::one();
    }
    for (i, p) in rel.coeffs().iter().enumerate().skip(1) {
        if i > 1 {
            power = convolve(&power, prefix, len);
        }
        let w = Rational::from_integer(BigInt::from(i));
        for (j, a) in p.coeffs().iter().enumerate() {
            for kk in j..len {
                out[kk] += &w * a * &power[kk - j];
            }
        }
    }
    out
}

/// First `n + 1` Catalan numbers by `a(n) = Σ a(i) a(n-1-i)`.
pub fn convolution_oracle(n: usize) -> Vec<BigInt> {
    let mut a: Vec<BigInt> = Vec::with_capacity(n + 1);
    a.push(BigInt::one());
    for m in 1..=n {
        let v = (0..m).map(|i| &a[i] * &a[m - 1 - i]).sum();
        a.push(v);
    }
    a
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

pub fn closed_form_catalan(n: usize) -> BigInt {
    factorial(2 * n) / (factorial(n) * factorial(n + 1))
}

pub fn binomial_coefficient(n: i64, k: i64) -> Result<BigInt> {
    if n < 0 || k < 0 || k > n {
        return Err(Error::OutOfRange(format!("binomial({n}, {k}) needs 0 <= k <= n")));
    }
    let k = k.min(n - k) as usize;
    let n = n as usize;
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Ok(acc)
}
