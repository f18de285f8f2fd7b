//! The four kinds of closed description a guess can produce, in canonical
//! form, together with exact evaluation against term lists.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{canonical_integer_vector, lcm_of_denominators, Rational};
use crate::arith::unipoly::{UniPoly, Var};
use crate::error::{Error, Result};

/// Scales a coefficient family to integer polynomials with joint content 1
/// and a positive leading coefficient in the highest-index polynomial.
/// Trailing zero polynomials are dropped; an all-zero family is rejected.
pub fn canonicalize_family(var: Var, polys: &[UniPoly]) -> Result<Vec<UniPoly>> {
    let mut polys: Vec<UniPoly> = polys.to_vec();
    while polys.last().is_some_and(UniPoly::is_zero) {
        polys.pop();
    }
    if polys.is_empty() {
        return Err(Error::InvalidRelation("the zero relation is trivial".into()));
    }
    let width = polys.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let flat: Vec<Rational> = polys
        .iter()
        .flat_map(|p| (0..width).map(move |k| p.coeff(k)))
        .collect();
    let mut ints = canonical_integer_vector(&flat);
    let lead = polys.len() - 1;
    let lead_sign_negative = polys[lead]
        .degree()
        .map(|d| ints[lead * width + d].is_negative())
        .unwrap_or(false);
    if lead_sign_negative {
        for x in ints.iter_mut() {
            *x = -&*x;
        }
    }
    Ok(ints
        .chunks(width)
        .map(|c| UniPoly::from_bigints(var, c))
        .collect())
}

/// `c(n) = p(n)` for every index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolynomialFormula {
    pub poly: UniPoly,
}

impl PolynomialFormula {
    pub fn new(poly: UniPoly) -> Self {
        PolynomialFormula {
            poly: UniPoly::new(Var::N, poly.coeffs().to_vec()),
        }
    }

    pub fn eval(&self, n: usize) -> Rational {
        self.poly.eval_int(n as i64)
    }
}

/// Divides every polynomial by the largest power of `t` they share. A
/// series relation `t^k L = 0` says the same as `L = 0` but leaves the last
/// `k` terms unconstrained.
fn strip_t_power(polys: &[UniPoly]) -> Vec<UniPoly> {
    let k = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.coeffs().iter().take_while(|c| c.is_zero()).count())
        .min()
        .unwrap_or(0);
    polys
        .iter()
        .map(|p| UniPoly::new(p.var(), p.coeffs().iter().skip(k).cloned().collect()))
        .collect()
}

/// `Σ_{i=0}^{d} p_i(t) C(t)^i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicRelation {
    coeffs: Vec<UniPoly>,
}

impl AlgebraicRelation {
    /// Common factors `t^k` and `C^j` are divided out; what remains must
    /// involve `C`.
    pub fn new(coeffs: &[UniPoly]) -> Result<Self> {
        let low = coeffs.iter().take_while(|p| p.is_zero()).count();
        let coeffs = canonicalize_family(Var::T, &strip_t_power(&coeffs[low.min(coeffs.len())..]))?;
        if coeffs.len() < 2 {
            return Err(Error::InvalidRelation("an algebraic relation must involve C".into()));
        }
        Ok(AlgebraicRelation { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn t_degree(&self) -> usize {
        self.coeffs.iter().filter_map(UniPoly::degree).max().unwrap_or(0)
    }

    /// Coefficients of `Σ p_i C^i` for `t^0 .. t^{len-1}` where `len` is the
    /// number of known terms.
    pub fn residual_series(&self, terms: &[Rational]) -> Vec<Rational> {
        if terms.iter().all(|c| c.is_integer()) {
            let ints: Vec<BigInt> = terms.iter().map(Rational::to_integer).collect();
            return self
                .residual_series_int(&ints)
                .into_iter()
                .map(Rational::from_integer)
                .collect();
        }
        let len = terms.len();
        let mut out = vec![Rational::zero(); len];
        let mut power = vec![Rational::zero(); len];
        if len > 0 {
            power[0] = Rational::one();
        }
        for (i, p) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = convolve(&power, terms, len);
            }
            for (j, a) in p.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for k in j..len {
                    if !power[k - j].is_zero() {
                        out[k] += a * &power[k - j];
                    }
                }
            }
        }
        out
    }
}

impl AlgebraicRelation {
    fn residual_series_int(&self, terms: &[BigInt]) -> Vec<BigInt> {
        let len = terms.len();
        let mut out = vec![BigInt::zero(); len];
        let mut power = vec![BigInt::zero(); len];
        if len > 0 {
            power[0] = BigInt::one();
        }
        for (i, p) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = convolve(&power, terms, len);
            }
            for (j, a) in integer_coeffs(p).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for k in j..len {
                    if !power[k - j].is_zero() {
                        out[k] += a * &power[k - j];
                    }
                }
            }
        }
        out
    }
}

/// Terms scaled by the lcm of their denominators. A residual that is linear
/// and homogeneous in the terms vanishes on these iff it vanishes on the
/// originals.
fn scaled_integers(terms: &[Rational]) -> Vec<BigInt> {
    let l = lcm_of_denominators(terms);
    terms.iter().map(|r| r.numer() * (&l / r.denom())).collect()
}

/// Canonical coefficient polynomials are integral.
fn integer_coeffs(p: &UniPoly) -> Vec<BigInt> {
    p.coeffs().iter().map(Rational::to_integer).collect()
}

fn horner(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
}

pub(crate) fn convolve<T>(a: &[T], b: &[T], len: usize) -> Vec<T>
where
    T: Zero + Clone + for<'x> std::ops::AddAssign<&'x T>,
    for<'x> &'x T: std::ops::Mul<&'x T, Output = T>,
{
    let mut out = vec![T::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

/// `Σ_{i=0}^{d} q_i(n) c(n+i) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Recurrence {
    coeffs: Vec<UniPoly>,
}

impl Recurrence {
    pub fn new(coeffs: &[UniPoly]) -> Result<Self> {
        let coeffs = canonicalize_family(Var::N, coeffs)?;
        Ok(Recurrence { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn leading(&self) -> &UniPoly {
        &self.coeffs[self.order()]
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().filter_map(UniPoly::degree).max().unwrap_or(0)
    }

    /// `Σ q_i(n) c(n+i)`; needs `c(n..=n+d)`.
    pub fn residual_at(&self, terms: &[Rational], n: usize) -> Rational {
        let nr = Rational::from_integer(BigInt::from(n));
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| !terms[n + i].is_zero())
            .map(|(i, q)| q.eval(&nr) * &terms[n + i])
            .sum()
    }

    fn residual_int(coeffs: &[Vec<BigInt>], z: &[BigInt], n: usize) -> BigInt {
        let nb = BigInt::from(n);
        coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| !z[n + i].is_zero())
            .map(|(i, q)| horner(q, &nb) * &z[n + i])
            .sum()
    }

    /// Indices `n < limit` where the leading coefficient vanishes.
    pub fn exceptional_indices(&self, limit: usize) -> Vec<usize> {
        let lead = self.leading();
        (0..limit).filter(|&n| lead.eval_int(n as i64).is_zero()).collect()
    }
}

/// `Σ_{i=0}^{L} r_i(t) (d/dt)^i C(t) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DifferentialRelation {
    coeffs: Vec<UniPoly>,
}

impl DifferentialRelation {
    pub fn new(coeffs: &[UniPoly]) -> Result<Self> {
        let coeffs = canonicalize_family(Var::T, &strip_t_power(coeffs))?;
        Ok(DifferentialRelation { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().filter_map(UniPoly::degree).max().unwrap_or(0)
    }

    /// Number of initial conditions needed to pin a solution: the order.
    pub fn initial_conditions(&self) -> usize {
        self.order()
    }

    /// Coefficient of `t^k` of the operator applied to the series; needs
    /// terms up to `k + L`.
    pub fn residual_at(&self, terms: &[Rational], k: usize) -> Rational {
        let mut acc = Rational::zero();
        for (i, r) in self.coeffs.iter().enumerate() {
            for (j, a) in r.coeffs().iter().enumerate() {
                if a.is_zero() || j > k {
                    continue;
                }
                let m = k - j;
                acc += a * derivative_coeff(terms, m, i);
            }
        }
        acc
    }
}

impl DifferentialRelation {
    fn residual_int(coeffs: &[Vec<BigInt>], z: &[BigInt], k: usize) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, r) in coeffs.iter().enumerate() {
            for (j, a) in r.iter().enumerate().take(k + 1) {
                let c = &z[k - j + i];
                if a.is_zero() || c.is_zero() {
                    continue;
                }
                let falling: BigInt = ((k - j + 1)..=(k - j + i)).map(BigInt::from).product();
                acc += a * falling * c;
            }
        }
        acc
    }
}

/// `[t^m] C^{(i)} = (m+1)(m+2)...(m+i) c_{m+i}`.
pub(crate) fn derivative_coeff(terms: &[Rational], m: usize, i: usize) -> Rational {
    let c = &terms[m + i];
    if c.is_zero() {
        return Rational::zero();
    }
    let falling: BigInt = ((m + 1)..=(m + i)).map(BigInt::from).product();
    c * Rational::from_integer(falling)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Relation {
    Polynomial(PolynomialFormula),
    Algebraic(AlgebraicRelation),
    Recurrence(Recurrence),
    Differential(DifferentialRelation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnsatzKind {
    Polynomial,
    Algebraic,
    Recurrence,
    Differential,
}

impl AnsatzKind {
    pub fn label(self) -> &'static str {
        match self {
            AnsatzKind::Polynomial => "poly",
            AnsatzKind::Algebraic => "alg",
            AnsatzKind::Recurrence => "rec",
            AnsatzKind::Differential => "ode",
        }
    }
}

/// Result of checking a relation against a term list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    /// Consecutive indices, starting at `from`, on which the relation holds.
    pub depth: usize,
    /// Indices that could be checked at all from `from` on.
    pub available: usize,
    /// First index (≥ `from`) where the relation fails, if any.
    pub first_failure: Option<usize>,
    /// Recurrence indices with a vanishing leading coefficient.
    pub exceptional: Vec<usize>,
}

impl Verification {
    pub fn is_full(&self) -> bool {
        self.depth == self.available
    }
}

impl Relation {
    pub fn kind(&self) -> AnsatzKind {
        match self {
            Relation::Polynomial(_) => AnsatzKind::Polynomial,
            Relation::Algebraic(_) => AnsatzKind::Algebraic,
            Relation::Recurrence(_) => AnsatzKind::Recurrence,
            Relation::Differential(_) => AnsatzKind::Differential,
        }
    }

    /// Number of checkable indices given `len` terms.
    pub fn equation_count(&self, len: usize) -> usize {
        match self {
            Relation::Polynomial(_) | Relation::Algebraic(_) => len,
            Relation::Recurrence(r) => len.saturating_sub(r.order()),
            Relation::Differential(d) => len.saturating_sub(d.order()),
        }
    }

    /// First equation index that involves a term at or beyond `fit_len`.
    pub fn first_equation_using(&self, fit_len: usize) -> usize {
        match self {
            Relation::Polynomial(_) | Relation::Algebraic(_) => fit_len,
            Relation::Recurrence(r) => fit_len.saturating_sub(r.order()),
            Relation::Differential(d) => fit_len.saturating_sub(d.order()),
        }
    }

    /// Checks the relation at indices `from, from+1, ...` and reports the
    /// length of the run on which it holds exactly.
    pub fn verify(&self, terms: &[Rational], from: usize) -> Verification {
        let available_total = self.equation_count(terms.len());
        let available = available_total.saturating_sub(from);
        let algebraic_residual = match self {
            Relation::Algebraic(a) => Some(a.residual_series(terms)),
            _ => None,
        };
        let mut exceptional = Vec::new();
        if let Relation::Recurrence(r) = self {
            exceptional = r.exceptional_indices(available_total);
        }
        let linear = match self {
            Relation::Recurrence(r) => Some(r.coeffs()),
            Relation::Differential(d) => Some(d.coeffs()),
            _ => None,
        }
        .map(|c| (c.iter().map(integer_coeffs).collect::<Vec<_>>(), scaled_integers(terms)));
        let holds = |k: usize| -> bool {
            match (self, &linear) {
                (Relation::Polynomial(p), _) => p.eval(k) == terms[k],
                (Relation::Algebraic(_), _) => algebraic_residual.as_ref().expect("computed")[k].is_zero(),
                (Relation::Recurrence(_), Some((c, z))) => Recurrence::residual_int(c, z, k).is_zero(),
                (Relation::Differential(_), Some((c, z))) => DifferentialRelation::residual_int(c, z, k).is_zero(),
                _ => unreachable!("linear relations carry integer data"),
            }
        };
        let mut depth = 0;
        let mut first_failure = None;
        for k in from..available_total {
            if holds(k) {
                depth += 1;
            } else {
                first_failure = Some(k);
                break;
            }
        }
        Verification {
            depth,
            available,
            first_failure,
            exceptional,
        }
    }
}

/// Free-function form of [`Relation::verify`], returning only the depth.
pub fn verify_relation(relation: &Relation, terms: &[Rational], from_index: usize) -> usize {
    relation.verify(terms, from_index).depth
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn catalan(n: usize) -> Vec<Rational> {
        let mut c = vec![rat(1)];
        for k in 0..n - 1 {
            let next = &c[k] * Rational::new((4 * k as i64 + 2).into(), (k as i64 + 2).into());
            c.push(next);
        }
        c
    }

    #[test]
    fn canonical_family_signs_and_content() {
        let fam = [
            UniPoly::from_ints(Var::N, &[4, 8]),
            UniPoly::from_ints(Var::N, &[-4, -2]),
        ];
        let c = canonicalize_family(Var::N, &fam).unwrap();
        assert_eq!(c[1], UniPoly::from_ints(Var::N, &[2, 1]));
        assert_eq!(c[0], UniPoly::from_ints(Var::N, &[-2, -4]));
        assert!(canonicalize_family(Var::N, &[UniPoly::zero(Var::N)]).is_err());
    }

    #[test]
    fn catalan_recurrence_depth() {
        let r = Recurrence::new(&[
            UniPoly::from_ints(Var::N, &[-2, -4]),
            UniPoly::from_ints(Var::N, &[2, 1]),
        ])
        .unwrap();
        let rel = Relation::Recurrence(r);
        let mut terms = catalan(50);
        assert_eq!(verify_relation(&rel, &terms, 0), 49);
        terms[30] += rat(1);
        let v = rel.verify(&terms, 0);
        assert_eq!(v.depth, 29);
        assert_eq!(v.first_failure, Some(29));
    }

    #[test]
    fn algebraic_residual_of_catalan() {
        let rel = AlgebraicRelation::new(&[
            UniPoly::from_ints(Var::T, &[1]),
            UniPoly::from_ints(Var::T, &[-1]),
            UniPoly::from_ints(Var::T, &[0, 1]),
        ])
        .unwrap();
        assert!(rel.residual_series(&catalan(20)).iter().all(Zero::is_zero));
    }

    #[test]
    fn exceptional_indices_found() {
        let r = Recurrence::new(&[UniPoly::from_ints(Var::N, &[1]), UniPoly::from_ints(Var::N, &[-5, 1])]).unwrap();
        assert_eq!(r.exceptional_indices(10), vec![5]);
    }
}
