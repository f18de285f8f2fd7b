//! Polynomials in zero, one or two catalytic variables (`x`, `y`).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

pub type Exponents = [u32; 2];

/// Which catalytic variable an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Catalytic {
    X,
    Y,
}

impl Catalytic {
    pub fn index(self) -> usize {
        match self {
            Catalytic::X => 0,
            Catalytic::Y => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Sparse map from exponent vectors to nonzero rationals. Slots beyond the
/// arity are always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CatalyticPoly {
    arity: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl CatalyticPoly {
    pub fn zero(arity: usize) -> Self {
        assert!(arity <= 2, "at most two catalytic variables");
        CatalyticPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        Self::monomial(arity, [0, 0], c)
    }

    pub fn monomial(arity: usize, exps: Exponents, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        debug_assert!(exps[arity.min(2)..].iter().all(|&e| e == 0));
        p.add_term(exps, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: Exponents) -> Rational {
        self.terms.get(&exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term; for arity 0 this is the whole value.
    pub fn constant_term(&self) -> Rational {
        self.coeff([0, 0])
    }

    pub fn add_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    pub fn apply(&self, other: &Self, op: PolyOp) -> Result<Self> {
        match op {
            PolyOp::Add => self.add(other),
            PolyOp::Sub => self.sub(other),
            PolyOp::Mul => self.mul(other),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1]], ca * cb);
            }
        }
        Ok(out)
    }

    pub(crate) fn add_assign_scaled(&mut self, other: &Self, by: &Rational) {
        debug_assert_eq!(self.arity, other.arity);
        if by.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(*e, c * by);
        }
    }

    pub fn scale(&self, by: &Rational) -> Self {
        if by.is_zero() {
            return Self::zero(self.arity);
        }
        CatalyticPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (*e, c * by)).collect(),
        }
    }

    /// Multiplies by `x^dx y^dy`; negative shifts are only allowed when every
    /// term has a large enough exponent.
    pub fn shift(&self, by: [i64; 2]) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let nx = e[0] as i64 + by[0];
            let ny = e[1] as i64 + by[1];
            if nx < 0 || ny < 0 {
                return Err(Error::OutOfRange(format!(
                    "shift by {by:?} would create a negative exponent"
                )));
            }
            terms.insert([nx as u32, ny as u32], c.clone());
        }
        Ok(CatalyticPoly {
            arity: self.arity,
            terms,
        })
    }

    fn check_var(&self, var: Catalytic) -> Result<usize> {
        let i = var.index();
        if i >= self.arity {
            return Err(Error::MissingVariable(i));
        }
        Ok(i)
    }

    /// Coefficient of `var^k`, as a polynomial in the remaining variables.
    pub fn slice(&self, var: Catalytic, k: u32) -> Result<Self> {
        let i = self.check_var(var)?;
        Ok(CatalyticPoly {
            arity: self.arity - 1,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] == k)
                .map(|(e, c)| (drop_slot(*e, i), c.clone()))
                .collect(),
        })
    }

    /// `var^k` times the coefficient of `var^k`, keeping the arity.
    pub fn slice_in_place(&self, var: Catalytic, k: u32) -> Result<Self> {
        let i = self.check_var(var)?;
        Ok(CatalyticPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] == k)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        })
    }

    /// Evaluates `var := value`, reducing the arity by one.
    pub fn substitute(&self, var: Catalytic, value: &Rational) -> Result<Self> {
        let i = self.check_var(var)?;
        let mut out = Self::zero(self.arity - 1);
        for (e, c) in &self.terms {
            let w = pow(value, e[i]);
            out.add_term(drop_slot(*e, i), c * w);
        }
        Ok(out)
    }

    /// Evaluates every catalytic variable.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (slot, v) in point.iter().enumerate().take(self.arity) {
                m *= pow(v, e[slot]);
            }
            acc += m;
        }
        acc
    }

    pub fn max_exponent(&self, var: Catalytic) -> Option<u32> {
        let i = var.index();
        self.terms.keys().map(|e| e[i]).max()
    }
}

fn drop_slot(e: Exponents, i: usize) -> Exponents {
    if i == 0 {
        [e[1], 0]
    } else {
        [e[0], 0]
    }
}

fn pow(v: &Rational, k: u32) -> Rational {
    num_traits::pow(v.clone(), k as usize)
}

impl fmt::Display for CatalyticPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names = ['x', 'y'];
        let mut first = true;
        for (e, c) in self.terms.iter() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            for (slot, name) in names.iter().enumerate().take(self.arity) {
                match e[slot] {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    k => write!(f, "*{name}^{k}")?,
                }
            }
        }
        Ok(())
    }
}
