use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, from_int, Rational};

/// Name of the indeterminate a [`UniPoly`] is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    N,
    T,
    X,
    Y,
}

impl Var {
    pub fn symbol(self) -> char {
        match self {
            Var::N => 'n',
            Var::T => 't',
            Var::X => 'x',
            Var::Y => 'y',
        }
    }
}

/// Dense univariate polynomial with rational coefficients; index = exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    var: Var,
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(var: Var, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { var, coeffs }
    }

    pub fn from_ints(var: Var, coeffs: &[i64]) -> Self {
        Self::new(var, coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(var: Var, coeffs: &[BigInt]) -> Self {
        Self::new(var, coeffs.iter().cloned().map(from_int).collect())
    }

    pub fn zero(var: Var) -> Self {
        UniPoly { var, coeffs: Vec::new() }
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        Self::new(var, vec![c])
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * at + c)
    }

    pub fn eval_int(&self, at: i64) -> Rational {
        self.eval(&Rational::from_integer(at.into()))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, by: &Rational) -> Self {
        Self::new(self.var, self.coeffs.iter().map(|c| c * by).collect())
    }

    /// The polynomial `p(v + shift)`.
    pub fn shift_arg(&self, shift: i64) -> Self {
        let s = Rational::from_integer(shift.into());
        let lin = UniPoly::new(self.var, vec![s, Rational::one()]);
        self.coeffs.iter().rev().fold(UniPoly::zero(self.var), |acc, c| {
            &(&acc * &lin) + &UniPoly::constant(self.var, c.clone())
        })
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
            .collect();
        Self::new(self.var, coeffs)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(self.var, (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(self.var, (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.var);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(self.var, out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.var, self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Canonical text form, highest power first, no spaces: `4*n^2-n+1/2`.
impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let v = self.var.symbol();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{k}"),
            };
            if k == 0 {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), mono)?;
            }
        }
        Ok(())
    }
}
