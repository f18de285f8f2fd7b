//! Truncated power series in `t` with catalytic-polynomial coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::catalytic::{Catalytic, CatalyticPoly};
use super::rational::Rational;
use crate::error::{Error, Result};

/// `c[0] + c[1] t + ... + c[N] t^N + O(t^{N+1})`.
///
/// `exact` is cleared when a coefficient was produced from data that is not
/// itself the truncation of a well-defined series (for instance a
/// hand-assembled prefix); arithmetic propagates it with a logical AND.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    arity: usize,
    coeffs: Vec<CatalyticPoly>,
    exact: bool,
}

impl TruncatedSeries {
    pub fn new(arity: usize, coeffs: Vec<CatalyticPoly>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::OutOfRange("a truncated series needs at least one coefficient".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.arity() != arity) {
            return Err(Error::ArityMismatch {
                left: arity,
                right: bad.arity(),
            });
        }
        Ok(TruncatedSeries {
            arity,
            coeffs,
            exact: true,
        })
    }

    pub fn zero(arity: usize, order: usize) -> Self {
        TruncatedSeries {
            arity,
            coeffs: vec![CatalyticPoly::zero(arity); order + 1],
            exact: true,
        }
    }

    pub fn one(arity: usize, order: usize) -> Self {
        let mut s = Self::zero(arity, order);
        s.coeffs[0] = CatalyticPoly::one(arity);
        s
    }

    /// Series in `t` alone from its coefficient list.
    pub fn from_rationals(values: &[Rational]) -> Result<Self> {
        Self::new(
            0,
            values
                .iter()
                .map(|v| CatalyticPoly::constant(0, v.clone()))
                .collect(),
        )
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        let rs: Vec<Rational> = values.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect();
        Self::from_rationals(&rs)
    }

    pub fn with_exactness(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Coefficient of `t^n`; reading past the valid order is an error.
    pub fn coeff(&self, n: usize) -> Result<&CatalyticPoly> {
        self.coeffs.get(n).ok_or(Error::BeyondTruncation {
            index: n,
            order: self.order(),
        })
    }

    pub fn coeffs(&self) -> &[CatalyticPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CatalyticPoly::is_zero)
    }

    /// Coefficients of an arity-0 series as plain rationals.
    pub fn to_rationals(&self) -> Result<Vec<Rational>> {
        if self.arity != 0 {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: 0,
            });
        }
        Ok(self.coeffs.iter().map(CatalyticPoly::constant_term).collect())
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::BeyondTruncation {
                index: order,
                order: self.order(),
            });
        }
        Ok(TruncatedSeries {
            arity: self.arity,
            coeffs: self.coeffs[..=order].to_vec(),
            exact: self.exact,
        })
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

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&CatalyticPoly, &CatalyticPoly) -> Result<CatalyticPoly>,
    ) -> Result<Self> {
        self.check_arity(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| f(&self.coeffs[n], &other.coeffs[n]))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries {
            arity: self.arity,
            coeffs,
            exact: self.exact && other.exact,
        })
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let order = self.order().min(other.order());
        let mut coeffs = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = CatalyticPoly::zero(self.arity);
            for i in 0..=n {
                let (a, b) = (&self.coeffs[i], &other.coeffs[n - i]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b)?)?;
            }
            coeffs.push(acc);
        }
        Ok(TruncatedSeries {
            arity: self.arity,
            coeffs,
            exact: self.exact && other.exact,
        })
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        let mut acc = Self::one(self.arity, self.order()).with_exactness(self.exact);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, by: &Rational) -> Self {
        TruncatedSeries {
            arity: self.arity,
            coeffs: self.coeffs.iter().map(|c| c.scale(by)).collect(),
            exact: self.exact,
        }
    }

    /// Multiplies every coefficient by a polynomial in the catalytic variables.
    pub fn mul_poly(&self, p: &CatalyticPoly) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.mul(p)).collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries {
            arity: self.arity,
            coeffs,
            exact: self.exact,
        })
    }

    /// `t^k * self`; the product is known to order `N + k`.
    pub fn shift_t(&self, k: usize) -> Self {
        let mut coeffs = vec![CatalyticPoly::zero(self.arity); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries {
            arity: self.arity,
            coeffs,
            exact: self.exact,
        }
    }

    /// d/dt; the derivative of an order-N truncation is known to order N-1.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::BeyondTruncation { index: 0, order: 0 });
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&Rational::from_integer(BigInt::from(k))))
            .collect();
        Ok(TruncatedSeries {
            arity: self.arity,
            coeffs,
            exact: self.exact,
        })
    }

    /// Coefficient of `var^k` in every `t`-coefficient.
    pub fn coeff_slice(&self, var: Catalytic, k: i64) -> Result<Self> {
        if k < 0 {
            return Err(Error::OutOfRange(format!("negative slice exponent {k}")));
        }
        if var.index() >= self.arity {
            return Err(Error::MissingVariable(var.index()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.slice(var, k as u32))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries {
            arity: self.arity - 1,
            coeffs,
            exact: self.exact,
        })
    }

    /// Evaluates a catalytic variable at a rational point.
    pub fn substitute(&self, var: Catalytic, value: &Rational) -> Result<Self> {
        if var.index() >= self.arity {
            return Err(Error::MissingVariable(var.index()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.substitute(var, value))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries {
            arity: self.arity - 1,
            coeffs,
            exact: self.exact,
        })
    }

    /// Geometric series `1 + t + ... + t^N` (arity 0); used in tests and as a
    /// convenient fixture.
    pub fn geometric(order: usize) -> Self {
        let one = CatalyticPoly::one(0);
        TruncatedSeries {
            arity: 0,
            coeffs: vec![one; order + 1],
            exact: true,
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let simple = c.len() == 1 && c.constant_term().is_one() && n > 0;
            if !simple {
                write!(f, "({c})")?;
            }
            match n {
                0 => {}
                1 if simple => f.write_str("t")?,
                1 => f.write_str("*t")?,
                _ if simple => write!(f, "t^{n}")?,
                _ => write!(f, "*t^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn catalan_prefix_squared() {
        let h = TruncatedSeries::from_integers(&[1, 1, 2, 5]).unwrap();
        let sq = h.mul(&h).unwrap();
        assert_eq!(sq, TruncatedSeries::from_integers(&[1, 2, 5, 14]).unwrap());
    }

    #[test]
    fn one_is_identity() {
        let s = TruncatedSeries::from_integers(&[3, 0, -2, 7]).unwrap();
        assert_eq!(TruncatedSeries::one(0, 3).mul(&s).unwrap(), s);
    }

    #[test]
    fn geometric_identity() {
        let n = 9;
        let g = TruncatedSeries::geometric(n);
        let mut v = vec![0i64; n + 1];
        v[0] = 1;
        v[1] = -1;
        let one_minus_t = TruncatedSeries::from_integers(&v).unwrap();
        assert_eq!(one_minus_t.mul(&g).unwrap(), TruncatedSeries::one(0, n));
    }

    #[test]
    fn product_order_is_minimum() {
        let a = TruncatedSeries::geometric(3);
        let b = TruncatedSeries::geometric(7);
        assert_eq!(a.mul(&b).unwrap().order(), 3);
        assert!(a.mul(&b).unwrap().coeff(4).is_err());
    }

    #[test]
    fn exactness_propagates() {
        let a = TruncatedSeries::geometric(3).with_exactness(false);
        let b = TruncatedSeries::geometric(3);
        assert!(!a.mul(&b).unwrap().is_exact());
        assert!(b.add(&b).unwrap().is_exact());
    }

    #[test]
    fn slice_of_zero_series() {
        let z = TruncatedSeries::zero(1, 5);
        let s = z.coeff_slice(Catalytic::X, 2).unwrap();
        assert_eq!(s, TruncatedSeries::zero(0, 5));
        assert!(z.coeff_slice(Catalytic::X, -1).is_err());
    }

    #[test]
    fn substitute_constant_series() {
        let c = TruncatedSeries::new(1, vec![CatalyticPoly::constant(1, rat(4)); 3]).unwrap();
        let s = c.substitute(Catalytic::X, &rat(7)).unwrap();
        assert_eq!(s.to_rationals().unwrap(), vec![rat(4); 3]);
    }

    #[test]
    fn derivative_loses_one_order() {
        let s = TruncatedSeries::from_integers(&[1, 1, 1, 1]).unwrap();
        let d = s.derivative().unwrap();
        assert_eq!(d.to_rationals().unwrap(), vec![rat(1), rat(2), rat(3)]);
    }
}
