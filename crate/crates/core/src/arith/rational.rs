//! Exact rationals and their canonical text form.
//!
//! `num_rational::BigRational` already keeps values reduced with a positive
//! denominator, so it is used directly as the coefficient field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_int(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Canonical string: `n` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n`, `-n`, `p/q`. Whitespace around the value is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |msg: &str| Error::parse(1, 1, format!("{msg}: `{s}`"));
    if s.is_empty() {
        return Err(bad("empty rational"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("malformed numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("malformed denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Scales a rational vector to coprime integers whose first nonzero entry is
/// positive. The zero vector maps to itself.
pub fn canonical_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let l = lcm_of_denominators(v);
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|r| r.numer() * (&l / r.denom()))
        .collect();
    canonicalize_integers(&mut ints);
    ints
}

/// Divides by content and fixes the sign so the first nonzero entry is positive.
pub fn canonicalize_integers(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return;
    }
    let negate = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if negate {
            *x = -&*x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&rat(0)), "0");
        assert_eq!(parse_rational(" -3/2 ").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("10/5").unwrap(), rat(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn canonical_vectors() {
        let v = vec![ratio(-1, 2), ratio(1, 3), rat(0)];
        let c = canonical_integer_vector(&v);
        assert_eq!(c, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
        let mut again = c.clone();
        canonicalize_integers(&mut again);
        assert_eq!(again, c);
        assert!(canonical_integer_vector(&[rat(0), rat(0)]).iter().all(Zero::is_zero));
    }
}
