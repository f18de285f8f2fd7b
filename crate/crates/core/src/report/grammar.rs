//! Text form of relations.
//!
//! ```text
//! (n+2)*a(n+1) + (-4*n-2)*a(n) = 0
//! (t)*C^2 + (-1)*C + (1) = 0
//! (t-1)*D[C] + (1)*C = 0
//! a(n) = 1/2*n^2+1/2*n
//! ```
//!
//! Printing is canonical: descending shift, power or derivative order, zero
//! coefficients omitted, `" + "` between terms. The parser is more lenient
//! (signs, products, unparenthesised polynomials, negative shifts, like
//! terms) and canonicalizes what it reads.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::rational::Rational;
use crate::arith::unipoly::{UniPoly, Var};
use crate::error::{Error, Result};
use crate::guess::{AlgebraicRelation, DifferentialRelation, PolynomialFormula, Recurrence, Relation};

pub fn format_relation(rel: &Relation) -> String {
    match rel {
        Relation::Polynomial(p) => format!("a(n) = {}", p.poly),
        Relation::Recurrence(r) => join(r.coeffs(), |k| match k {
            0 => "a(n)".to_string(),
            _ => format!("a(n+{k})"),
        }),
        Relation::Algebraic(a) => join(a.coeffs(), |k| match k {
            0 => String::new(),
            1 => "C".to_string(),
            _ => format!("C^{k}"),
        }),
        Relation::Differential(d) => join(d.coeffs(), |k| match k {
            0 => "C".to_string(),
            1 => "D[C]".to_string(),
            _ => format!("D^{k}[C]"),
        }),
    }
}

fn join(coeffs: &[UniPoly], marker: impl Fn(usize) -> String) -> String {
    let parts: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, p)| {
            let m = marker(k);
            if m.is_empty() {
                format!("({p})")
            } else {
                format!("({p})*{m}")
            }
        })
        .collect();
    format!("{} = 0", parts.join(" + "))
}

/// Parses a relation from a document: blank lines and lines starting with
/// `#` are skipped, the first remaining line is the relation and nothing may
/// follow it.
pub fn parse_relation_document(text: &str) -> Result<Relation> {
    let mut found: Option<(usize, &str)> = None;
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if found.is_some() {
            return Err(Error::parse(i + 1, 1, "only one relation per document"));
        }
        found = Some((i + 1, line));
    }
    let (line, body) = found.ok_or_else(|| Error::parse(1, 1, "no relation found"))?;
    parse_at(body, line)
}

pub fn parse_relation(text: &str) -> Result<Relation> {
    parse_at(text, 1)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(char),
    Sym(char),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Marker {
    Power(u32),
    Deriv(u32),
    Shift(i64),
}

/// Sum of polynomial multiples of markers; `None` is the marker-free part.
type Value = BTreeMap<Option<Marker>, UniPoly>;

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    src: &'a str,
    var: Option<(char, usize)>,
}

fn lex(s: &str, line: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Num(digits.parse().expect("digits")), col));
        } else if matches!(c, 'n' | 't' | 'a' | 'C' | 'D') {
            out.push((Tok::Ident(c), col));
            i += 1;
        } else if "()[]^*/+-=".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else if c == '.' {
            return Err(Error::parse(line, col, "decimal numbers are not exact; write p/q"));
        } else {
            return Err(Error::parse(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn poly(c: Rational) -> UniPoly {
    UniPoly::constant(Var::N, c)
}

fn add_into(acc: &mut Value, other: Value, sign: i64) {
    for (k, p) in other {
        let p = if sign < 0 { -&p } else { p };
        let e = acc.entry(k).or_insert_with(|| UniPoly::zero(Var::N));
        *e = &*e + &p;
    }
}

impl<'a> Parser<'a> {
    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.src.chars().count() + 1, |t| t.1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col(), msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected a number")),
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        if !self.eat('^') {
            return Ok(1);
        }
        let n = self.number()?;
        u32::try_from(&n).map_err(|_| self.err("exponent too large"))
    }

    fn see_var(&mut self, v: char) -> Result<()> {
        match self.var {
            Some((w, _)) if w != v => Err(self.err(format!("mixes variables `{w}` and `{v}`"))),
            _ => {
                self.var.get_or_insert((v, self.col()));
                Ok(())
            }
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = Value::new();
        let mut sign = 1;
        if self.eat('-') {
            sign = -1;
        } else {
            self.eat('+');
        }
        loop {
            let t = self.term()?;
            add_into(&mut acc, t, sign);
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        loop {
            let start = self.col();
            if self.eat('*') {
                let f = self.factor()?;
                acc = multiply(&acc, &f).map_err(|m| Error::parse(self.line, start, m))?;
            } else if self.eat('/') {
                let d = self.number()?;
                if d.is_zero() {
                    return Err(Error::parse(self.line, start, "division by zero"));
                }
                let inv = poly(Rational::new(BigInt::one(), d));
                acc = multiply(&acc, &Value::from([(None, inv)])).expect("scalar");
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Value> {
        let single = |m: Option<Marker>, p: UniPoly| Value::from([(m, p)]);
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(single(None, poly(Rational::from_integer(n))))
            }
            Some(Tok::Ident(v @ ('n' | 't'))) => {
                self.see_var(v)?;
                self.pos += 1;
                let k = self.exponent()? as usize;
                let mut c = vec![Rational::zero(); k + 1];
                c[k] = Rational::one();
                Ok(single(None, UniPoly::new(Var::N, c)))
            }
            Some(Tok::Ident('C')) => {
                self.pos += 1;
                let k = self.exponent()?;
                Ok(single(Some(Marker::Power(k)), poly(Rational::one())))
            }
            Some(Tok::Ident('D')) => {
                self.pos += 1;
                let k = self.exponent()?;
                self.expect('[')?;
                if self.peek() != Some(&Tok::Ident('C')) {
                    return Err(self.err("expected `C` inside `D[...]`"));
                }
                self.pos += 1;
                self.expect(']')?;
                Ok(single(Some(Marker::Deriv(k)), poly(Rational::one())))
            }
            Some(Tok::Ident('a')) => {
                self.pos += 1;
                self.expect('(')?;
                if self.peek() != Some(&Tok::Ident('n')) {
                    return Err(self.err("expected `n` in `a(...)`"));
                }
                self.see_var('n')?;
                self.pos += 1;
                let shift = if self.eat('+') {
                    i64::try_from(&self.number()?).map_err(|_| self.err("shift too large"))?
                } else if self.eat('-') {
                    -i64::try_from(&self.number()?).map_err(|_| self.err("shift too large"))?
                } else {
                    0
                };
                self.expect(')')?;
                Ok(single(Some(Marker::Shift(shift)), poly(Rational::one())))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            _ => Err(self.err("expected a number, variable, `(` or unknown")),
        }
    }
}

fn multiply(a: &Value, b: &Value) -> std::result::Result<Value, String> {
    let mut out = Value::new();
    for (ka, pa) in a {
        for (kb, pb) in b {
            let key = match (ka, kb) {
                (None, k) | (k, None) => *k,
                (Some(Marker::Power(i)), Some(Marker::Power(j))) => Some(Marker::Power(i + j)),
                _ => return Err("product of two unknowns is not linear".into()),
            };
            add_into(&mut out, Value::from([(key, pa * pb)]), 1);
        }
    }
    Ok(out)
}

fn parse_at(text: &str, line: usize) -> Result<Relation> {
    let mut p = Parser {
        toks: lex(text, line)?,
        pos: 0,
        line,
        src: text,
        var: None,
    };
    let lhs = p.expr()?;
    let eq_col = p.col();
    p.expect('=')?;
    let rhs = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected input after the relation"));
    }
    let var = p.var.map(|v| v.0);

    let is_plain_a = lhs.len() == 1 && lhs.get(&Some(Marker::Shift(0))).is_some_and(|q| q.is_one_poly());
    if is_plain_a && rhs.keys().all(Option::is_none) && var != Some('t') {
        let q = rhs.get(&None).cloned().unwrap_or_else(|| UniPoly::zero(Var::N));
        return Ok(Relation::Polynomial(PolynomialFormula::new(q)));
    }

    let mut all = lhs;
    add_into(&mut all, rhs, -1);
    all.retain(|_, q| !q.is_zero());
    let bad = |m: &str| Error::parse(line, eq_col, m.to_string());
    if all.is_empty() {
        return Err(bad("the relation is trivial"));
    }
    let has = |f: fn(&Marker) -> bool| all.keys().flatten().any(f);
    let shifts = has(|m| matches!(m, Marker::Shift(_)));
    let derivs = has(|m| matches!(m, Marker::Deriv(_)));
    let high_powers = has(|m| matches!(m, Marker::Power(k) if *k >= 2));
    let powers = has(|m| matches!(m, Marker::Power(_)));
    let free = all.contains_key(&None);

    if shifts {
        if powers || derivs {
            return Err(bad("mixes a(n+k) with C or D[C]"));
        }
        if free {
            return Err(bad("a recurrence must be homogeneous"));
        }
        if var == Some('t') {
            return Err(bad("recurrence coefficients are polynomials in n"));
        }
        let min = all.keys().flatten().map(shift_of).min().unwrap_or(0).min(0);
        let max = all.keys().flatten().map(shift_of).max().unwrap_or(0).max(0);
        let mut coeffs = vec![UniPoly::zero(Var::N); (max - min) as usize + 1];
        for (k, q) in &all {
            let s = shift_of(&k.expect("shift marker"));
            coeffs[(s - min) as usize] = UniPoly::new(Var::N, q.coeffs().to_vec()).shift_arg(-min);
        }
        // a(n+s) with s < 0 is rewritten in terms of n' = n + min.
        return Recurrence::new(&coeffs).map(Relation::Recurrence).map_err(|e| bad(&e.to_string()));
    }
    if var == Some('n') {
        return Err(bad("series relations use polynomials in t"));
    }
    let as_t = |q: &UniPoly| UniPoly::new(Var::T, q.coeffs().to_vec());
    if derivs {
        if high_powers {
            return Err(bad("a differential relation must be linear in C"));
        }
        if free {
            return Err(bad("a differential relation must be homogeneous"));
        }
        let order_of = |m: &Marker| match m {
            Marker::Deriv(k) => *k as usize,
            _ => 0,
        };
        let order = all.keys().flatten().map(order_of).max().unwrap_or(0);
        let mut coeffs = vec![UniPoly::zero(Var::T); order + 1];
        for (k, q) in &all {
            let i = order_of(&k.expect("marker"));
            coeffs[i] = &coeffs[i] + &as_t(q);
        }
        return DifferentialRelation::new(&coeffs)
            .map(Relation::Differential)
            .map_err(|e| bad(&e.to_string()));
    }
    if !powers {
        return Err(bad("no unknown: expected C, D[C] or a(n+k)"));
    }
    let degree = all
        .keys()
        .flatten()
        .map(|m| match m {
            Marker::Power(k) => *k as usize,
            _ => 0,
        })
        .max()
        .unwrap_or(0);
    if degree == 0 {
        return Err(bad("an algebraic relation must involve C"));
    }
    let mut coeffs = vec![UniPoly::zero(Var::T); degree + 1];
    for (k, q) in &all {
        let i = match k {
            Some(Marker::Power(k)) => *k as usize,
            _ => 0,
        };
        coeffs[i] = &coeffs[i] + &as_t(q);
    }
    AlgebraicRelation::new(&coeffs)
        .map(Relation::Algebraic)
        .map_err(|e| bad(&e.to_string()))
}

fn shift_of(m: &Marker) -> i64 {
    match m {
        Marker::Shift(s) => *s,
        _ => 0,
    }
}

trait OnePoly {
    fn is_one_poly(&self) -> bool;
}

impl OnePoly for UniPoly {
    fn is_one_poly(&self) -> bool {
        self.coeffs().len() == 1 && self.coeffs()[0].is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> String {
        format_relation(&parse_relation(s).unwrap())
    }

    #[test]
    fn canonical_strings_round_trip() {
        for s in [
            "(n+2)*a(n+1) + (-4*n-2)*a(n) = 0",
            "(t)*C^2 + (-1)*C + (1) = 0",
            "(t-1)*C + (1) = 0",
            "(t-1)*D[C] + (1)*C = 0",
            "(1)*D^2[C] + (-1)*C = 0",
            "(1)*a(n+2) + (-1)*a(n) = 0",
            "a(n) = 1/2*n^2+1/2*n",
        ] {
            assert_eq!(rt(s), s);
        }
    }

    #[test]
    fn lenient_forms() {
        assert_eq!(rt("t*C^2 - C + 1 = 0"), "(t)*C^2 + (-1)*C + (1) = 0");
        assert_eq!(rt("(1)*C^2*t + (-1)*C + (1) = 0"), "(t)*C^2 + (-1)*C + (1) = 0");
        assert_eq!(rt("C*C*t = C - 1"), "(t)*C^2 + (-1)*C + (1) = 0");
        assert_eq!(rt("(2*n+4)*a(n+1) = (8*n+4)*a(n)"), "(n+2)*a(n+1) + (-4*n-2)*a(n) = 0");
        assert_eq!(rt("(n+1)*a(n) - (4*n-2)*a(n-1) = 0"), "(n+2)*a(n+1) + (-4*n-2)*a(n) = 0");
        assert_eq!(rt("a(n) = n*(n+1)/2"), "a(n) = 1/2*n^2+1/2*n");
    }

    #[test]
    fn trivial_and_malformed() {
        let e = parse_relation("C - C = 0").unwrap_err();
        assert!(e.to_string().contains("trivial"), "{e}");
        assert!(parse_relation("a(n+1) - a(n) = 1").is_err());
        assert!(parse_relation("n*C = 0").is_err());
        assert!(parse_relation("C*D[C] = 0").is_err());
        match parse_relation("(t)*C^2 + (-1)*C + 0.5 = 0").unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (1, 21)),
            e => panic!("{e}"),
        }
        match parse_relation_document("# header\n\n(n+2)*a(n+1) + * = 0").unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (3, 16)),
            e => panic!("{e}"),
        }
    }
}
