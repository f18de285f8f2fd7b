//! Linear algebra over word-size prime fields, Chinese remaindering and
//! rational reconstruction.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::rational::canonicalize_integers;
use crate::error::{Error, Result};

/// Primes below 2^31 in decreasing order, starting at the largest.
pub fn word_primes(count: usize) -> Vec<u64> {
    descending_primes().take(count).collect()
}

fn descending_primes() -> impl Iterator<Item = u64> {
    (2..1u64 << 30).rev().map(|k| 2 * k + 1).filter(|&c| is_prime(c))
}

/// Deterministic Miller-Rabin for `n < 2^32` (bases 2, 7, 61).
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2, 3, 5, 7, 61] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    [2u64, 7, 61].iter().all(|&a| {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                return true;
            }
        }
        false
    })
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

pub fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = (x % p).to_u64_digits();
    let r = match r.1.first() {
        Some(&v) => v,
        None => 0,
    };
    if x.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

/// Barrett reduction for a fixed modulus below 2^31.
#[derive(Debug, Clone, Copy)]
struct Barrett {
    p: u64,
    m: u64,
}

impl Barrett {
    fn new(p: u64) -> Self {
        Barrett {
            p,
            m: u64::MAX / p,
        }
    }

    #[inline]
    fn reduce(self, x: u64) -> u64 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

/// Dense matrix over `Z/pZ`, row-major.
#[derive(Debug, Clone)]
pub struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    pub p: u64,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        ModMatrix {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>], cols: usize, p: u64) -> Self {
        let mut m = Self::zeros(rows.len(), cols, p);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m.data[i * cols + j] = reduce(x, p);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    /// Gauss-Jordan elimination in place; returns the pivot columns. With
    /// `reduced == false` only rows below each pivot are cleared, which is
    /// enough to read off ranks of column prefixes.
    pub fn eliminate(&mut self, reduced: bool) -> Vec<usize> {
        let (rows, cols, p) = (self.rows, self.cols, self.p);
        let br = Barrett::new(p);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(self.data[r * cols + c], p);
            for j in c..cols {
                let v = &mut self.data[r * cols + j];
                *v = *v * inv % p;
            }
            let (head, tail) = self.data.split_at_mut(r * cols);
            let (pivot_row, below) = tail.split_at_mut(cols);
            let pivot_row = &pivot_row[c..];
            let clear = |row: &mut [u64]| {
                let f = row[c];
                if f == 0 {
                    return;
                }
                let nf = p - f;
                for (x, &y) in row[c..].iter_mut().zip(pivot_row) {
                    *x = br.reduce(*x + nf * y);
                }
            };
            if below.len() / cols.max(1) > 32 {
                below.par_chunks_mut(cols).for_each(clear);
            } else {
                below.chunks_mut(cols).for_each(clear);
            }
            if reduced {
                if r > 32 {
                    head.par_chunks_mut(cols).for_each(clear);
                } else {
                    head.chunks_mut(cols).for_each(clear);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Kernel basis read from a reduced echelon form: one vector per free
    /// column, with a 1 in that column.
    pub fn kernel_from_rref(&self, pivots: &[usize]) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    let a = self.get(i, f);
                    v[pc] = (p - a) % p;
                }
                v
            })
            .collect()
    }
}

/// Combines `x mod m` with `r mod p` (coprime moduli).
pub fn crt_step(x: &BigInt, m: &BigInt, r: u64, p: u64) -> BigInt {
    let xm = reduce(x, p);
    let mm = reduce(m, p);
    let diff = (r + p - xm) % p;
    let k = diff * inv_mod(mm, p) % p;
    x + m * BigInt::from(k)
}

/// Finds `a/b` with `|a|, |b| <= sqrt(m/2)` and `a = b*u (mod m)`.
pub fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let u = u.mod_floor(m);
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), u);
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
    }
    let (mut a, mut b) = (r1, s1);
    if b.is_negative() {
        a = -a;
        b = -b;
    }
    if b.is_zero() || b > bound || !a.gcd(&b).is_one() {
        return None;
    }
    Some((a, b))
}

fn pivot_key_better(a: &[usize], b: &[usize]) -> bool {
    // More pivots wins; otherwise the lexicographically smaller pivot list.
    a.len() > b.len() || (a.len() == b.len() && a < b)
}

/// Exact right kernel of an integer matrix via multi-modular reduced echelon
/// forms. Every returned vector is verified against the integer rows.
pub fn modular_nullspace(rows: &[Vec<BigInt>], cols: usize, max_primes: usize) -> Result<Vec<Vec<BigInt>>> {
    modular_kernel(
        cols,
        max_primes,
        |p| Some(ModMatrix::from_int_rows(rows, cols, p)),
        |v| annihilates(rows, v),
    )
}

/// Multi-modular kernel from per-prime images. `image` returns `None` for
/// primes where the matrix has no reduction; `accept` is the exact check
/// every reconstructed vector must pass.
pub fn modular_kernel<I, A>(cols: usize, max_primes: usize, image: I, accept: A) -> Result<Vec<Vec<BigInt>>>
where
    I: Fn(u64) -> Option<ModMatrix> + Sync,
    A: Fn(&[BigInt]) -> bool,
{
    let batch = rayon::current_num_threads().clamp(2, 8);
    let mut primes = descending_primes().take(max_primes).peekable();
    let mut best_pivots: Option<Vec<usize>> = None;
    let mut acc: Vec<Vec<BigInt>> = Vec::new();
    let mut modulus = BigInt::one();

    while primes.peek().is_some() {
        let chunk: Vec<u64> = primes.by_ref().take(batch).collect();
        let images: Vec<(u64, Vec<usize>, Vec<Vec<u64>>)> = chunk
            .par_iter()
            .filter_map(|&p| {
                let mut m = image(p)?;
                let piv = m.eliminate(true);
                let ker = m.kernel_from_rref(&piv);
                Some((p, piv, ker))
            })
            .collect();
        let mut fresh = false;
        for (p, piv, ker) in images {
            let replace = match &best_pivots {
                None => true,
                Some(b) => pivot_key_better(&piv, b),
            };
            if replace {
                if piv.len() == cols {
                    return Ok(Vec::new());
                }
                best_pivots = Some(piv);
                acc = ker.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
                modulus = BigInt::from(p);
                fresh = true;
                continue;
            }
            if Some(&piv) != best_pivots.as_ref() {
                continue;
            }
            for (a, k) in acc.iter_mut().zip(&ker) {
                for (x, &r) in a.iter_mut().zip(k) {
                    *x = crt_step(x, &modulus, r, p);
                }
            }
            modulus *= p;
        }
        if fresh || !probe_reconstructs(&acc, &modulus) {
            continue;
        }
        if let Some(candidate) = try_reconstruct(&acc, &modulus) {
            if candidate.iter().all(|v| accept(v)) {
                return Ok(candidate);
            }
        }
    }
    Err(Error::ResourceExceeded(format!(
        "modular nullspace did not stabilise within {max_primes} primes"
    )))
}

/// Cheap early test: the entry with the largest residue of each vector
/// must reconstruct before the whole basis is attempted.
fn probe_reconstructs(acc: &[Vec<BigInt>], modulus: &BigInt) -> bool {
    acc.iter().all(|v| {
        v.iter()
            .max_by_key(|x| x.bits())
            .is_none_or(|x| rational_reconstruct(x, modulus).is_some())
    })
}

fn try_reconstruct(acc: &[Vec<BigInt>], modulus: &BigInt) -> Option<Vec<Vec<BigInt>>> {
    let mut out = Vec::with_capacity(acc.len());
    for v in acc {
        let mut nums = Vec::with_capacity(v.len());
        let mut dens = Vec::with_capacity(v.len());
        for x in v {
            let (a, b) = rational_reconstruct(x, modulus)?;
            nums.push(a);
            dens.push(b);
        }
        let l = dens.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
        let mut ints: Vec<BigInt> = nums.iter().zip(&dens).map(|(a, b)| a * (&l / b)).collect();
        canonicalize_integers(&mut ints);
        out.push(ints);
    }
    Some(out)
}

pub fn annihilates(rows: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    rows.par_iter().all(|row| {
        row.iter()
            .zip(v)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum::<BigInt>()
            .is_zero()
    })
}
