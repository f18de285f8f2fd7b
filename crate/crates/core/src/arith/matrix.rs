use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::modular::modular_nullspace;
use super::rational::{canonicalize_integers, lcm_of_denominators, Rational};
use crate::error::{Error, Result};

/// How [`ExactMatrix::nullspace_with`] computes the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveStrategy {
    /// Fraction-free elimination for small systems, multi-modular otherwise.
    #[default]
    Auto,
    FractionFree,
    Modular,
}

/// Column count above which `Auto` always goes modular.
pub const MODULAR_COLUMN_THRESHOLD: usize = 500;
/// `Auto` also goes modular once `cols * max entry bits` passes this; the
/// fraction-free intermediate entries grow like minors of that size.
pub const MODULAR_BIT_THRESHOLD: u64 = 20_000;
pub(crate) const MAX_PRIMES: usize = 4000;

/// Dense rectangular matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::OutOfRange("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::OutOfRange(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::OutOfRange("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Rational::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Rational::one();
        }
        ExactMatrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn append_row(&self, row: &[Rational]) -> Result<Self> {
        if row.len() != self.cols {
            return Err(Error::OutOfRange("row length differs from column count".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(row);
        Ok(ExactMatrix {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        })
    }

    /// `self * v` for an integer vector.
    pub fn apply(&self, v: &[BigInt]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * Rational::from_integer(b.clone()))
                    .sum()
            })
            .collect()
    }

    /// Each row multiplied by the lcm of its denominators.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = lcm_of_denominators(row);
                row.iter().map(|r| r.numer() * (&l / r.denom())).collect()
            })
            .collect()
    }

    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        self.nullspace_with(SolveStrategy::Auto)
            .expect("kernel computation exceeded the prime budget")
    }

    /// Right kernel basis. Vectors are the reduced-echelon basis (one per
    /// free column, in column order), each scaled to coprime integers with
    /// its first nonzero entry positive.
    pub fn nullspace_with(&self, strategy: SolveStrategy) -> Result<Vec<Vec<BigInt>>> {
        let ints = self.integer_rows();
        if uses_modular(strategy, &ints, self.cols) {
            modular_nullspace(&ints, self.cols, MAX_PRIMES)
        } else {
            Ok(fraction_free_nullspace(ints, self.cols))
        }
    }
}

/// Whether `strategy` sends a system with these integer rows to the
/// multi-modular solver.
pub fn uses_modular(strategy: SolveStrategy, ints: &[Vec<BigInt>], cols: usize) -> bool {
    match strategy {
        SolveStrategy::FractionFree => false,
        SolveStrategy::Modular => true,
        SolveStrategy::Auto => {
            let bits = ints.iter().flatten().map(BigInt::bits).max().unwrap_or(0);
            cols > MODULAR_COLUMN_THRESHOLD || cols as u64 * bits > MODULAR_BIT_THRESHOLD
        }
    }
}

/// Fraction-free Gauss-Jordan elimination. After processing, every pivot
/// entry equals the last pivot `d` and the kernel vector for free column `f`
/// is `d` at `f` and `-A[i][f]` at the `i`-th pivot column.
pub fn fraction_free_nullspace(mut a: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let pivot_row = a[r].clone();
        let p = pivot_row[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            for j in 0..cols {
                if pivots.contains(&j) {
                    continue;
                }
                let v = &p * &row[j] - &f * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero(), "fraction-free division must be exact");
                row[j] = v / &prev;
            }
        }
        prev = p;
        pivots.push(c);
        r += 1;
    }
    let d = prev;
    (0..cols)
        .filter(|f| !pivots.contains(f))
        .map(|f| {
            let mut v = vec![BigInt::zero(); cols];
            v[f] = d.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[i][f];
            }
            canonicalize_integers(&mut v);
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        for s in [SolveStrategy::FractionFree, SolveStrategy::Modular] {
            assert!(ExactMatrix::identity(4).nullspace_with(s).unwrap().is_empty());
        }
    }

    #[test]
    fn one_by_two() {
        let m = ExactMatrix::from_int_rows(&[vec![2, -4]]).unwrap();
        assert_eq!(m.nullspace(), vec![ints(&[2, 1])]);
    }

    #[test]
    fn rank_deficient_square() {
        let m = ExactMatrix::from_int_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]).unwrap();
        let ff = m.nullspace_with(SolveStrategy::FractionFree).unwrap();
        let md = m.nullspace_with(SolveStrategy::Modular).unwrap();
        assert_eq!(ff, md);
        assert_eq!(ff, vec![ints(&[1, 1, -1])]);
    }

    #[test]
    fn zero_matrix_full_kernel() {
        let m = ExactMatrix::from_int_rows(&[vec![0, 0]]).unwrap();
        assert_eq!(m.nullspace(), vec![ints(&[1, 0]), ints(&[0, 1])]);
    }

    #[test]
    fn rejects_empty() {
        assert!(ExactMatrix::new(0, 3, vec![]).is_err());
    }
}
