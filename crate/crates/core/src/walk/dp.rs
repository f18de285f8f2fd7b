//! Direct forward dynamic programming over walk states: the reference
//! semantics every other counting route is checked against.

use std::collections::HashMap;
use std::ops::AddAssign;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::stepset::{CountMode, StepSet};
use crate::arith::rational::{from_int, Rational};
use crate::error::{Error, Result};

/// Default cap on simultaneously live positions.
pub const DEFAULT_MAX_STATES: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub steps: StepSet,
    pub mode: CountMode,
    pub order: usize,
    pub values: Vec<Rational>,
}

impl CountTable {
    pub fn value(&self, n: usize) -> Result<&Rational> {
        self.values.get(n).ok_or(Error::BeyondTruncation {
            index: n,
            order: self.order,
        })
    }
}

type Pos = [i64; 3];

/// Counts (or weighs) `n`-step walks from the origin that never leave the
/// non-negative orthant, for `n = 0..=order`.
pub fn enumerate_dp(steps: &StepSet, mode: &CountMode, order: usize) -> Result<CountTable> {
    enumerate_dp_capped(steps, mode, order, DEFAULT_MAX_STATES)
}

pub fn enumerate_dp_capped(
    steps: &StepSet,
    mode: &CountMode,
    order: usize,
    max_states: usize,
) -> Result<CountTable> {
    mode.validate(steps.dim())?;
    let values = match steps.weights() {
        None => {
            let unit = vec![BigInt::one(); steps.len()];
            run(steps, &unit, mode, order, max_states)?
                .into_iter()
                .map(from_int)
                .collect()
        }
        Some(w) => run(steps, w, mode, order, max_states)?,
    };
    Ok(CountTable {
        steps: steps.clone(),
        mode: mode.clone(),
        order,
        values,
    })
}

fn run<T>(steps: &StepSet, weights: &[T], mode: &CountMode, order: usize, max_states: usize) -> Result<Vec<T>>
where
    T: Clone + Zero + One + PartialEq + for<'a> AddAssign<&'a T>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    let dim = steps.dim();
    let moves: Vec<(Pos, &T)> = steps
        .steps()
        .iter()
        .zip(weights)
        .map(|(s, w)| {
            let mut p = [0i64; 3];
            p[..dim].copy_from_slice(s);
            (p, w)
        })
        .collect();
    let target: Option<Pos> = match mode {
        CountMode::ReturnToOrigin => Some([0; 3]),
        CountMode::AnyEndpoint => None,
        CountMode::EndpointSlice(t) => {
            let mut p = [0i64; 3];
            p[..dim].copy_from_slice(t);
            Some(p)
        }
    };

    let mut live: HashMap<Pos, T> = HashMap::new();
    live.insert([0; 3], T::one());
    let mut out = Vec::with_capacity(order + 1);
    for n in 0..=order {
        out.push(match target {
            Some(p) => live.get(&p).cloned().unwrap_or_else(T::zero),
            None => live.values().fold(T::zero(), |mut acc, v| {
                acc += v;
                acc
            }),
        });
        if n == order {
            break;
        }
        let mut next: HashMap<Pos, T> = HashMap::with_capacity(live.len() * 2);
        for (pos, count) in &live {
            for (step, w) in &moves {
                let q = [pos[0] + step[0], pos[1] + step[1], pos[2] + step[2]];
                if q.iter().any(|c| c.is_negative()) {
                    continue;
                }
                let contribution = if w.is_one() { count.clone() } else { count * *w };
                next.entry(q).or_insert_with(T::zero).add_assign(&contribution);
            }
        }
        if next.len() > max_states {
            return Err(Error::ResourceExceeded(format!(
                "{} live positions after {} steps exceeds the cap of {max_states}",
                next.len(),
                n + 1
            )));
        }
        live = next;
    }
    Ok(out)
}

/// Survival probabilities: the step weights are read as the probabilities of
/// a (possibly loaded) die.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityTable {
    pub table: CountTable,
    /// Set when the supplied weights did not sum to 1 (or were absent) and
    /// had to be normalised.
    pub normalized: bool,
}

pub fn probability_table(steps: &StepSet, mode: &CountMode, order: usize) -> Result<ProbabilityTable> {
    let raw: Vec<Rational> = (0..steps.len()).map(|i| steps.weight(i)).collect();
    if raw.iter().any(|w| !w.is_positive()) {
        return Err(Error::InvalidStepSet("probabilities must be positive".into()));
    }
    let total: Rational = raw.iter().sum();
    let normalized = !steps.is_weighted() || !total.is_one();
    let probs: Vec<Rational> = raw.iter().map(|w| w / &total).collect();
    let weighted = StepSet::new(steps.dim(), steps.steps().to_vec(), Some(probs))?;
    let table = enumerate_dp(&weighted, mode, order)?;
    Ok(ProbabilityTable { table, normalized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{rat, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn dyck_returns() {
        let s = StepSet::one_dim(&[-1, 1]).unwrap();
        let t = enumerate_dp(&s, &CountMode::ReturnToOrigin, 6).unwrap();
        assert_eq!(t.values, ints(&[1, 0, 1, 0, 2, 0, 5]));
    }

    #[test]
    fn empty_walk_only_at_order_zero() {
        for s in [
            StepSet::one_dim(&[-1, -2, 3]).unwrap(),
            StepSet::two_dim(&[(1, 1), (-1, 0)]).unwrap(),
        ] {
            let t = enumerate_dp(&s, &CountMode::AnyEndpoint, 0).unwrap();
            assert_eq!(t.values, ints(&[1]));
        }
    }

    #[test]
    fn dyck_prefixes_any_endpoint() {
        let s = StepSet::one_dim(&[-1, 1]).unwrap();
        let t = enumerate_dp(&s, &CountMode::AnyEndpoint, 6).unwrap();
        assert_eq!(t.values, ints(&[1, 1, 2, 3, 6, 10, 20]));
    }

    #[test]
    fn state_cap() {
        let s = StepSet::two_dim(&[(1, 0), (0, 1)]).unwrap();
        let err = enumerate_dp_capped(&s, &CountMode::AnyEndpoint, 50, 10).unwrap_err();
        assert!(matches!(err, Error::ResourceExceeded(_)));
    }

    #[test]
    fn loaded_coin() {
        let s = StepSet::one_dim(&[-1, 1])
            .unwrap()
            .with_weights(vec![ratio(1, 3), ratio(2, 3)])
            .unwrap();
        let p = probability_table(&s, &CountMode::ReturnToOrigin, 2).unwrap();
        assert!(!p.normalized);
        assert_eq!(p.table.values[2], ratio(2, 9));
        assert_eq!(p.table.values[0], rat(1));
    }

    #[test]
    fn fair_coin_break_even() {
        let s = StepSet::one_dim(&[-1, 1]).unwrap();
        let p = probability_table(&s, &CountMode::ReturnToOrigin, 6).unwrap();
        assert!(p.normalized);
        assert_eq!(p.table.values[6], ratio(5, 64));
        assert_eq!(&p.table.values[6] / ratio(20, 64), ratio(1, 4));
    }
}
