use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// A finite set of integer step vectors, optionally weighted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepSet {
    dim: usize,
    steps: Vec<Vec<i64>>,
    weights: Option<Vec<Rational>>,
}

impl StepSet {
    pub fn new(dim: usize, steps: Vec<Vec<i64>>, weights: Option<Vec<Rational>>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidStepSet(format!("dimension {dim} is not in 1..=3")));
        }
        if steps.is_empty() {
            return Err(Error::InvalidStepSet("no steps".into()));
        }
        if let Some(s) = steps.iter().find(|s| s.len() != dim) {
            return Err(Error::InvalidStepSet(format!(
                "step {s:?} does not have {dim} coordinates"
            )));
        }
        let mut seen = HashSet::new();
        if let Some(s) = steps.iter().find(|s| !seen.insert(*s)) {
            return Err(Error::InvalidStepSet(format!("duplicate step {s:?}")));
        }
        if let Some(w) = &weights {
            if w.len() != steps.len() {
                return Err(Error::InvalidStepSet(format!(
                    "{} weights for {} steps",
                    w.len(),
                    steps.len()
                )));
            }
            if let Some(bad) = w.iter().find(|w| !w.is_positive()) {
                return Err(Error::InvalidStepSet(format!(
                    "weight {} is not positive",
                    format_rational(bad)
                )));
            }
        }
        Ok(StepSet { dim, steps, weights })
    }

    /// One-dimensional, unweighted.
    pub fn one_dim(steps: &[i64]) -> Result<Self> {
        Self::new(1, steps.iter().map(|&s| vec![s]).collect(), None)
    }

    /// Two-dimensional, unweighted.
    pub fn two_dim(steps: &[(i64, i64)]) -> Result<Self> {
        Self::new(2, steps.iter().map(|&(a, b)| vec![a, b]).collect(), None)
    }

    pub fn with_weights(self, weights: Vec<Rational>) -> Result<Self> {
        Self::new(self.dim, self.steps, Some(weights))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[Vec<i64>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Weight of step `i`; 1 when unweighted.
    pub fn weight(&self, i: usize) -> Rational {
        self.weights
            .as_ref()
            .map_or_else(Rational::one, |w| w[i].clone())
    }

    pub fn max_positive_entry(&self) -> i64 {
        self.steps.iter().flatten().copied().max().unwrap_or(0).max(0)
    }

    /// Canonical text document. `parse(render(s)) == s`.
    pub fn to_document(&self) -> String {
        let steps: Vec<String> = self
            .steps
            .iter()
            .map(|s| format!("[{}]", s.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        let mut out = format!("dim = {}\nsteps = [{}]\n", self.dim, steps.join(", "));
        if let Some(w) = &self.weights {
            let ws: Vec<String> = w.iter().map(|r| format!("\"{}\"", format_rational(r))).collect();
            out.push_str(&format!("weights = [{}]\n", ws.join(", ")));
        }
        out
    }

    /// Parses the TOML step-set document (`dim`, `steps`, optional `weights`).
    pub fn from_document(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            dim: usize,
            steps: Vec<Vec<i64>>,
            weights: Option<Vec<String>>,
        }
        let doc: Doc = toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|span| line_col(text, span.start))
                .unwrap_or((1, 1));
            Error::parse(line, column, e.message().to_string())
        })?;
        let weights = match doc.weights {
            None => None,
            Some(ws) => Some(
                ws.iter()
                    .map(|w| {
                        parse_rational(w).map_err(|_| {
                            let at = text.find(w.as_str()).unwrap_or(0);
                            let (line, column) = line_col(text, at);
                            Error::parse(line, column, format!("malformed weight `{w}`"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Self::new(doc.dim, doc.steps, weights)
    }
}

pub(crate) fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |nl| before.len() - nl - 1) + 1;
    (line, column)
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| {
                if self.dim == 1 {
                    s[0].to_string()
                } else {
                    format!("({})", s.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Which walk endpoints are counted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CountMode {
    ReturnToOrigin,
    AnyEndpoint,
    EndpointSlice(Vec<i64>),
}

impl CountMode {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if let CountMode::EndpointSlice(t) = self {
            if t.len() != dim || t.iter().any(|&c| c < 0) {
                return Err(Error::InvalidStepSet(format!(
                    "endpoint {t:?} must have {dim} non-negative coordinates"
                )));
            }
        }
        Ok(())
    }

    /// Command-line spelling: `zero`, `any`, `slice i[,j[,k]]`.
    pub fn label(&self) -> String {
        match self {
            CountMode::ReturnToOrigin => "zero".into(),
            CountMode::AnyEndpoint => "any".into(),
            CountMode::EndpointSlice(t) => format!(
                "slice {}",
                t.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            ),
        }
    }

    pub fn parse_label(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "zero" => Ok(CountMode::ReturnToOrigin),
            "any" => Ok(CountMode::AnyEndpoint),
            _ => {
                let rest = s
                    .strip_prefix("slice")
                    .ok_or_else(|| Error::parse(1, 1, format!("unknown mode `{s}`")))?
                    .trim_start_matches([' ', '=', ':']);
                let coords = rest
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::parse(1, 7, format!("malformed slice target `{rest}`")))?;
                Ok(CountMode::EndpointSlice(coords))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::ratio;

    #[test]
    fn validation() {
        assert!(StepSet::one_dim(&[]).is_err());
        assert!(StepSet::one_dim(&[1, 1]).is_err());
        assert!(StepSet::new(2, vec![vec![1]], None).is_err());
        assert!(StepSet::new(4, vec![vec![1, 0, 0, 0]], None).is_err());
        assert!(StepSet::one_dim(&[-1, 1]).unwrap().with_weights(vec![ratio(1, 2)]).is_err());
        assert!(StepSet::one_dim(&[-1, 1])
            .unwrap()
            .with_weights(vec![ratio(1, 2), ratio(0, 1)])
            .is_err());
    }

    #[test]
    fn document_round_trip() {
        let s = StepSet::two_dim(&[(1, 0), (-1, -1), (0, 1)]).unwrap();
        assert_eq!(StepSet::from_document(&s.to_document()).unwrap(), s);
        let w = StepSet::one_dim(&[-1, 1])
            .unwrap()
            .with_weights(vec![ratio(1, 3), ratio(2, 3)])
            .unwrap();
        let doc = w.to_document();
        assert_eq!(doc, "dim = 1\nsteps = [[-1], [1]]\nweights = [\"1/3\", \"2/3\"]\n");
        assert_eq!(StepSet::from_document(&doc).unwrap(), w);
    }

    #[test]
    fn document_errors_are_positioned() {
        let err = StepSet::from_document("dim = 1\nsteps = [[1], oops]\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = StepSet::from_document("dim = 1\nsteps = [[1]]\nweights = [\"1/x\"]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn mode_labels() {
        for m in [
            CountMode::ReturnToOrigin,
            CountMode::AnyEndpoint,
            CountMode::EndpointSlice(vec![2, 0]),
        ] {
            assert_eq!(CountMode::parse_label(&m.label()).unwrap(), m);
        }
        assert!(CountMode::EndpointSlice(vec![-1]).validate(1).is_err());
    }
}
