use std::time::{Duration, Instant};

use super::compress::{compress_zeros, Compression};
use super::relation::AnsatzKind;
use super::sweep::{GuessConfig, GuessReport, GuessStatus};
use super::{guess_algebraic, guess_ode, guess_polynomial, guess_recurrence};
use crate::arith::rational::Rational;
use crate::error::Result;
use crate::walk::dp::enumerate_dp;
use crate::walk::stepset::{CountMode, StepSet};

/// Resource bounds for one end-to-end run.
#[derive(Debug, Clone, PartialEq)]
pub struct Budget {
    /// Number of DP terms generated (indices `0 .. max_terms`).
    pub max_terms: usize,
    /// Bound on the degree in `C`, the recurrence order and the ODE order.
    pub max_order: usize,
    /// Bound on the degree of every coefficient polynomial.
    pub max_degree: usize,
    pub time_limit: Option<Duration>,
    /// Ansatzes tried, in this order.
    pub ansatzes: Vec<AnsatzKind>,
    pub config: GuessConfig,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_terms: 400,
            max_order: 12,
            max_degree: 12,
            time_limit: None,
            ansatzes: vec![AnsatzKind::Algebraic, AnsatzKind::Recurrence, AnsatzKind::Differential],
            config: GuessConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub steps: StepSet,
    pub mode: CountMode,
    pub terms: Vec<Rational>,
    pub compression: Compression,
    pub reports: Vec<GuessReport>,
    pub status: GuessStatus,
}

impl PipelineReport {
    pub fn report(&self, kind: AnsatzKind) -> Option<&GuessReport> {
        self.reports.iter().find(|r| r.kind == kind)
    }
}

/// Sweeps each requested ansatz over already-compressed terms.
pub fn guess_terms(terms: &[Rational], budget: &Budget) -> Result<(Vec<GuessReport>, GuessStatus)> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for &kind in &budget.ansatzes {
        let mut config = budget.config.clone();
        if let Some(limit) = budget.time_limit {
            let left = limit.saturating_sub(start.elapsed());
            config.time_limit = Some(config.time_limit.map_or(left, |t| t.min(left)));
        }
        let report = match kind {
            AnsatzKind::Polynomial => guess_polynomial(terms, &config)?,
            AnsatzKind::Algebraic => guess_algebraic(terms, budget.max_order, budget.max_degree, &config)?,
            AnsatzKind::Recurrence => guess_recurrence(terms, budget.max_order, budget.max_degree, &config)?,
            AnsatzKind::Differential => guess_ode(terms, budget.max_order, budget.max_degree, &config)?,
        };
        reports.push(report);
    }
    let status = if reports.iter().any(GuessReport::is_verified) {
        GuessStatus::VerifiedConjecture
    } else if reports.iter().any(|r| r.status == GuessStatus::ResourceExceeded) {
        GuessStatus::ResourceExceeded
    } else {
        GuessStatus::NoFitWithinBounds
    };
    Ok((reports, status))
}

/// Enumerate by DP, compress interlacing zeros, then sweep each ansatz.
pub fn guess_pipeline(steps: &StepSet, mode: &CountMode, budget: &Budget) -> Result<PipelineReport> {
    let table = enumerate_dp(steps, mode, budget.max_terms.saturating_sub(1))?;
    let compression = compress_zeros(&table.values)?;
    let (reports, status) = guess_terms(&compression.terms, budget)?;
    Ok(PipelineReport {
        steps: steps.clone(),
        mode: mode.clone(),
        terms: table.values,
        compression,
        reports,
        status,
    })
}
