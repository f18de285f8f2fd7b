//! Ansatz fitting by exact kernel computation, shape sweeps and held-out
//! verification.

mod ansatz;
pub mod compress;
pub mod pipeline;
pub mod polynomial;
pub mod relation;
pub mod sweep;

use num_traits::Zero;

use crate::arith::rational::Rational;
use crate::error::{Error, Result};
use ansatz::{AlgebraicAnsatz, DifferentialAnsatz, RecurrenceAnsatz};
use sweep::{run_sweep, SweepBounds};

pub use compress::{compress_zeros, Compression};
pub use pipeline::{guess_pipeline, Budget, PipelineReport};
pub use polynomial::guess_polynomial;
pub use relation::{
    AlgebraicRelation, AnsatzKind, DifferentialRelation, PolynomialFormula, Recurrence, Relation, Verification,
    verify_relation,
};
pub use sweep::{GuessConfig, GuessReport, GuessStatus, Shape};

fn reject_degenerate(terms: &[Rational]) -> Result<()> {
    if terms.iter().all(Zero::is_zero) {
        return Err(Error::Degenerate("all terms are zero".into()));
    }
    Ok(())
}

/// Sweeps `Σ_{i≤d} p_i(t) C^i = 0` with `d ≤ max_deg_c`, `deg p_i ≤ max_deg_t`.
pub fn guess_algebraic(
    terms: &[Rational],
    max_deg_c: usize,
    max_deg_t: usize,
    config: &GuessConfig,
) -> Result<GuessReport> {
    reject_degenerate(terms)?;
    let fit_len = config.split(terms.len())?;
    let ansatz = AlgebraicAnsatz::new(&terms[..fit_len], max_deg_c);
    run_sweep(
        &ansatz,
        AnsatzKind::Algebraic,
        terms,
        fit_len,
        SweepBounds {
            max_family: max_deg_c,
            max_degree: max_deg_t,
        },
        config,
    )
}

/// Sweeps `Σ_{i≤d} q_i(n) c(n+i) = 0` with `d ≤ max_order`, `deg q_i ≤ max_degree`.
pub fn guess_recurrence(
    terms: &[Rational],
    max_order: usize,
    max_degree: usize,
    config: &GuessConfig,
) -> Result<GuessReport> {
    reject_degenerate(terms)?;
    let fit_len = config.split(terms.len())?;
    let ansatz = RecurrenceAnsatz { fit: &terms[..fit_len] };
    run_sweep(
        &ansatz,
        AnsatzKind::Recurrence,
        terms,
        fit_len,
        SweepBounds {
            max_family: max_order,
            max_degree,
        },
        config,
    )
}

/// Sweeps `Σ_{i≤L} r_i(t) C^{(i)} = 0` with `L ≤ max_order`, `deg r_i ≤ max_degree`.
pub fn guess_ode(
    terms: &[Rational],
    max_order: usize,
    max_degree: usize,
    config: &GuessConfig,
) -> Result<GuessReport> {
    reject_degenerate(terms)?;
    let fit_len = config.split(terms.len())?;
    let ansatz = DifferentialAnsatz { fit: &terms[..fit_len] };
    run_sweep(
        &ansatz,
        AnsatzKind::Differential,
        terms,
        fit_len,
        SweepBounds {
            max_family: max_order,
            max_degree,
        },
        config,
    )
}
