//! Canned runs of the worked examples, diffed against stored expectations.

use std::time::Duration;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::document::{run_guess, CrossCheck, Input, ReportDocument};
use crate::arith::rational::{rat, Rational};
use crate::guess::{guess_polynomial, Budget, GuessConfig, Relation};
use crate::seqkit::{binomial_coefficient, closed_form_catalan, convolution_oracle, unroll, Seed};
use crate::walk::dp::{enumerate_dp, probability_table};
use crate::walk::functional::{
    agreement_depth, functional_residual, is_zero_to, iterate_quadratic_map, mode_view, quadratic_residual,
    series_iterate_1d,
};
use crate::walk::stepset::{CountMode, StepSet};
use crate::{Error, Result};

pub const REPLICATION_IDS: [&str; 5] = ["gauss", "catalan-theorem", "gambler-101", "probability", "s-123"];

pub const GAUSS_FORMULA: &str = "a(n) = 1/2*n^2+1/2*n";
pub const CATALAN_ALGEBRAIC: &str = "(t)*C^2 + (-1)*C + (1) = 0";
pub const CATALAN_RECURRENCE: &str = "(n+2)*a(n+1) + (-4*n-2)*a(n) = 0";

/// Default wall-clock cap for each `s-123` sweep.
pub const S123_TIME_CAP: Duration = Duration::from_secs(30 * 60);

#[derive(Debug, Clone)]
pub struct Replication {
    pub id: String,
    pub checks: Vec<CrossCheck>,
    pub documents: Vec<ReportDocument>,
}

impl Replication {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.documents {
            out.push_str(&d.to_text());
            out.push('\n');
        }
        out.push_str(&format!("replicate {}\n", self.id));
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "MISMATCH" };
            out.push_str(&format!("  {mark} {}: {}\n", c.name, c.detail));
        }
        out
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> CrossCheck {
    CrossCheck {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn expect_relation(doc: &ReportDocument, ansatz: &str, want: &str) -> CrossCheck {
    let got = doc
        .body
        .guesses
        .iter()
        .find(|g| g.ansatz == ansatz)
        .and_then(|g| g.relation.clone());
    match got {
        Some(g) => check(&format!("{ansatz}-relation"), g == want, g),
        None => check(&format!("{ansatz}-relation"), false, "no relation found"),
    }
}

pub fn replicate(id: &str) -> Result<Replication> {
    replicate_with_cap(id, S123_TIME_CAP)
}

/// As [`replicate`], with an explicit wall-clock cap for the heavy sweeps.
pub fn replicate_with_cap(id: &str, cap: Duration) -> Result<Replication> {
    let (checks, documents) = match id {
        "gauss" => gauss()?,
        "catalan-theorem" => catalan_theorem()?,
        "gambler-101" => (gambler_101()?, Vec::new()),
        "probability" => (probability()?, Vec::new()),
        "s-123" => s123(cap)?,
        other => return Err(Error::UnknownExample(other.to_string())),
    };
    Ok(Replication {
        id: id.to_string(),
        checks,
        documents,
    })
}

fn triangular_by_summation(n: usize) -> Rational {
    (1..=n as i64).map(rat).sum()
}

fn gauss() -> Result<(Vec<CrossCheck>, Vec<ReportDocument>)> {
    let terms: Vec<Rational> = (0..5).map(triangular_by_summation).collect();
    let config = GuessConfig::default().with_min_verify(2);
    let budget = Budget {
        config: config.clone(),
        ..Budget::default()
    };
    let doc = run_guess(&Input::Terms(terms.clone()), "poly", &budget)?;
    let mut checks = vec![expect_relation(&doc, "poly", GAUSS_FORMULA)];
    let report = guess_polynomial(&terms, &config)?;
    if let Some(Relation::Polynomial(p)) = &report.relation {
        let confirmed = (5..=6).all(|n| p.eval(n) == triangular_by_summation(n));
        checks.push(check("confirmed-n-5-6", confirmed, "a(5) = 15, a(6) = 21"));
        let a100 = p.eval(100);
        checks.push(check("deduced-a-100", a100 == rat(5050), format!("a(100) = {a100}")));
    }
    Ok((checks, vec![doc]))
}

fn catalan_theorem() -> Result<(Vec<CrossCheck>, Vec<ReportDocument>)> {
    let steps = StepSet::one_dim(&[-1, 1])?;
    let budget = Budget {
        max_terms: 80,
        ..Budget::default()
    };
    let doc = run_guess(
        &Input::Walks {
            steps,
            mode: CountMode::ReturnToOrigin,
        },
        "auto",
        &budget,
    )?;
    let mut checks = vec![
        expect_relation(&doc, "alg", CATALAN_ALGEBRAIC),
        expect_relation(&doc, "rec", CATALAN_RECURRENCE),
    ];
    let ode = doc.body.guesses.iter().find(|g| g.ansatz == "ode");
    checks.push(check(
        "ode-relation",
        ode.is_some_and(|g| g.relation.is_some()),
        ode.and_then(|g| g.relation.clone()).unwrap_or_else(|| "none".into()),
    ));
    let n = 200;
    let conv = convolution_oracle(n);
    let rec = match super::grammar::parse_relation(CATALAN_RECURRENCE)? {
        Relation::Recurrence(r) => r,
        _ => unreachable!("stored recurrence"),
    };
    let unrolled = unroll(&rec, &Seed::new(vec![Rational::one()]), n)?;
    let agree = (0..=n).all(|k| {
        let closed = closed_form_catalan(k);
        conv[k] == closed && unrolled[k] == Rational::from_integer(closed)
    });
    checks.push(check(
        "three-way-oracles",
        agree,
        format!("convolution, recurrence and closed form agree to N = {n}"),
    ));
    let dp_agree = doc
        .body
        .terms
        .iter()
        .step_by(2)
        .enumerate()
        .all(|(k, t)| *t == closed_form_catalan(k).to_string());
    checks.push(check("dp-vs-closed-form", dp_agree, "even-index walk counts"));
    Ok((checks, vec![doc]))
}

fn gambler_101() -> Result<Vec<CrossCheck>> {
    let order = 30;
    let steps = StepSet::one_dim(&[-1, 1])?;
    let f = series_iterate_1d(&steps, order)?;
    let mut checks = Vec::new();
    for mode in [CountMode::ReturnToOrigin, CountMode::AnyEndpoint] {
        let table = enumerate_dp(&steps, &mode, order)?;
        let depth = agreement_depth(&mode_view(&f, &mode)?, &table);
        checks.push(check(
            &format!("functional-equation-vs-dp-{}", mode.label()),
            depth == order + 1,
            format!("{depth} of {} coefficients", order + 1),
        ));
    }
    let g = iterate_quadratic_map(order);
    checks.push(check(
        "quadratic-map-equals-F",
        g.coeffs() == f.coeffs(),
        format!("G and F agree to t^{order}"),
    ));
    checks.push(check(
        "functional-residual-of-G",
        is_zero_to(&functional_residual(&steps, &g)?),
        "G - (1 + txG + t/x (G - G(t,0))) = 0 on the truncation",
    ));
    checks.push(check(
        "algebraic-residual-of-G",
        is_zero_to(&quadratic_residual(&g)?),
        "t(-x+t+tx^2)G^2 + (2xt-1)G + 1 = 0 on the truncation",
    ));
    let at_zero: Vec<Rational> = mode_view(&g, &CountMode::ReturnToOrigin)?;
    let catalan = (0..=order).all(|k| {
        let want = if k % 2 == 0 {
            Rational::from_integer(closed_form_catalan(k / 2))
        } else {
            Rational::zero()
        };
        at_zero[k] == want
    });
    checks.push(check("G(t,0)-is-catalan", catalan, "f(t) = (1 - sqrt(1-4t^2)) / (2t^2)"));
    Ok(checks)
}

fn probability() -> Result<Vec<CrossCheck>> {
    let steps = StepSet::one_dim(&[-1, 1])?.with_weights(vec![Rational::new(1.into(), 2.into()); 2])?;
    let max_n = 50;
    let table = probability_table(&steps, &CountMode::ReturnToOrigin, 2 * max_n)?;
    let mut ok = !table.normalized;
    for n in 0..=max_n {
        let survive = &table.table.values[2 * n];
        let four_n = Rational::from_integer(BigInt::from(4).pow(n as u32));
        let break_even = Rational::from_integer(binomial_coefficient(2 * n as i64, n as i64)?) / four_n;
        ok &= survive / break_even == Rational::new(BigInt::one(), BigInt::from(n + 1));
    }
    Ok(vec![check(
        "never-in-debt-given-break-even",
        ok,
        format!("conditional probability is 1/(n+1) for n = 0..{max_n}"),
    )])
}

fn s123(cap: Duration) -> Result<(Vec<CrossCheck>, Vec<ReportDocument>)> {
    let steps = StepSet::one_dim(&[-1, -2, 3])?;
    let budget = s123_budget(cap);
    let mut checks = Vec::new();
    let mut docs = Vec::new();
    for (mode, bound) in [(CountMode::ReturnToOrigin, 20), (CountMode::AnyEndpoint, 21)] {
        let label = mode.label();
        let doc = run_guess(
            &Input::Walks {
                steps: steps.clone(),
                mode,
            },
            "rec",
            &budget,
        )?;
        let g = &doc.body.guesses[0];
        let verified = g.status == "verified-conjecture";
        let order = g.family.unwrap_or(usize::MAX);
        checks.push(check(
            &format!("{label}-verified"),
            verified,
            g.status.clone(),
        ));
        checks.push(check(
            &format!("{label}-order"),
            verified && order <= bound,
            format!("order {} (bound {bound})", g.family.map_or("-".into(), |o| o.to_string())),
        ));
        checks.push(check(
            &format!("{label}-held-out"),
            verified && g.verification_depth >= 100,
            format!("{} held-out equations", g.verification_depth),
        ));
        docs.push(doc);
    }
    Ok((checks, docs))
}

/// Raised budget for the `{-1,-2,3}` recurrences: 700 terms, order ≤ 21,
/// coefficient degree swept as far as the equations allow.
pub fn s123_budget(cap: Duration) -> Budget {
    Budget {
        max_terms: 700,
        max_order: 21,
        max_degree: 60,
        time_limit: Some(cap),
        ..Budget::default()
    }
}
