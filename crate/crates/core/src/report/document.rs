//! Run manifests and report documents. The JSON form is the contract; the
//! text form is rendered from it.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::grammar::format_relation;
use crate::arith::rational::{format_rational, Rational};
use crate::error::{Error, Result};
use crate::guess::pipeline::guess_terms;
use crate::guess::{compress_zeros, AnsatzKind, Compression, Budget, GuessReport, GuessStatus, Relation};
use crate::walk::dp::enumerate_dp;
use crate::walk::functional::{agreement_depth, mode_view, series_iterate_1d, series_iterate_2d};
use crate::walk::stepset::{CountMode, StepSet};

pub const TOOL_VERSION: &str = concat!("walkguess ", env!("CARGO_PKG_VERSION"));

/// Where the terms of a run come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Walks { steps: StepSet, mode: CountMode },
    Terms(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InputSource {
    Walks { steps: String, mode: String },
    Terms { sha256: String, count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub input: InputSource,
    /// `auto` or a single ansatz label.
    pub ansatz: String,
    pub max_terms: usize,
    pub max_order: usize,
    pub max_degree: usize,
    pub time_cap_seconds: Option<f64>,
    pub fit_fraction: f64,
    pub min_verify: usize,
    pub margin: usize,
    /// Hash of every field above.
    pub run_id: String,
}

impl RunManifest {
    pub fn new(input: &Input, ansatz: &str, budget: &Budget) -> Self {
        let input = match input {
            Input::Walks { steps, mode } => InputSource::Walks {
                steps: steps.to_document(),
                mode: mode.label(),
            },
            Input::Terms(terms) => {
                let text: Vec<String> = terms.iter().map(format_rational).collect();
                InputSource::Terms {
                    sha256: hex::encode(Sha256::digest(text.join("\n").as_bytes())),
                    count: terms.len(),
                }
            }
        };
        let mut m = RunManifest {
            tool_version: TOOL_VERSION.to_string(),
            input,
            ansatz: ansatz.to_string(),
            max_terms: budget.max_terms,
            max_order: budget.max_order,
            max_degree: budget.max_degree,
            time_cap_seconds: budget.time_limit.map(|d| d.as_secs_f64()),
            fit_fraction: budget.config.fit_fraction,
            min_verify: budget.config.min_verify,
            margin: budget.config.margin,
            run_id: String::new(),
        };
        m.run_id = m.identity();
        m
    }

    /// First 16 hex digits of the SHA-256 of the manifest with an empty id.
    pub fn identity(&self) -> String {
        let mut bare = self.clone();
        bare.run_id.clear();
        let json = serde_json::to_string(&bare).expect("manifest serializes");
        hex::encode(Sha256::digest(json.as_bytes()))[..16].to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub generated_at_unix: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressionSummary {
    pub period: usize,
    pub residue: usize,
    pub compressed_len: usize,
    pub all_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuessEntry {
    pub ansatz: String,
    pub status: String,
    pub relation: Option<String>,
    pub family: Option<usize>,
    pub degree: Option<usize>,
    pub fit_terms: usize,
    pub verify_terms: usize,
    pub verification_depth: usize,
    pub max_family_reached: usize,
    pub max_degree_reached: usize,
    pub shapes_evaluated: usize,
    pub kernel_dimension: usize,
    /// Recurrences only: `c(0..d)` of the compressed sequence.
    pub initial_values: Vec<String>,
    /// Recurrences only: indices in range where the leading coefficient
    /// vanishes.
    pub exceptional_indices: Vec<usize>,
}

impl GuessEntry {
    pub fn from_report(r: &GuessReport, terms: &[Rational]) -> Self {
        let (initial_values, exceptional_indices) = match &r.relation {
            Some(Relation::Recurrence(rec)) => (
                terms.iter().take(rec.order()).map(format_rational).collect(),
                rec.exceptional_indices(terms.len().saturating_sub(rec.order())),
            ),
            _ => (Vec::new(), Vec::new()),
        };
        GuessEntry {
            ansatz: r.kind.label().to_string(),
            status: r.status.label().to_string(),
            relation: r.relation.as_ref().map(format_relation),
            family: r.shape.map(|s| s.family),
            degree: r.shape.map(|s| s.degree),
            fit_terms: r.fit_terms,
            verify_terms: r.verify_terms,
            verification_depth: r.verification_depth,
            max_family_reached: r.bounds_reached.family,
            max_degree_reached: r.bounds_reached.degree,
            shapes_evaluated: r.shapes_evaluated,
            kernel_dimension: r.kernel_dimension,
            initial_values,
            exceptional_indices,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    pub manifest: RunManifest,
    pub terms: Vec<String>,
    pub compression: CompressionSummary,
    pub guesses: Vec<GuessEntry>,
    pub cross_checks: Vec<CrossCheck>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub header: ReportHeader,
    pub body: ReportBody,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))
    }

    /// The body alone; identical manifests give identical bodies.
    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("report serializes")
    }

    pub fn status(&self) -> GuessStatus {
        match self.body.status.as_str() {
            "verified-conjecture" => GuessStatus::VerifiedConjecture,
            "resource-exceeded" => GuessStatus::ResourceExceeded,
            _ => GuessStatus::NoFitWithinBounds,
        }
    }

    pub fn to_text(&self) -> String {
        let b = &self.body;
        let m = &b.manifest;
        let mut out = String::new();
        out.push_str(&format!("run {} ({})\n", m.run_id, m.tool_version));
        match &m.input {
            InputSource::Walks { steps, mode } => {
                out.push_str(&format!("steps: {}\n", steps.trim().replace('\n', "; ")));
                out.push_str(&format!("mode: {mode}\n"));
            }
            InputSource::Terms { sha256, count } => {
                out.push_str(&format!("terms: {count} supplied (sha256 {})\n", &sha256[..16]));
            }
        }
        let shown: Vec<&str> = b.terms.iter().take(12).map(String::as_str).collect();
        let more = if b.terms.len() > 12 { ", ..." } else { "" };
        out.push_str(&format!("sequence: {}{more} ({} terms)\n", shown.join(", "), b.terms.len()));
        if b.compression.all_zero {
            out.push_str("degenerate: every term is zero\n");
        } else if b.compression.period > 1 {
            out.push_str(&format!(
                "compressed: indices = {} mod {}, {} terms\n",
                b.compression.residue, b.compression.period, b.compression.compressed_len
            ));
        }
        for g in &b.guesses {
            out.push_str(&format!("[{}] {}\n", g.ansatz, g.status));
            match &g.relation {
                Some(rel) => {
                    out.push_str(&format!("  {rel}\n"));
                    out.push_str(&format!(
                        "  fit on {} terms, held-out depth {} of {}",
                        g.fit_terms, g.verification_depth, g.verify_terms
                    ));
                    if g.kernel_dimension > 1 {
                        out.push_str(&format!(", kernel dimension {}", g.kernel_dimension));
                    }
                    out.push('\n');
                    if !g.initial_values.is_empty() {
                        out.push_str(&format!("  initial values: {}\n", g.initial_values.join(", ")));
                    }
                    if !g.exceptional_indices.is_empty() {
                        let e: Vec<String> = g.exceptional_indices.iter().map(usize::to_string).collect();
                        out.push_str(&format!("  exceptional indices: {}\n", e.join(", ")));
                    }
                }
                None => out.push_str(&format!(
                    "  no relation up to family {} and degree {} ({} shapes)\n",
                    g.max_family_reached, g.max_degree_reached, g.shapes_evaluated
                )),
            }
        }
        for c in &b.cross_checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            out.push_str(&format!("check {}: {mark} ({})\n", c.name, c.detail));
        }
        out.push_str(&format!("status: {}\n", b.status));
        out
    }
}

/// Ansatzes behind a CLI label; `auto` is algebraic, recurrence, ODE.
pub fn ansatzes_for(label: &str) -> Result<Vec<AnsatzKind>> {
    Ok(match label {
        "auto" => vec![AnsatzKind::Algebraic, AnsatzKind::Recurrence, AnsatzKind::Differential],
        "poly" => vec![AnsatzKind::Polynomial],
        "alg" => vec![AnsatzKind::Algebraic],
        "rec" => vec![AnsatzKind::Recurrence],
        "ode" => vec![AnsatzKind::Differential],
        other => return Err(Error::parse(1, 1, format!("unknown ansatz `{other}`"))),
    })
}

/// Longest prefix on which functional-equation iteration is cross-checked.
const FUNCTIONAL_CHECK_1D: usize = 40;
const FUNCTIONAL_CHECK_2D: usize = 16;

/// Runs enumeration (if needed), compression and the requested sweeps, and
/// assembles the report.
pub fn run_guess(input: &Input, ansatz: &str, budget: &Budget) -> Result<ReportDocument> {
    let start = Instant::now();
    let mut budget = budget.clone();
    budget.ansatzes = ansatzes_for(ansatz)?;
    let manifest = RunManifest::new(input, ansatz, &budget);
    let mut cross_checks = Vec::new();
    let terms = match input {
        Input::Terms(t) => t.clone(),
        Input::Walks { steps, mode } => {
            let table = enumerate_dp(steps, mode, budget.max_terms.saturating_sub(1))?;
            let reach = match steps.dim() {
                1 => Some((FUNCTIONAL_CHECK_1D, series_iterate_1d as fn(&StepSet, usize) -> Result<_>)),
                2 => Some((FUNCTIONAL_CHECK_2D, series_iterate_2d as fn(&StepSet, usize) -> Result<_>)),
                _ => None,
            };
            if let Some((cap, iterate)) = reach {
                let k = cap.min(table.order);
                let view = mode_view(&iterate(steps, k)?, mode)?;
                let depth = agreement_depth(&view, &table);
                cross_checks.push(CrossCheck {
                    name: "dp-vs-functional-equation".into(),
                    passed: depth == k + 1,
                    detail: format!("agree on {depth} of {} coefficients", k + 1),
                });
            }
            table.values
        }
    };
    let compression = if terms.len() >= 6 {
        compress_zeros(&terms)?
    } else {
        Compression {
            terms: terms.clone(),
            period: 1,
            residue: 0,
            all_zero: terms.iter().all(Zero::is_zero),
        }
    };
    let (reports, status) = if compression.all_zero {
        (Vec::new(), GuessStatus::NoFitWithinBounds)
    } else {
        guess_terms(&compression.terms, &budget)?
    };
    let guesses = reports
        .iter()
        .map(|r| GuessEntry::from_report(r, &compression.terms))
        .collect();
    let body = ReportBody {
        manifest,
        terms: terms.iter().map(format_rational).collect(),
        compression: CompressionSummary {
            period: compression.period,
            residue: compression.residue,
            compressed_len: compression.terms.len(),
            all_zero: compression.all_zero,
        },
        guesses,
        cross_checks,
        status: status.label().to_string(),
    };
    Ok(ReportDocument {
        header: header_since(start),
        body,
    })
}

pub(crate) fn header_since(start: Instant) -> ReportHeader {
    ReportHeader {
        generated_at_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}
