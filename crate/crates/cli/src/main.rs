use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use walkguess::guess::{Budget, GuessConfig, GuessStatus};
use walkguess::report::{
    read_terms, replicate_with_cap, run_guess, write_atomic, write_terms, Input, ReportDocument, REPLICATION_IDS,
};
use walkguess::report::replicate::S123_TIME_CAP;
use walkguess::walk::{enumerate_dp, CountMode, StepSet};
use walkguess::{Error, Result};

const EXIT_INPUT: u8 = 2;
const EXIT_NO_FIT: u8 = 3;
const EXIT_RESOURCE: u8 = 4;
const EXIT_PARTIAL: u8 = 5;
const EXIT_REFUTED: u8 = 6;
const EXIT_MISMATCH: u8 = 7;

/// Enumerate constrained lattice walks and guess closed descriptions of the
/// resulting sequences.
#[derive(Parser)]
#[command(name = "walkguess", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count walks by dynamic programming and write the terms.
    Enum {
        #[arg(long)]
        steps: PathBuf,
        #[arg(long, default_value = "zero")]
        mode: String,
        /// Largest walk length.
        #[arg(short = 'N', long = "length")]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit an ansatz (or all of them) and verify on held-out terms.
    Guess(GuessArgs),
    /// Check a relation against a terms file.
    Check {
        #[arg(long)]
        relation: PathBuf,
        #[arg(long)]
        terms: PathBuf,
        /// First index to check.
        #[arg(long, default_value_t = 0)]
        from: usize,
    },
    /// Re-run one of the worked examples and compare with stored results.
    Replicate {
        /// One of gauss, catalan-theorem, gambler-101, probability, s-123.
        id: String,
        #[arg(long)]
        budget_seconds: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GuessArgs {
    /// Step-set document; terms are enumerated from it.
    #[arg(long, conflicts_with = "terms", required_unless_present = "terms")]
    steps: Option<PathBuf>,
    #[arg(long, default_value = "zero")]
    mode: String,
    /// Terms file, one exact rational per line.
    #[arg(long)]
    terms: Option<PathBuf>,
    /// poly, alg, rec, ode or auto.
    #[arg(long, default_value = "auto")]
    ansatz: String,
    #[arg(long, default_value_t = 12)]
    max_order: usize,
    #[arg(long, default_value_t = 12)]
    max_degree: usize,
    /// Number of terms enumerated from a step set.
    #[arg(long, default_value_t = 400)]
    max_terms: usize,
    /// Fraction of the terms used for fitting.
    #[arg(long, default_value_t = 0.6)]
    split: f64,
    /// Minimum number of held-out terms a conjecture must predict.
    #[arg(long, default_value_t = 10)]
    min_verify: usize,
    #[arg(long)]
    budget_seconds: Option<f64>,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn time_cap(seconds: Option<f64>) -> Result<Option<Duration>> {
    seconds
        .map(|s| Duration::try_from_secs_f64(s).map_err(|_| Error::OutOfRange(format!("budget of {s} seconds"))))
        .transpose()
}

fn status_code(status: GuessStatus) -> u8 {
    match status {
        GuessStatus::VerifiedConjecture => 0,
        GuessStatus::NoFitWithinBounds => EXIT_NO_FIT,
        GuessStatus::ResourceExceeded => EXIT_RESOURCE,
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::ResourceExceeded(_) => EXIT_RESOURCE,
        _ => EXIT_INPUT,
    }
}

fn emit(doc: &ReportDocument, out: Option<&Path>) -> Result<()> {
    print!("{}", doc.to_text());
    if let Some(path) = out {
        write_atomic(path, &doc.to_json())?;
    }
    Ok(())
}

fn cmd_enum(steps: &Path, mode: &str, n: usize, out: Option<&Path>) -> Result<u8> {
    let set = StepSet::from_document(&read(steps)?)?;
    let mode = CountMode::parse_label(mode)?;
    let table = enumerate_dp(&set, &mode, n)?;
    let header = vec![
        ("tool".to_string(), walkguess::report::TOOL_VERSION.to_string()),
        ("steps".to_string(), set.to_string()),
        ("mode".to_string(), mode.label()),
        ("length".to_string(), n.to_string()),
    ];
    let text = write_terms(&table.values, &header);
    match out {
        Some(path) => write_atomic(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_guess(a: &GuessArgs) -> Result<u8> {
    let input = match (&a.steps, &a.terms) {
        (Some(s), _) => Input::Walks {
            steps: StepSet::from_document(&read(s)?)?,
            mode: CountMode::parse_label(&a.mode)?,
        },
        (None, Some(t)) => Input::Terms(read_terms(&read(t)?)?),
        (None, None) => return Err(Error::OutOfRange("either --steps or --terms is required".into())),
    };
    if !(a.split > 0.0 && a.split < 1.0) {
        return Err(Error::OutOfRange(format!("--split {} is not in (0, 1)", a.split)));
    }
    let budget = Budget {
        max_terms: a.max_terms,
        max_order: a.max_order,
        max_degree: a.max_degree,
        time_limit: time_cap(a.budget_seconds)?,
        ansatzes: Vec::new(),
        config: GuessConfig::default()
            .with_fit_fraction(a.split)
            .with_min_verify(a.min_verify),
    };
    let doc = run_guess(&input, &a.ansatz, &budget)?;
    emit(&doc, a.out.as_deref())?;
    Ok(status_code(doc.status()))
}

fn cmd_check(relation: &Path, terms: &Path, from: usize) -> Result<u8> {
    let rel = walkguess::report::parse_relation_document(&read(relation)?)?;
    let terms = read_terms(&read(terms)?)?;
    let v = rel.verify(&terms, from);
    println!("relation: {}", walkguess::report::format_relation(&rel));
    println!("depth: {} of {}", v.depth, v.available);
    if !v.exceptional.is_empty() {
        let e: Vec<String> = v.exceptional.iter().map(usize::to_string).collect();
        println!("exceptional indices: {}", e.join(", "));
    }
    if let Some(k) = v.first_failure {
        println!("first failing equation at n = {k}");
    }
    let (label, code) = if v.is_full() {
        ("full", 0)
    } else if v.depth > 0 {
        ("partial", EXIT_PARTIAL)
    } else {
        ("failed", EXIT_REFUTED)
    };
    println!("status: {label}");
    Ok(code)
}

fn cmd_replicate(id: &str, seconds: Option<f64>, out: Option<&Path>) -> Result<u8> {
    if !REPLICATION_IDS.contains(&id) {
        return Err(Error::UnknownExample(id.to_string()));
    }
    let cap = time_cap(seconds)?.unwrap_or(S123_TIME_CAP);
    let rep = replicate_with_cap(id, cap)?;
    print!("{}", rep.to_text());
    if let Some(path) = out {
        let docs: Vec<String> = rep.documents.iter().map(ReportDocument::to_json).collect();
        write_atomic(path, &format!("[{}]\n", docs.join(",")))?;
    }
    Ok(if rep.passed() { 0 } else { EXIT_MISMATCH })
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Enum { steps, mode, n, out } => cmd_enum(steps, mode, *n, out.as_deref()),
        Command::Guess(a) => cmd_guess(a),
        Command::Check { relation, terms, from } => cmd_check(relation, terms, *from),
        Command::Replicate {
            id,
            budget_seconds,
            out,
        } => cmd_replicate(id, *budget_seconds, out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
