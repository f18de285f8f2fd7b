//! One line per acceptance criterion, then a single assertion over all of
//! them. Run with `--nocapture` to see the table.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use walkguess::arith::{rat, ratio, Rational, UniPoly, Var};
use walkguess::guess::{
    compress_zeros, guess_algebraic, guess_pipeline, guess_polynomial, guess_recurrence, AnsatzKind, GuessConfig,
    GuessStatus, Recurrence, Relation,
};
use walkguess::report::replicate::{s123_budget, S123_TIME_CAP};
use walkguess::report::{format_relation, parse_relation};
use walkguess::seqkit::{binomial_coefficient, closed_form_catalan, convolution_oracle, unroll, Backing, Seed, SequenceStream};
use walkguess::walk::{
    agreement_depth, enumerate_dp, functional_residual, is_zero_to, iterate_quadratic_map, mode_view,
    probability_table, series_iterate_1d, series_iterate_2d, CountMode, StepSet,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn timed(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let passed = o.passed && in_time;
    println!(
        "criterion {id} [{}] {name}: {} ({:.2?}{})",
        if passed { "PASS" } else { "FAIL" },
        o.detail,
        elapsed,
        if in_time { String::new() } else { format!(", over the {limit:?} limit") }
    );
    passed
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

fn catalan_terms(n: usize) -> Vec<Rational> {
    convolution_oracle(n - 1).into_iter().map(Rational::from_integer).collect()
}

fn c1() -> Outcome {
    let t = enumerate_dp(&StepSet::one_dim(&[-1, 1]).unwrap(), &CountMode::ReturnToOrigin, 12).unwrap();
    let want = ints(&[1, 0, 1, 0, 2, 0, 5, 0, 14, 0, 42, 0, 132]);
    let oracle = convolution_oracle(6);
    let even_ok = (0..=6).all(|k| t.values[2 * k] == Rational::from_integer(oracle[k].clone()));
    outcome(t.values == want && even_ok, "1,0,1,0,2,0,5,0,14,0,42,0,132")
}

fn c2() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for s in [vec![-1, 1], vec![-1, 2], vec![-2, 1], vec![-1, -2, 3], vec![-1, 1, 2]] {
        let set = StepSet::one_dim(&s).unwrap();
        let f = series_iterate_1d(&set, 25).unwrap();
        for mode in [
            CountMode::ReturnToOrigin,
            CountMode::AnyEndpoint,
            CountMode::EndpointSlice(vec![1]),
            CountMode::EndpointSlice(vec![2]),
        ] {
            let dp = enumerate_dp(&set, &mode, 25).unwrap();
            checked += 1;
            if agreement_depth(&mode_view(&f, &mode).unwrap(), &dp) != 26 {
                bad.push(format!("{s:?} {}", mode.label()));
            }
        }
    }
    for s in [
        vec![(1, 0), (-1, 0), (0, 1), (0, -1)],
        vec![(1, 1), (-1, 0), (0, -1)],
        vec![(1, 0), (0, 1), (-1, -1)],
    ] {
        let set = StepSet::two_dim(&s).unwrap();
        let f = series_iterate_2d(&set, 16).unwrap();
        for mode in [CountMode::ReturnToOrigin, CountMode::AnyEndpoint, CountMode::EndpointSlice(vec![1, 1])] {
            let dp = enumerate_dp(&set, &mode, 16).unwrap();
            checked += 1;
            if agreement_depth(&mode_view(&f, &mode).unwrap(), &dp) != 17 {
                bad.push(format!("{s:?} {}", mode.label()));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} (step set, mode) pairs, disagreements: {bad:?}"))
}

fn c3() -> Outcome {
    let set = StepSet::one_dim(&[-1, 1]).unwrap();
    let g = iterate_quadratic_map(30);
    let same = g == series_iterate_1d(&set, 30).unwrap();
    let zero = is_zero_to(&functional_residual(&set, &g).unwrap());
    outcome(same && zero, format!("G = F to t^30: {same}, residual zero: {zero}"))
}

fn c4() -> Outcome {
    let raw = enumerate_dp(&StepSet::one_dim(&[-1, 1]).unwrap(), &CountMode::ReturnToOrigin, 27).unwrap();
    let c = compress_zeros(&raw.values).unwrap().terms;
    // 14 terms leave 5 held out after the 60% fit window.
    let config = GuessConfig::default().with_min_verify(5);
    let r = guess_algebraic(&c, 3, 3, &config).unwrap();
    let got = r.relation.as_ref().map(format_relation).unwrap_or_default();
    let want = Relation::Algebraic(
        walkguess::guess::AlgebraicRelation::new(&[
            UniPoly::from_ints(Var::T, &[1]),
            UniPoly::from_ints(Var::T, &[-1]),
            UniPoly::from_ints(Var::T, &[0, 1]),
        ])
        .unwrap(),
    );
    let exact = r.relation.as_ref() == Some(&want);
    let minimal = [(1, 3), (2, 0)]
        .iter()
        .all(|&(f, d)| guess_algebraic(&c, f, d, &config).unwrap().status == GuessStatus::NoFitWithinBounds);
    outcome(
        c.len() == 14 && exact && minimal && r.is_verified(),
        format!("{got} from {} terms, smaller shapes empty: {minimal}", c.len()),
    )
}

fn c5() -> Outcome {
    let c = catalan_terms(12);
    let config = GuessConfig::default().with_min_verify(4);
    let r = guess_recurrence(&c, 2, 2, &config).unwrap();
    let got = r.relation.as_ref().map(format_relation).unwrap_or_default();
    let want = "(n+2)*a(n+1) + (-4*n-2)*a(n) = 0";
    outcome(r.is_verified() && got == want, got)
}

fn c6() -> Outcome {
    let set = StepSet::one_dim(&[-1, 1]).unwrap().with_weights(vec![ratio(1, 2), ratio(1, 2)]).unwrap();
    let table = probability_table(&set, &CountMode::ReturnToOrigin, 100).unwrap();
    let ok = (0..=50usize).all(|n| {
        let survive = &table.table.values[2 * n];
        let a2n = survive * Rational::from_integer(BigInt::from(4).pow(n as u32));
        let direct = a2n == Rational::from_integer(closed_form_catalan(n));
        let central = Rational::from_integer(binomial_coefficient(2 * n as i64, n as i64).unwrap());
        direct && &a2n / central == ratio(1, n as i64 + 1)
    });
    outcome(ok && !table.normalized, "a(2n)/C(2n,n) = 1/(n+1) for n = 0..50")
}

fn c7() -> Outcome {
    let config = GuessConfig::default().with_min_verify(2);
    let r = guess_polynomial(&ints(&[0, 1, 3, 6, 10]), &config).unwrap();
    let Some(Relation::Polynomial(p)) = &r.relation else {
        return outcome(false, "no polynomial");
    };
    let confirmed = p.eval(5) == rat(15) && p.eval(6) == rat(21);
    let text = format_relation(r.relation.as_ref().unwrap());
    outcome(
        confirmed && text == "a(n) = 1/2*n^2+1/2*n",
        format!("{text}, confirmed at n = 5, 6: {confirmed}"),
    )
}

fn c8() -> Outcome {
    let steps = StepSet::one_dim(&[-1, -2, 3]).unwrap();
    let mut budget = s123_budget(S123_TIME_CAP);
    budget.ansatzes = vec![AnsatzKind::Recurrence];
    let mut ok = true;
    let mut parts = Vec::new();
    for (mode, bound) in [(CountMode::ReturnToOrigin, 20), (CountMode::AnyEndpoint, 21)] {
        let label = mode.label();
        let report = match guess_pipeline(&steps, &mode, &budget) {
            Ok(p) => p,
            Err(e) => {
                ok = false;
                parts.push(format!("{label}: {e}"));
                continue;
            }
        };
        let r = report.report(AnsatzKind::Recurrence).expect("recurrence swept");
        let order = match &r.relation {
            Some(Relation::Recurrence(rec)) => Some(rec.order()),
            _ => None,
        };
        let good = r.is_verified() && order.is_some_and(|o| o <= bound) && r.verification_depth >= 100;
        ok &= good;
        parts.push(format!(
            "{label}: {} order {} degree {} on {} held-out terms",
            r.status.label(),
            order.map_or("-".into(), |o| o.to_string()),
            r.shape.map_or("-".into(), |s| s.degree.to_string()),
            r.verification_depth
        ));
    }
    outcome(ok, parts.join("; "))
}

fn c9() -> Outcome {
    let mut notes = Vec::new();

    let mut runner = TestRunner::new(Config {
        cases: 64,
        failure_persistence: None,
        ..Config::default()
    });
    let family = prop::collection::vec(prop::collection::vec(-6i64..6, 1..4), 2..5)
        .prop_filter("nonzero leading", |f| f.last().unwrap().iter().any(|&c| c != 0));
    let scaling = runner
        .run(&(family, 1i64..30, 1i64..30, any::<bool>()), |(f, p, q, neg)| {
            let polys: Vec<UniPoly> = f.iter().map(|c| UniPoly::from_ints(Var::N, c)).collect();
            let s = if neg { ratio(-p, q) } else { ratio(p, q) };
            let scaled: Vec<UniPoly> = polys.iter().map(|x| x.scale(&s)).collect();
            let a = Recurrence::new(&polys).unwrap();
            prop_assert_eq!(Recurrence::new(&scaled).unwrap(), a.clone());
            let text = format_relation(&Relation::Recurrence(a.clone()));
            prop_assert_eq!(parse_relation(&text).unwrap(), Relation::Recurrence(a));
            Ok(())
        })
        .is_ok();
    notes.push(format!("scaling canonicality {scaling}"));

    let mut c = catalan_terms(40);
    let last = c.len() - 1;
    c[last] += rat(1);
    let honest = [
        guess_recurrence(&c, 2, 2, &GuessConfig::default()).unwrap(),
        guess_algebraic(&c, 2, 2, &GuessConfig::default()).unwrap(),
    ]
    .iter()
    .all(|r| !r.is_verified() && r.relation.is_none());
    notes.push(format!("corrupted-term refutation {honest}"));

    let window = (1..=21usize).all(|d| {
        let mut coeffs = vec![UniPoly::zero(Var::N); d + 1];
        coeffs[0] = UniPoly::from_ints(Var::N, &[-1, -1]);
        coeffs[d] = UniPoly::from_ints(Var::N, &[1, 1]);
        let rec = Recurrence::new(&coeffs).unwrap();
        let mut s = SequenceStream::new(Backing::Recurrence(rec, Seed::new(vec![rat(1); d]))).unwrap();
        s.take_terms(2 * d + 3).is_ok() && s.state_size() == d
    });
    notes.push(format!("window contract {window}"));

    let n = 200;
    let conv = convolution_oracle(n);
    let Ok(Relation::Recurrence(rec)) = parse_relation("(n+2)*a(n+1) + (-4*n-2)*a(n) = 0") else {
        return outcome(false, "stored recurrence does not parse");
    };
    let unrolled = unroll(&rec, &Seed::new(vec![rat(1)]), n).unwrap();
    let oracles = (0..=n).all(|k| {
        let closed = closed_form_catalan(k);
        conv[k] == closed && unrolled[k] == Rational::from_integer(closed)
    });
    notes.push(format!("three-way Catalan to N = {n} {oracles}"));

    outcome(scaling && honest && window && oracles, notes.join(", "))
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let results = [
        timed(1, "Catalan counts", s(1), c1),
        timed(2, "functional equation vs DP", s(30), c2),
        timed(3, "quadratic map identity", s(5), c3),
        timed(4, "algebraic guess", s(1), c4),
        timed(5, "recurrence guess", s(1), c5),
        timed(6, "probability law", s(10), c6),
        timed(7, "Gauss polynomial", s(1), c7),
        timed(8, "S = {-1,-2,3} recurrences", S123_TIME_CAP, c8),
        timed(9, "property suites", s(120), c9),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed} of {} criteria passed", results.len());
    assert!(results.iter().all(|&p| p));
}
