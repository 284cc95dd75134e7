//! One line per acceptance criterion, `PASS` or `FAIL`, with wall time.
//! Runs without the libtest harness so the lines always print; the process
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use canontl::par::Mode;
use canontl::spin::{self, SpinVector};
use canontl::verify::{self, Case, Report, Suite, Verifier};
use canontl::{LaurentPoly, SignString};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[Report]) -> Self {
        let cases: Vec<&Case> = reports.iter().flat_map(|r| &r.cases).collect();
        let failed: Vec<String> = cases.iter().filter(|c| !c.passed).map(|c| c.to_string()).collect();
        Outcome {
            passed: failed.is_empty(),
            detail: if failed.is_empty() {
                format!("{} cases", cases.len())
            } else {
                failed.join("; ")
            },
        }
    }
}

fn run_suites(v: &Verifier, suites: &[(Suite, std::ops::RangeInclusive<usize>)]) -> Outcome {
    let mut reports = Vec::new();
    for (suite, range) in suites {
        match v.run(*suite, range.clone()) {
            Ok(r) => reports.push(r),
            Err(e) => {
                return Outcome {
                    passed: false,
                    detail: format!("{suite} errored: {e}"),
                }
            }
        }
    }
    Outcome::from_reports(&reports)
}

fn only(v: &Verifier, suite: Suite, range: std::ops::RangeInclusive<usize>, keep: &[&str]) -> Outcome {
    match v.run(suite, range) {
        Ok(mut r) => {
            r.cases.retain(|c| keep.iter().any(|k| c.name.starts_with(k)));
            Outcome::from_reports(&[r])
        }
        Err(e) => Outcome {
            passed: false,
            detail: format!("{suite} errored: {e}"),
        },
    }
}

fn worked_examples() -> Outcome {
    let s = |x: &str| x.parse::<SignString>().unwrap();
    let mq = -LaurentPoly::q_inv();
    let mut b = SpinVector::basis(s("+--+"));
    b.add_term(s("-+-+"), &mq).unwrap();
    let mut c = SpinVector::basis(s("++--"));
    c.add_term(s("+-+-"), &mq).unwrap();
    c.add_term(s("-+-+"), &mq).unwrap();
    c.add_term(s("--++"), &LaurentPoly::monomial(1, -2)).unwrap();
    let expected = [("--++", SpinVector::basis(s("--++"))), ("+--+", b), ("++--", c)];
    let mut bad = Vec::new();
    for (label, want) in &expected {
        let l = s(label);
        for (name, got) in [
            ("inductive", spin::dcb_inductive(&l)),
            ("explicit", spin::dcb_explicit(&l)),
            ("diagram", spin::dcb_via_diagram(&l)),
        ] {
            if &got != want {
                bad.push(format!("{name} {label}: {got}"));
            }
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() { "3 labels x 3 algorithms".into() } else { bad.join("; ") },
    }
}

fn main() -> ExitCode {
    let v = Verifier::new(Mode::default());
    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(&str, Option<Duration>, Check)> = vec![
        (
            "n=4 worked dual canonical examples under all three algorithms",
            Some(Duration::from_secs(1)),
            Box::new(worked_examples),
        ),
        (
            "triple agreement of the dual canonical algorithms, n <= 8",
            Some(Duration::from_secs(60)),
            Box::new(|| run_suites(&v, &[(Suite::Triple, 0..=8)])),
        ),
        (
            "duality pairing matrix is the reversal delta, n <= 6",
            Some(Duration::from_secs(120)),
            Box::new(|| run_suites(&v, &[(Suite::Duality, 0..=6)])),
        ),
        (
            "KL basis of S_5 maps to single diagrams or zero",
            None,
            Box::new(|| run_suites(&v, &[(Suite::FanGreen, 5..=5)])),
        ),
        (
            "Catalan counts n <= 10, induced basis sizes n <= 8",
            None,
            Box::new(|| {
                let cat = only(&v, Suite::Counts, 0..=10, &["diagram count"]);
                let ind = only(&v, Suite::Counts, 0..=8, &["induced basis"]);
                Outcome {
                    passed: cat.passed && ind.passed,
                    detail: format!("{}; {}", cat.detail, ind.detail),
                }
            }),
        ),
        (
            "TL relations n <= 6, Hecke relations n <= 5, bar involution",
            None,
            Box::new(|| {
                let mut cases = Vec::new();
                for n in 1..=6 {
                    cases.push(verify::tl_diagram_relations(n));
                    cases.push(verify::tl_spin_relations(n));
                }
                let mut cases: Vec<Case> = match cases.into_iter().collect() {
                    Ok(c) => c,
                    Err(e) => return Outcome { passed: false, detail: e.to_string() },
                };
                for n in 1..=5 {
                    cases.push(verify::hecke_relations(n));
                    cases.push(v.bar_involution(n));
                }
                Outcome::from_reports(&[Report { suite: Suite::Relations, cases }])
            }),
        ),
        (
            "projection of KL basis and embedding of aspherical basis, n <= 4",
            None,
            Box::new(|| {
                only(&v, Suite::ParabolicDuality, 1..=4, &["projection of KL", "embedding of aspherical"])
            }),
        ),
        (
            "flip pairing theorem, dual bases and sigma-star image, n <= 4",
            None,
            Box::new(|| {
                only(
                    &v,
                    Suite::ParabolicDuality,
                    1..=4,
                    &["flip pairing", "dual aspherical", "dual spherical", "sigma-star"],
                )
            }),
        ),
        (
            "spherical canonical formula equals the canonical M basis, n <= 5",
            None,
            Box::new(|| run_suites(&v, &[(Suite::Spherical, 0..=5)])),
        ),
        (
            "canonical axiom for every label n <= 5, adjoint generator matrices",
            None,
            Box::new(|| run_suites(&v, &[(Suite::Axiom, 0..=5)])),
        ),
        (
            "quantum group: module maps n <= 4, embedding n <= 3, invariant dimensions n <= 4",
            None,
            Box::new(|| run_suites(&v, &[(Suite::Quantum, 1..=4)])),
        ),
        (
            "label-diagram roundtrip and induced-basis membership, n <= 8",
            None,
            Box::new(|| run_suites(&v, &[(Suite::Bijection, 0..=8)])),
        ),
    ];

    let mut all = true;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > *limit {
                outcome.passed = false;
                outcome.detail = format!("{} (over the {:?} limit)", outcome.detail, limit);
            }
        }
        all &= outcome.passed;
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {:>2}: {name} [{:.2?}] {}",
            i + 1,
            elapsed,
            outcome.detail
        );
    }
    println!("{}", if all { "all criteria passed" } else { "some criteria failed" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
