//! Acceptance gate: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use theta_core::lift::standard_zeta;
use theta_core::oracle::{
    check_apacket, check_corollaries, check_duality, check_lift_coherence, check_packets,
    check_reduction, check_round_trip, check_sign_law, CheckOutcome,
};
use theta_core::{epsilon_of_space, HalfInt, Sign};

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

struct Verdict {
    cases: u64,
    failures: Vec<String>,
}

impl Verdict {
    fn from_outcome(outcome: &CheckOutcome, properties: &[&str]) -> Self {
        let failures = outcome
            .violations
            .iter()
            .filter(|v| properties.is_empty() || properties.contains(&v.property.as_str()))
            .map(|v| format!("{}: {} on {}", v.property, v.detail, v.input))
            .collect();
        Self {
            cases: outcome.cases,
            failures,
        }
    }
}

fn space_signs() -> Verdict {
    let mut failures = Vec::new();
    let mut cases = 0;
    for p in 0..=8i64 {
        for q in 0..=8i64 {
            cases += 1;
            let d = p - q;
            // count the pairs i < j among d positions (negative d wraps the same way)
            let exponent = d * (d - 1) / 2;
            let expected = if exponent.rem_euclid(2) == 0 {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let got = epsilon_of_space(p as usize, q as usize);
            if got != expected {
                failures.push(format!("U({p},{q}): got {got}, expected {expected}"));
            }
        }
    }
    Verdict { cases, failures }
}

fn report(
    index: usize,
    name: &str,
    limit: Option<Duration>,
    run: impl FnOnce() -> Verdict,
) -> bool {
    let start = Instant::now();
    let verdict = run();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let budget = limit.map_or_else(
        || "within criterion 4".to_string(),
        |l| format!("of {}s", l.as_secs()),
    );
    let pass = verdict.failures.is_empty() && in_time;
    println!(
        "criterion {index:>2} {name}: {} ({} cases, {} violations, {:.2}s {budget})",
        if pass { "PASS" } else { "FAIL" },
        verdict.cases,
        verdict.failures.len(),
        elapsed.as_secs_f64(),
    );
    for f in verdict.failures.iter().take(5) {
        println!("    {f}");
    }
    if !in_time {
        println!("    over the time limit");
    }
    pass
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let mut all = true;

    all &= report(1, "space signs", secs(1), space_signs);
    all &= report(2, "packet parity", secs(30), || {
        Verdict::from_outcome(&check_packets(5, h(9)), &[])
    });
    all &= report(3, "A-packet sign law", secs(30), || {
        Verdict::from_outcome(&check_sign_law(8), &[])
    });

    let mut coherence = None;
    all &= report(4, "lift and criterion coherence", secs(300), || {
        let outcome = check_lift_coherence(4, h(9), 4);
        let v = Verdict::from_outcome(
            &outcome,
            &[
                "lift coherence",
                "weak fairness",
                "infinitesimal character",
                "going-up counts",
            ],
        );
        coherence = Some(outcome);
        v
    });
    all &= report(5, "round trip", secs(300), || {
        Verdict::from_outcome(&check_round_trip(5, h(11)), &[])
    });
    all &= report(6, "A-packet coherence", secs(120), || {
        Verdict::from_outcome(&check_apacket(3, h(9), 4, standard_zeta), &[])
    });
    all &= report(7, "duality", secs(120), || {
        Verdict::from_outcome(&check_duality(4, h(9), 4), &[])
    });
    all &= report(8, "corollaries", secs(120), || {
        Verdict::from_outcome(&check_corollaries(4, h(9), 4, 2), &[])
    });
    all &= report(9, "reduction fixed point", secs(60), || {
        Verdict::from_outcome(&check_reduction(5, h(9), 10_000, 0x5eed), &[])
    });
    let coherence = coherence.expect("criterion 4 ran");
    all &= report(10, "discrete series range", None, || {
        Verdict::from_outcome(&coherence, &["discrete series range"])
    });

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
