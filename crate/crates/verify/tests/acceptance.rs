//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use supcone::{product_harness, ratio, Backend, ExtVec, Rational};
use supcone_verify::{replay, run_suite, Mutation, RunConfig, Suite, SuiteReport};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn run(suite: Suite, trials: usize, seed: u64, backend: Backend) -> Result<SuiteReport, String> {
    run_suite(&RunConfig::new(suite, trials, seed, backend)).map_err(|e| e.to_string())
}

/// Every listed property passed on at least `min` trials and none failed.
fn require(report: &SuiteReport, props: &[&str], min: u64) -> Verdict {
    if !report.passed {
        let first = report.counterexamples.first().map(|c| c.property.clone()).unwrap_or_default();
        return Err(format!("{} failing trial(s), first in {first}", report.failures()));
    }
    let mut least = u64::MAX;
    for name in props {
        let id = format!("{}/{name}", report.suite);
        let counts = report.properties.get(&id).ok_or_else(|| format!("no property {id}"))?;
        if counts.passed < min {
            return Err(format!("{id}: {} passed < {min}", counts.passed));
        }
        least = least.min(counts.passed);
    }
    let noun = if props.len() == 1 { "property" } else { "properties" };
    Ok(format!("{} {noun}, ≥{least} passing instances each", props.len()))
}

/// All properties of the report that apply to its backend.
fn applicable(report: &SuiteReport) -> Vec<String> {
    report
        .properties
        .iter()
        .filter(|(_, c)| c.passed + c.failed > 0)
        .map(|(id, _)| id.split_once('/').map(|(_, n)| n.to_string()).unwrap_or_default())
        .collect()
}

fn require_all(report: &SuiteReport, min: u64) -> Verdict {
    let names = applicable(report);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    require(report, &names, min)
}

fn cone_axioms() -> Verdict {
    let start = Instant::now();
    let report = run(Suite::ConeAxioms, 1000, 42, Backend::Rational)?;
    let elapsed = start.elapsed();
    let line = require_all(&report, 1000)?;
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("{line}, {elapsed:.1?}"))
}

fn decomposition() -> Verdict {
    let report = run(Suite::BandsDecomposition, 1000, 43, Backend::Rational)?;
    require_all(&report, 1000)
}

fn multiplication() -> Verdict {
    let exact = run(Suite::Multiplication, 1000, 44, Backend::Rational)?;
    let a = require_all(&exact, 1000)?;
    let float = run(Suite::Multiplication, 1000, 45, Backend::Float)?;
    require(&float, &["exp-lower-bound", "exp-inverse"], 1000)?;
    // exp(−x) at x = 1/2, to 1e−12.
    let x: ExtVec<f64> = ExtVec::new(vec![supcone::Ext::Fin(0.5)]);
    let e = x.exp_neg().map_err(|e| e.to_string())?.coords()[0];
    if (e - (-0.5f64).exp()).abs() > 1e-12 || 1.0 - 0.5 > e {
        return Err(format!("exp(−0.5) = {e}"));
    }
    Ok(format!("exact: {a}; float exp identities ≥1000 within 1e-9"))
}

fn convergence() -> Verdict {
    let report = run(Suite::Convergence, 500, 46, Backend::Rational)?;
    require_all(&report, 500)
}

fn borel_cantelli() -> Verdict {
    let report = run(Suite::BorelCantelli, 1000, 47, Backend::Rational)?;
    require(&report, &["bcl1", "bcl1-off-band"], 1000)?;
    let line = require(&report, &["bcl2"], 500)?;
    let patterns: [fn(usize) -> Rational; 3] = [
        |_| ratio(1, 2),
        |k| ratio((k % 4) as i64 + 1, 5),
        |k| ratio(1, (k % 3) as i64 + 8),
    ];
    for m in 2..=16 {
        for (i, pattern) in patterns.iter().enumerate() {
            let probs: Vec<Rational> = (0..m).map(pattern).collect();
            let r = product_harness(&probs).map_err(|e| e.to_string())?;
            if !r.passed() {
                return Err(format!("product harness m = {m}, pattern {i}: {}", r.detail));
            }
            let sum: f64 = r.metrics["sum_p"].parse().map_err(|_| "sum_p")?;
            let lhs: f64 = r.metrics["product_f64"].parse().map_err(|_| "product_f64")?;
            if sum >= 5.0 && lhs >= 0.01 {
                return Err(format!("m = {m}, pattern {i}: Σp = {sum} but LHS = {lhs}"));
            }
        }
    }
    Ok(format!("{line}; product harness m = 2..16 exact"))
}

fn martingales() -> Verdict {
    let report = run(Suite::Martingales, 1000, 48, Backend::Rational)?;
    require_all(&report, 200)
}

fn normalized(mut r: SuiteReport) -> String {
    r.timestamp = 0;
    r.to_json()
}

fn determinism_and_mutations() -> Verdict {
    for backend in [Backend::Rational, Backend::Float] {
        let a = normalized(run(Suite::All, 100, 49, backend)?);
        let b = normalized(run(Suite::All, 100, 49, backend)?);
        if a != b {
            return Err(format!("{backend} reports differ between identical runs"));
        }
    }
    for m in Mutation::ALL {
        let (suite, target) = m.target();
        let mut cfg = RunConfig::new(suite, 100, 50, Backend::Rational);
        cfg.mutation = Some(m);
        let report = run_suite(&cfg).map_err(|e| e.to_string())?;
        let id = format!("{suite}/{target}");
        let failing: Vec<&String> = report.properties.iter().filter(|(_, c)| c.failed > 0).map(|(k, _)| k).collect();
        if failing != [&id] {
            return Err(format!("{m}: failing properties {failing:?}, expected [{id}]"));
        }
        let cx = report.counterexamples.first().ok_or_else(|| format!("{m}: no counterexample"))?;
        match replay(cx).map_err(|e| e.to_string())? {
            Some(f) if f == cx.failure => {}
            other => return Err(format!("{m}: replay gave {other:?}")),
        }
    }
    Ok(format!("byte-identical reports; {} mutations caught and replayed", Mutation::ALL.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 cone axioms", cone_axioms),
        ("2 band decomposition", decomposition),
        ("3 multiplication", multiplication),
        ("4 convergence", convergence),
        ("5 Borel-Cantelli", borel_cantelli),
        ("6 martingales", martingales),
        ("7 determinism and mutation self-test", determinism_and_mutations),
    ];
    let mut ok = true;
    for (name, check) in criteria {
        match check() {
            Ok(line) => println!("PASS criterion {name}: {line}"),
            Err(why) => {
                ok = false;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
