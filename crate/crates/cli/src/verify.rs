//! Verification suites behind `verify --suite`.

use std::fmt::Write as _;

use clap::ValueEnum;
use collatz_matrix::criterion::rank_symmetry_scan;
use collatz_matrix::mersenne::kaiser_check;
use collatz_matrix::suite::{
    criterion_fermat_equivalence, structural_invariants, CheckResult, InvariantBounds,
};
use collatz_matrix::symmetry::correlation_scan;
use serde_json::json;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Invariants,
    Conjecture1,
    Symmetry,
    RankSymmetry,
    Kaiser,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Invariants => "invariants",
            Suite::Conjecture1 => "conjecture1",
            Suite::Symmetry => "symmetry",
            Suite::RankSymmetry => "rank-symmetry",
            Suite::Kaiser => "kaiser",
        }
    }

    pub fn default_bound(self) -> u64 {
        match self {
            Suite::Invariants => 2001,
            Suite::Conjecture1 => 100_000,
            Suite::Symmetry | Suite::RankSymmetry => 20_001,
            Suite::Kaiser => 31,
        }
    }

    /// Smallest and largest accepted bound.
    pub fn budget(self) -> (u64, u64) {
        match self {
            Suite::Invariants => (3, 20_001),
            Suite::Conjecture1 => (3, 10_000_000),
            Suite::Symmetry | Suite::RankSymmetry => (3, 1_000_000),
            Suite::Kaiser => (2, 90),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyRequest {
    pub suite: Suite,
    pub bound: Option<u64>,
    /// Shape checks of the invariants suite.
    pub shape_bound: u64,
    /// Big-window checks of the invariants suite.
    pub big_bound: u64,
    pub json: bool,
}

impl VerifyRequest {
    pub fn new(suite: Suite, bound: Option<u64>) -> Self {
        let defaults = InvariantBounds::default();
        VerifyRequest {
            suite,
            bound,
            shape_bound: defaults.shape,
            big_bound: defaults.big,
            json: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Passed,
    Violations(usize),
    /// The suite could not finish (for example a factorization ran out).
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub text: String,
}

fn check_lines(out: &mut String, checks: &[CheckResult]) {
    for c in checks {
        let status = if c.passed() { "ok" } else { "FAIL" };
        let _ = writeln!(out, "{status:<4} {} ({} checked)", c.name, c.checked);
        for v in c.violations.iter().take(20) {
            let _ = writeln!(out, "     {v}");
        }
        if c.violations.len() > 20 {
            let _ = writeln!(out, "     ... {} more", c.violations.len() - 20);
        }
    }
}

fn verdict_of(violations: usize) -> Verdict {
    if violations == 0 {
        Verdict::Passed
    } else {
        Verdict::Violations(violations)
    }
}

fn render(json: bool, text: String, value: serde_json::Value) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
        s.push('\n');
        s
    } else {
        text
    }
}

pub fn run_verify(req: &VerifyRequest) -> CliResult<VerifyReport> {
    let suite = req.suite;
    let bound = req.bound.unwrap_or(suite.default_bound());
    let (lo, hi) = suite.budget();
    if !(lo..=hi).contains(&bound) {
        return Err(CliError::Usage(format!(
            "suite {} accepts bounds {lo}..={hi}, got {bound}",
            suite.as_str()
        )));
    }
    let mut text = format!("suite {} bound {bound}\n", suite.as_str());
    let (verdict, value) = match suite {
        Suite::Invariants => {
            let bounds = InvariantBounds {
                shape: req.shape_bound,
                structure: bound,
                big: req.big_bound,
            };
            let report = structural_invariants(bounds);
            check_lines(&mut text, &report.checks);
            (
                verdict_of(report.violation_count()),
                serde_json::to_value(&report).expect("serializes"),
            )
        }
        Suite::Conjecture1 => {
            let check = criterion_fermat_equivalence(bound);
            check_lines(&mut text, std::slice::from_ref(&check));
            (
                verdict_of(check.violations.len()),
                serde_json::to_value(&check).expect("serializes"),
            )
        }
        Suite::Symmetry => {
            let report = correlation_scan(bound)?;
            let counts: Vec<String> = report
                .counts
                .iter()
                .map(|(l, n)| format!("{l} {n}"))
                .collect();
            let _ = writeln!(text, "classes: {}", counts.join(", "));
            for c in &report.counterexamples {
                let _ = writeln!(text, "counterexample a = {}: {}", c.a, c.rule);
            }
            (
                verdict_of(report.counterexamples.len()),
                serde_json::to_value(&report).expect("serializes"),
            )
        }
        Suite::RankSymmetry => {
            let report = rank_symmetry_scan(bound)?;
            let _ = writeln!(
                text,
                "premises met: rank 1 {}, rank 2 with odd n_C {}, m_L = 1 {}",
                report.rank_one, report.rank_two_odd_width, report.little_single_row
            );
            for c in &report.counterexamples {
                let _ = writeln!(text, "counterexample a = {}: {}", c.a, c.rule);
            }
            (
                verdict_of(report.counterexamples.len()),
                serde_json::to_value(&report).expect("serializes"),
            )
        }
        Suite::Kaiser => {
            let report = kaiser_check(bound)?;
            let singular = report.singular();
            let list: Vec<String> = singular.iter().map(u64::to_string).collect();
            let _ = writeln!(text, "singular n: {}", list.join(", "));
            for n in &report.violations {
                let _ = writeln!(
                    text,
                    "violation: 2^{n} - 1 is prime but {n} is not singular"
                );
            }
            for n in &report.singular_composite {
                let _ = writeln!(text, "note: {n} is singular but 2^{n} - 1 is composite");
            }
            for (n, why) in &report.unresolved {
                let _ = writeln!(text, "unresolved n = {n}: {why}");
            }
            let verdict = if !report.violations.is_empty() {
                Verdict::Violations(report.violations.len())
            } else if !report.unresolved.is_empty() {
                Verdict::Incomplete
            } else {
                Verdict::Passed
            };
            let value = json!({
                "n_max": report.n_max,
                "singular": singular,
                "violations": report.violations,
                "singular_composite": report.singular_composite,
                "unresolved": report.unresolved,
            });
            (verdict, value)
        }
    };
    let _ = writeln!(
        text,
        "{}",
        match verdict {
            Verdict::Passed => "result: no violations".to_string(),
            Verdict::Violations(n) => format!("result: {n} violation(s)"),
            Verdict::Incomplete => "result: incomplete".to_string(),
        }
    );
    let value = json!({ "suite": suite.as_str(), "bound": bound, "passed": verdict == Verdict::Passed, "report": value });
    Ok(VerifyReport {
        verdict,
        text: render(req.json, text, value),
    })
}
