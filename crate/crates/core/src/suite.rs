//! Verification suites over ranges of `a`. Each check counts how many
//! cases it examined and collects a description of every violation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criterion::criterion_holds;
use crate::matrices::{
    big_shape, little_identity_holds, little_shape, perfect_knot_at, standard_shape,
};
use crate::numth::{fermat_base2_holds, pow_mod};
use crate::param::{odd_range, AlgoParam};
use crate::tree::{knot_position, KnotTable};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub checked: u64,
    pub violations: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn violation_count(&self) -> usize {
        self.checks.iter().map(|c| c.violations.len()).sum()
    }
}

/// Run `f` on every odd `a` in `[lo, hi]` in parallel; `f` returns a
/// violation message or `None`. Violations come back in ascending `a`.
fn check_range<F>(name: &str, lo: u64, hi: u64, f: F) -> CheckResult
where
    F: Fn(AlgoParam) -> Option<String> + Sync,
{
    let params: Vec<AlgoParam> = odd_range(lo, hi).collect();
    let violations: Vec<String> = params.par_iter().filter_map(|&a| f(a)).collect();
    CheckResult {
        name: name.to_string(),
        checked: params.len() as u64,
        violations,
    }
}

/// Ranges for [`structural_invariants`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantBounds {
    /// Shape relations and the little-matrix identity.
    pub shape: u64,
    /// Row structure of the standard window.
    pub structure: u64,
    /// Perfect-knot layout of the big window.
    pub big: u64,
}

impl Default for InvariantBounds {
    fn default() -> Self {
        InvariantBounds {
            shape: 100_000,
            structure: 2001,
            big: 25,
        }
    }
}

pub fn structural_invariants(bounds: InvariantBounds) -> SuiteReport {
    let mut checks = vec![
        check_range(
            "2^n_C - 1 ≡ 0 (mod m_C) and m_C > n_C",
            3,
            bounds.shape,
            |a| {
                let s = standard_shape(a);
                (pow_mod(2, s.cols, s.rows) != 1 || s.rows <= s.cols)
                    .then(|| format!("a = {a}: shape {}x{}", s.rows, s.cols))
            },
        ),
        check_range("1 + m_C + 2^n_L = m_L·2^(n_L+1)", 1, bounds.shape, |a| {
            (!little_identity_holds(a)).then(|| {
                let l = little_shape(a);
                format!("a = {a}: little {}x{}", l.rows, l.cols)
            })
        }),
        check_range(
            "exactly one knot per standard column",
            3,
            bounds.structure,
            |a| {
                let table = KnotTable::new(a);
                let mut per_col = vec![0u32; table.order() as usize];
                for i in 1..=a.get() {
                    if let Some(j) = table.knot_col(2 * i - 1) {
                        per_col[(j - 1) as usize] += 1;
                    }
                }
                per_col
                    .iter()
                    .position(|&k| k != 1)
                    .map(|j| format!("a = {a}: column {} has {} knots", j + 1, per_col[j]))
            },
        ),
        check_range("unbranched rows = m_C - n_C", 3, bounds.structure, |a| {
            let table = KnotTable::new(a);
            let unbranched = table.unbranched_rows().iter().filter(|&&u| u).count() as u64;
            (unbranched != a.get() - table.order())
                .then(|| format!("a = {a}: {unbranched} unbranched rows"))
        }),
        check_range(
            "first row branched, knot at n_C",
            3,
            bounds.structure,
            |a| {
                let j = knot_position(a, 1).expect("b = 1 is odd");
                (j != Some(standard_shape(a).cols)).then(|| format!("a = {a}: row 1 knot {j:?}"))
            },
        ),
        check_range("axis row unbranched", 3, bounds.structure, |a| {
            // the axis row (a+1)/2 holds b = a
            (knot_position(a, a.get()).expect("a is odd").is_some())
                .then(|| format!("a = {a}: axis row branched"))
        }),
        check_range("row pattern has period 2a in b", 3, bounds.structure, |a| {
            let bad = (1..=4 * a.get()).step_by(2).find(|&b| {
                knot_position(a, b).expect("odd b")
                    != knot_position(a, b + 2 * a.get()).expect("odd b")
            });
            bad.map(|b| format!("a = {a}: rows b = {b} and b + 2a differ"))
        }),
    ];
    checks.push(check_range(
        "big window: m_C - n_C perfect knots per column",
        3,
        bounds.big,
        |a| {
            let table = KnotTable::new(a);
            let big = big_shape(a).expect("small a");
            let expected = a.get() - table.order();
            (1..=big.cols).find_map(|j| {
                let count = (1..=big.rows)
                    .filter(|&i| perfect_knot_at(&table, i, j))
                    .count() as u64;
                (count != expected).then(|| format!("a = {a}: column {j} has {count}"))
            })
        },
    ));
    checks.push(check_range(
        "big window: perfect knots repeat after m_B rows",
        3,
        bounds.big,
        |a| {
            let table = KnotTable::new(a);
            let big = big_shape(a).expect("small a");
            (1..=big.rows).find_map(|i| {
                (1..=big.cols)
                    .find(|&j| {
                        perfect_knot_at(&table, i, j) != perfect_knot_at(&table, i + big.rows, j)
                    })
                    .map(|j| {
                        format!(
                            "a = {a}: rows {i} and {} differ at column {j}",
                            i + big.rows
                        )
                    })
            })
        },
    ));
    SuiteReport { checks }
}

/// The criterion and the Fermat base-2 test agree on every odd `a` in
/// `[3, bound]`.
pub fn criterion_fermat_equivalence(bound: u64) -> CheckResult {
    check_range(
        "(a-1) mod ord2(a) = 0 ⇔ 2^(a-1) ≡ 1 (mod a)",
        3,
        bound,
        |a| {
            let holds = criterion_holds(a).expect("a >= 3");
            let fermat = fermat_base2_holds(a.get()).expect("a >= 3");
            (holds != fermat).then(|| format!("a = {a}: criterion {holds}, fermat {fermat}"))
        },
    )
}
