//! Symmetry classes of the unbranched-row pattern about the axis row.
//!
//! With `U` the unbranched rows of the standard window and `x = (a+1)/2`
//! the axis (the row holding `b = a`):
//!
//! * SM: `U = {x}`
//! * UM: rows `2..x-1` all unbranched
//! * MM: `x-k ∈ U ⇔ x+k ∈ U` for every `k` in `1..x-1`
//! * IMM: `x-k ∈ U ⇔ x+k ∉ U` for every such `k`
//!
//! The label is the first flag that holds in the order UM, SM, MM, IMM,
//! and USM when none does.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::is_prime;
use crate::param::{odd_range, AlgoParam};
use crate::tree::KnotTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SymmetryLabel {
    SM,
    UM,
    MM,
    IMM,
    USM,
}

impl SymmetryLabel {
    pub const ALL: [SymmetryLabel; 5] = [
        SymmetryLabel::SM,
        SymmetryLabel::UM,
        SymmetryLabel::MM,
        SymmetryLabel::IMM,
        SymmetryLabel::USM,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryLabel::SM => "SM",
            SymmetryLabel::UM => "UM",
            SymmetryLabel::MM => "MM",
            SymmetryLabel::IMM => "IMM",
            SymmetryLabel::USM => "USM",
        }
    }
}

impl fmt::Display for SymmetryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SymmetryLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SymmetryLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown symmetry label {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PatternFlags {
    pub sm_pattern: bool,
    pub um_pattern: bool,
    pub mm_pattern: bool,
    pub imm_pattern: bool,
}

impl PatternFlags {
    /// Flags of a row pattern; `unbranched[i]` is row `i + 1`.
    pub fn from_rows(unbranched: &[bool]) -> Self {
        let m = unbranched.len();
        let axis = m.div_ceil(2);
        let row = |i: usize| unbranched[i - 1];
        let pairs = || (1..axis).map(|k| (row(axis - k), row(axis + k)));
        PatternFlags {
            sm_pattern: (1..=m).all(|i| row(i) == (i == axis)),
            um_pattern: (2..axis).all(row),
            mm_pattern: pairs().all(|(up, down)| up == down),
            imm_pattern: pairs().all(|(up, down)| up != down),
        }
    }

    pub fn label(&self) -> SymmetryLabel {
        if self.um_pattern {
            SymmetryLabel::UM
        } else if self.sm_pattern {
            SymmetryLabel::SM
        } else if self.mm_pattern {
            SymmetryLabel::MM
        } else if self.imm_pattern {
            SymmetryLabel::IMM
        } else {
            SymmetryLabel::USM
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetryClass {
    pub label: SymmetryLabel,
    pub flags: PatternFlags,
}

fn flags_unchecked(a: AlgoParam) -> PatternFlags {
    PatternFlags::from_rows(&KnotTable::new(a).unbranched_rows())
}

pub fn pattern_flags(a: AlgoParam) -> Result<PatternFlags> {
    Ok(flags_unchecked(a.at_least("pattern_flags", 3)?))
}

/// Total on odd `a`; `a = 1` has a single branched row and comes out UM.
pub fn classify(a: AlgoParam) -> SymmetryClass {
    let flags = flags_unchecked(a);
    SymmetryClass {
        label: flags.label(),
        flags,
    }
}

/// Is `n` of the form `2^k - 1`.
pub fn is_mersenne_number(n: u64) -> bool {
    n != 0 && (n & n.wrapping_add(1)) == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub a: u64,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub a_max: u64,
    pub counts: BTreeMap<SymmetryLabel, u64>,
    pub counterexamples: Vec<Counterexample>,
}

/// Check, for every odd `a <= a_max`, that singlematrices and inverted
/// mirrormatrices are prime and uppermatrices are Mersenne numbers.
pub fn correlation_scan(a_max: u64) -> Result<CorrelationReport> {
    if a_max < 3 {
        return Err(Error::TooSmall {
            op: "correlation_scan",
            value: a_max,
            min: 3,
        });
    }
    let params: Vec<AlgoParam> = odd_range(1, a_max).collect();
    let per_a: Vec<(SymmetryLabel, Option<Counterexample>)> = params
        .par_iter()
        .map(|&a| {
            let label = classify(a).label;
            let x = a.get();
            let broken = match label {
                SymmetryLabel::SM if !is_prime(x) => Some("SM => prime"),
                SymmetryLabel::IMM if !is_prime(x) => Some("IMM => prime"),
                SymmetryLabel::UM if !is_mersenne_number(x) => Some("UM => 2^k - 1"),
                _ => None,
            };
            let cex = broken.map(|rule| Counterexample {
                a: x,
                rule: rule.to_string(),
            });
            (label, cex)
        })
        .collect();
    let mut counts: BTreeMap<SymmetryLabel, u64> =
        SymmetryLabel::ALL.into_iter().map(|l| (l, 0)).collect();
    let mut counterexamples = Vec::new();
    for (label, cex) in per_a {
        *counts.entry(label).or_default() += 1;
        counterexamples.extend(cex);
    }
    counterexamples.sort_by(|p, q| (p.a, &p.rule).cmp(&(q.a, &q.rule)));
    Ok(CorrelationReport {
        a_max,
        counts,
        counterexamples,
    })
}
