//! The order-divisibility primality criterion and the rank it induces.
//!
//! `(m_C - 1) mod n_C = 0`, i.e. `ord2(a) | a - 1`, holds exactly for the
//! odd primes and the Fermat pseudoprimes to base 2. The rank
//! `(m_C - 1)/n_C` is then the index of `<2>` in `(Z/aZ)*` for a prime `a`.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::little_shape;
use crate::numth::{
    factorize_u64, fermat_base2_holds, is_prime, ord2, order_of_two_dividing, pow_mod,
};
use crate::param::{odd_range, AlgoParam};
use crate::record::ScanRecord;
use crate::symmetry::{classify, Counterexample};

/// `(m_C - 1)/n_C`, kept as the raw pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rank {
    pub numerator: u64,
    pub denominator: u64,
}

impl Rank {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator > 0, "rank denominator must be positive");
        Rank {
            numerator,
            denominator,
        }
    }

    /// Lowest terms.
    pub fn reduced(&self) -> (u64, u64) {
        let g = self.numerator.gcd(&self.denominator);
        (self.numerator / g, self.denominator / g)
    }

    pub fn is_integer(&self) -> bool {
        self.numerator.is_multiple_of(self.denominator)
    }

    pub fn as_integer(&self) -> Option<u64> {
        self.is_integer().then(|| self.numerator / self.denominator)
    }

    /// Decimal expansion cut (not rounded) after `places` digits.
    pub fn truncated_decimal(&self, places: usize) -> String {
        let (n, d) = self.reduced();
        let mut out = (n / d).to_string();
        if places > 0 {
            out.push('.');
            let mut r = n % d;
            for _ in 0..places {
                r *= 10;
                out.push(char::from(b'0' + (r / d) as u8));
                r %= d;
            }
        }
        out
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reduced() {
            (n, 1) => write!(f, "{n}"),
            (n, d) => write!(f, "{n}/{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NumberClass {
    Prime,
    PseudoprimeBase2,
    CompositeFail,
    Unit,
}

impl NumberClass {
    pub fn as_str(self) -> &'static str {
        match self {
            NumberClass::Prime => "Prime",
            NumberClass::PseudoprimeBase2 => "PseudoprimeBase2",
            NumberClass::CompositeFail => "CompositeFail",
            NumberClass::Unit => "Unit",
        }
    }
}

impl fmt::Display for NumberClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn criterion_holds(a: AlgoParam) -> Result<bool> {
    let a = a.at_least("criterion_holds", 3)?.get();
    Ok((a - 1) % ord2(a)? == 0)
}

pub fn rank(a: AlgoParam) -> Result<Rank> {
    let a = a.at_least("rank", 3)?.get();
    Ok(Rank::new(a - 1, ord2(a)?))
}

/// Prime, base-2 pseudoprime, or a composite failing the criterion.
///
/// Also cross-checks the criterion against the Fermat test; the two are
/// equivalent, so a disagreement is reported as an internal error.
pub fn classify_number(a: AlgoParam) -> Result<NumberClass> {
    if a.get() == 1 {
        return Ok(NumberClass::Unit);
    }
    let holds = criterion_holds(a)?;
    if holds != fermat_base2_holds(a.get())? {
        return Err(Error::EquivalenceBroken(a.get()));
    }
    Ok(if is_prime(a.get()) {
        NumberClass::Prime
    } else if holds {
        NumberClass::PseudoprimeBase2
    } else {
        NumberClass::CompositeFail
    })
}

/// Which integer-rank values a frequency table counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RankPopulation {
    /// Odd primes only.
    Primes,
    /// Every odd `a >= 3` meeting the criterion: primes and base-2 pseudoprimes.
    CriterionHolders,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub a: u64,
    pub rank: u64,
    pub prime: bool,
}

/// Every odd `a` in `[3, bound]` with an integer rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCensus {
    pub bound: u64,
    pub entries: Vec<CensusEntry>,
}

impl RankCensus {
    /// Uses the Fermat test to find the criterion holders, then reduces
    /// `a - 1` to `ord2(a)` through its prime factors.
    pub fn build(bound: u64) -> Self {
        let candidates: Vec<u64> = odd_range(3, bound).map(AlgoParam::get).collect();
        let entries = candidates
            .par_iter()
            .filter(|&&a| pow_mod(2, a - 1, a) == 1)
            .map(|&a| {
                let primes: Vec<u64> = factorize_u64(a - 1).into_iter().map(|(p, _)| p).collect();
                let order = order_of_two_dividing(a, a - 1, &primes);
                CensusEntry {
                    a,
                    rank: (a - 1) / order,
                    prime: is_prime(a),
                }
            })
            .collect();
        RankCensus { bound, entries }
    }

    fn selected(&self, population: RankPopulation) -> impl Iterator<Item = &CensusEntry> {
        self.entries
            .iter()
            .filter(move |e| population == RankPopulation::CriterionHolders || e.prime)
    }

    pub fn frequency(&self, max_rank: u64, population: RankPopulation) -> RankFrequency {
        let mut counts = vec![0u64; max_rank as usize];
        for e in self.selected(population) {
            if (1..=max_rank).contains(&e.rank) {
                counts[(e.rank - 1) as usize] += 1;
            }
        }
        RankFrequency {
            bound: self.bound,
            population,
            counts,
        }
    }

    pub fn members(&self, rank: u64, population: RankPopulation) -> Vec<u64> {
        self.selected(population)
            .filter(|e| e.rank == rank)
            .map(|e| e.a)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFrequency {
    pub bound: u64,
    pub population: RankPopulation,
    /// `counts[r - 1]` is the number of members with rank `r`.
    pub counts: Vec<u64>,
}

impl RankFrequency {
    pub fn count(&self, rank: u64) -> u64 {
        self.counts[(rank - 1) as usize]
    }
}

/// Rank histogram of the odd primes up to `bound`, ranks `1..=max_rank`.
pub fn rank_frequency(bound: u64, max_rank: u64) -> Result<RankFrequency> {
    rank_frequency_of(bound, max_rank, RankPopulation::Primes)
}

pub fn rank_frequency_of(
    bound: u64,
    max_rank: u64,
    population: RankPopulation,
) -> Result<RankFrequency> {
    if bound < 3 {
        return Err(Error::TooSmall {
            op: "rank_frequency",
            value: bound,
            min: 3,
        });
    }
    Ok(RankCensus::build(bound).frequency(max_rank, population))
}

/// All odd composites up to `bound` satisfying the criterion.
pub fn pseudoprime_scan(bound: u64) -> Result<Vec<ScanRecord>> {
    if bound < 3 {
        return Err(Error::TooSmall {
            op: "pseudoprime_scan",
            value: bound,
            min: 3,
        });
    }
    let params: Vec<AlgoParam> = odd_range(3, bound)
        .filter(|a| !is_prime(a.get()) && pow_mod(2, a.get() - 1, a.get()) == 1)
        .collect();
    let mut records = params
        .par_iter()
        .map(|&a| ScanRecord::build(a))
        .collect::<Result<Vec<_>>>()?;
    records.retain(|r| r.class == NumberClass::PseudoprimeBase2);
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankSymmetryReport {
    pub a_max: u64,
    /// How many `a` met each rule's premise.
    pub rank_one: u64,
    pub rank_two_odd_width: u64,
    pub little_single_row: u64,
    pub counterexamples: Vec<Counterexample>,
}

/// Rank 1 ⟹ SM pattern; rank 2 with odd `n_C` ⟹ IMM pattern;
/// `m_L = 1` ⟹ UM pattern. Evaluated on raw flags for odd `3 <= a <= a_max`.
pub fn rank_symmetry_scan(a_max: u64) -> Result<RankSymmetryReport> {
    if a_max < 3 {
        return Err(Error::TooSmall {
            op: "rank_symmetry_scan",
            value: a_max,
            min: 3,
        });
    }
    let params: Vec<AlgoParam> = odd_range(3, a_max).collect();
    let per_a = params
        .par_iter()
        .map(|&a| -> Result<[(bool, Option<&'static str>); 3]> {
            let r = rank(a)?;
            let flags = classify(a).flags;
            let little = little_shape(a);
            let rule =
                |premise: bool, concl: bool, name| (premise, (premise && !concl).then_some(name));
            Ok([
                rule(r.as_integer() == Some(1), flags.sm_pattern, "rank 1 => SM"),
                rule(
                    r.as_integer() == Some(2) && r.denominator % 2 == 1,
                    flags.imm_pattern,
                    "rank 2, odd n_C => IMM",
                ),
                rule(little.rows == 1, flags.um_pattern, "m_L = 1 => UM"),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = RankSymmetryReport {
        a_max,
        rank_one: 0,
        rank_two_odd_width: 0,
        little_single_row: 0,
        counterexamples: Vec::new(),
    };
    for (a, rules) in params.iter().zip(per_a) {
        report.rank_one += rules[0].0 as u64;
        report.rank_two_odd_width += rules[1].0 as u64;
        report.little_single_row += rules[2].0 as u64;
        for (_, broken) in rules {
            if let Some(rule) = broken {
                report.counterexamples.push(Counterexample {
                    a: a.get(),
                    rule: rule.to_string(),
                });
            }
        }
    }
    Ok(report)
}
