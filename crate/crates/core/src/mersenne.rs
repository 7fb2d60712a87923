//! Singular widths: `n` is singular when exactly one odd `a` has
//! `ord2(a) = n`. Every such `a` divides `2^n - 1`, and `2^n - 1` itself
//! always qualifies, so the exact count comes from the divisors of
//! `2^n - 1`. The bounded scan mirrors a plain search over `a`.

use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::{factorize, factorize_u64, is_prime, lucas_lehmer, Natural};

/// Odd `a` sharing one standard-matrix width.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcCount {
    pub n: u64,
    pub count: u64,
    pub witnesses: Vec<u64>,
}

/// `ord2(a)` if it is at most `cap`, by doubling.
fn order_capped(a: u64, cap: u64) -> Option<u64> {
    if a == 1 {
        return Some(1);
    }
    let mut x = 2 % a;
    let mut k = 1;
    while x != 1 {
        if k == cap {
            return None;
        }
        x <<= 1;
        if x >= a {
            x -= a;
        }
        k += 1;
    }
    Some(k)
}

/// Width histogram `n = 1..=n_max` over all odd `a <= a_max`.
pub fn nc_histogram_bounded(n_max: u64, a_max: u64) -> Vec<NcCount> {
    let odd: Vec<u64> = (1..=a_max).step_by(2).collect();
    let hits: Vec<(u64, u64)> = odd
        .par_iter()
        .filter_map(|&a| order_capped(a, n_max).map(|n| (n, a)))
        .collect();
    let mut out: Vec<NcCount> = (1..=n_max)
        .map(|n| NcCount {
            n,
            count: 0,
            witnesses: Vec::new(),
        })
        .collect();
    for (n, a) in hits {
        let slot = &mut out[(n - 1) as usize];
        slot.count += 1;
        slot.witnesses.push(a);
    }
    out
}

pub fn nc_count_bounded(n: u64, a_max: u64) -> Result<NcCount> {
    if n == 0 {
        return Err(Error::Zero {
            op: "nc_count_bounded",
        });
    }
    let mut counts = nc_histogram_bounded(n, a_max);
    Ok(counts.swap_remove((n - 1) as usize))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCount {
    pub n: u64,
    /// Ascending; the last one is `2^n - 1`.
    pub witnesses: Vec<Natural>,
}

impl ExactCount {
    pub fn count(&self) -> u64 {
        self.witnesses.len() as u64
    }

    pub fn witnesses_u64(&self) -> Option<Vec<u64>> {
        self.witnesses.iter().map(ToPrimitive::to_u64).collect()
    }
}

pub fn mersenne_number(n: u64) -> Natural {
    (Natural::one() << n as usize) - 1u32
}

/// Divisors of `2^n - 1` whose order of 2 is exactly `n`.
pub fn nc_count_exact(n: u64) -> Result<ExactCount> {
    if n == 0 {
        return Err(Error::Zero {
            op: "nc_count_exact",
        });
    }
    if n == 1 {
        return Ok(ExactCount {
            n,
            witnesses: vec![Natural::one()],
        });
    }
    let m = mersenne_number(n);
    let n_primes: Vec<u64> = factorize_u64(n).into_iter().map(|(q, _)| q).collect();
    let two = Natural::from(2u32);
    let witnesses = factorize(&m)?
        .divisors()
        .into_par_iter()
        .filter(|d| {
            !d.is_one()
                && n_primes
                    .iter()
                    .all(|&q| !two.modpow(&Natural::from(n / q), d).is_one())
        })
        .collect();
    Ok(ExactCount { n, witnesses })
}

pub fn is_singular(n: u64) -> Result<bool> {
    Ok(nc_count_exact(n)?.count() == 1)
}

/// Is `2^n - 1` prime: Lucas–Lehmer for odd prime `n`, direct for `n <= 2`,
/// and never for composite `n`.
pub fn mersenne_is_prime(n: u64) -> Result<bool> {
    match n {
        0 => Err(Error::Zero {
            op: "mersenne_is_prime",
        }),
        1 => Ok(false),
        2 => Ok(true),
        n if is_prime(n) => lucas_lehmer(n),
        _ => Ok(false),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityReport {
    pub n: u64,
    pub count: u64,
    pub witnesses: Vec<Natural>,
    pub singular: bool,
    pub mersenne_prime: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KaiserReport {
    pub n_max: u64,
    pub rows: Vec<SingularityReport>,
    /// Mersenne-prime exponents that are not singular.
    pub violations: Vec<u64>,
    /// Singular `n >= 2` whose Mersenne number is composite (informational).
    pub singular_composite: Vec<u64>,
    /// `n` whose Mersenne number could not be factored.
    pub unresolved: Vec<(u64, String)>,
}

impl KaiserReport {
    pub fn singular(&self) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| r.singular)
            .map(|r| r.n)
            .collect()
    }
}

pub fn singularity_report(n: u64) -> Result<SingularityReport> {
    let exact = nc_count_exact(n)?;
    let count = exact.count();
    Ok(SingularityReport {
        n,
        count,
        witnesses: exact.witnesses,
        singular: count == 1,
        mersenne_prime: mersenne_is_prime(n)?,
    })
}

/// Necessity check for `n = 2..=n_max`: every Mersenne-prime exponent must
/// be singular. `n = 1` is listed in `rows` but not checked.
pub fn kaiser_check(n_max: u64) -> Result<KaiserReport> {
    if n_max < 2 {
        return Err(Error::TooSmall {
            op: "kaiser_check",
            value: n_max,
            min: 2,
        });
    }
    let results: Vec<(u64, Result<SingularityReport>)> = (1..=n_max)
        .into_par_iter()
        .map(|n| (n, singularity_report(n)))
        .collect();
    let mut report = KaiserReport {
        n_max,
        rows: Vec::new(),
        violations: Vec::new(),
        singular_composite: Vec::new(),
        unresolved: Vec::new(),
    };
    for (n, result) in results {
        match result {
            Ok(row) => {
                if n >= 2 && row.mersenne_prime && !row.singular {
                    report.violations.push(n);
                }
                if n >= 2 && row.singular && !row.mersenne_prime {
                    report.singular_composite.push(n);
                }
                report.rows.push(row);
            }
            Err(e @ Error::FactorizationTimeout { .. }) => {
                report.unresolved.push((n, e.to_string()))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
