//! The tree matrix of `f_a`, addressed lazily.
//!
//! Row `i` holds the odd number `b = 2i - 1`. Column 0 is the knot column
//! (`a·b + 1`), column 1 the odd column (`b`), and column `c >= 2` holds
//! `2^(c-1)·b`. Elsewhere in the crate the doubling columns are indexed by
//! `j = c - 1`, so that doubling column `j` holds `2^j·b`.
//!
//! A row is *branched* when some `2^j·b` with `j >= 1` is a knot number,
//! i.e. `2^j·b ≡ 1 (mod a)`. The least such `j` is the row's knot column;
//! further knots follow every `ord2(a)` columns.

use std::collections::HashSet;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::{ord2, Natural};
use crate::param::AlgoParam;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TreeAddress {
    pub row: u64,
    pub col: u64,
}

impl TreeAddress {
    pub fn new(row: u64, col: u64) -> Result<Self> {
        if row == 0 {
            return Err(Error::Zero { op: "TreeAddress" });
        }
        Ok(TreeAddress { row, col })
    }

    /// Odd value held by this row.
    pub fn odd_value(&self) -> u64 {
        2 * self.row - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowStructure {
    pub a: AlgoParam,
    pub b: u64,
    /// First doubling column holding a knot number.
    pub knot_col: Option<u64>,
    pub unbranched: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    ReachedOne,
    CycleDetected,
    StepBudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub values: Vec<u64>,
    pub stop: StopReason,
}

pub fn f_step(a: AlgoParam, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Zero { op: "f_step" });
    }
    if n.is_multiple_of(2) {
        return Ok(n / 2);
    }
    a.get()
        .checked_mul(n)
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::Overflow {
            op: "f_step",
            value: n,
        })
}

/// Iterate `f_a` from `start` for at most `max_steps` steps.
///
/// Stops on the first repeated value (`CycleDetected`, which wins over
/// reaching 1 a second time), on a first visit to 1, or when the budget
/// runs out. Overflowing `u64` is an error, not a wrap.
pub fn trajectory(a: AlgoParam, start: u64, max_steps: u64) -> Result<Trajectory> {
    if start == 0 {
        return Err(Error::Zero { op: "trajectory" });
    }
    if max_steps == 0 {
        return Err(Error::Zero {
            op: "trajectory max_steps",
        });
    }
    let mut values = vec![start];
    let mut seen = HashSet::from([start]);
    let mut n = start;
    for _ in 0..max_steps {
        n = f_step(a, n)?;
        values.push(n);
        if !seen.insert(n) {
            return Ok(Trajectory {
                values,
                stop: StopReason::CycleDetected,
            });
        }
        if n == 1 {
            return Ok(Trajectory {
                values,
                stop: StopReason::ReachedOne,
            });
        }
    }
    Ok(Trajectory {
        values,
        stop: StopReason::StepBudgetExhausted,
    })
}

pub fn tree_entry(a: AlgoParam, addr: TreeAddress) -> Result<Natural> {
    if addr.row == 0 {
        return Err(Error::Zero { op: "tree_entry" });
    }
    let b = Natural::from(addr.odd_value());
    Ok(match addr.col {
        0 => b * a.get() + 1u32,
        c => b << (c - 1) as usize,
    })
}

/// Even, `≡ 1 (mod a)`, and generated by an odd `c` as `c·a + 1`.
pub fn is_knot(a: AlgoParam, v: &Natural) -> bool {
    if v.is_zero() || !v.is_even() {
        return false;
    }
    let (c, r) = (v - 1u32).div_rem(&Natural::from(a.get()));
    r.is_zero() && c.is_odd()
}

fn require_odd_row(op: &'static str, b: u64) -> Result<()> {
    if b == 0 {
        return Err(Error::Zero { op });
    }
    if b.is_multiple_of(2) {
        return Err(Error::Even { op, value: b });
    }
    Ok(())
}

/// Least `j >= 1` with `2^j·r ≡ 1 (mod a)`, by doubling until a hit or
/// until the orbit of `r` closes.
pub(crate) fn knot_position_residue(a: u64, r: u64) -> Option<u64> {
    let target = 1 % a;
    let start = r % a;
    let mut x = start;
    let mut j = 0;
    loop {
        x = (x << 1) % a;
        j += 1;
        if x == target {
            return Some(j);
        }
        if x == start {
            return None;
        }
    }
}

pub fn knot_position(a: AlgoParam, b: u64) -> Result<Option<u64>> {
    require_odd_row("knot_position", b)?;
    Ok(knot_position_residue(a.get(), b))
}

pub fn is_unbranched(a: AlgoParam, b: u64) -> Result<bool> {
    Ok(knot_position(a, b)?.is_none())
}

pub fn row_structure(a: AlgoParam, b: u64) -> Result<RowStructure> {
    let knot_col = knot_position(a, b)?;
    Ok(RowStructure {
        a,
        b,
        knot_col,
        unbranched: knot_col.is_none(),
    })
}

/// A knot whose generator `(k - 1)/a` sits in an unbranched row.
pub fn is_perfect_knot(a: AlgoParam, k: &Natural) -> bool {
    if !is_knot(a, k) {
        return false;
    }
    let c = (k - 1u32) / a.get();
    let residue = (c % a.get()).to_u64().expect("residue below a");
    knot_position_residue(a.get(), residue).is_none()
}

/// The row's knot-column value reappearing among its own doubling
/// entries: `a·b + 1 = 2^j·b`. Only `b = 1`, `a = 2^j - 1` qualifies.
pub fn detect_row_cycle(a: AlgoParam, b: u64) -> Result<Option<u32>> {
    require_odd_row("detect_row_cycle", b)?;
    let knot = a.get() as u128 * b as u128 + 1;
    let b = b as u128;
    if !knot.is_multiple_of(b) {
        return Ok(None);
    }
    let q = knot / b;
    Ok(q.is_power_of_two().then(|| q.trailing_zeros()))
}

/// Per-residue knot columns for one `a`, built from the cyclic subgroup
/// generated by 2. A residue outside the subgroup (including every
/// residue sharing a factor with `a`) belongs to an unbranched row.
#[derive(Debug, Clone)]
pub struct KnotTable {
    a: u64,
    order: u64,
    knot_col: Vec<Option<u32>>,
}

impl KnotTable {
    pub fn new(a: AlgoParam) -> Self {
        let a = a.get();
        let order = ord2(a).expect("odd a");
        let mut knot_col = vec![None; a as usize];
        let mut x = 1 % a;
        for k in 0..order {
            // b ≡ 2^k needs j ≡ -k (mod order), taken in 1..=order
            let j = if k == 0 { order } else { order - k };
            knot_col[x as usize] = Some(j as u32);
            x = (x << 1) % a;
        }
        KnotTable { a, order, knot_col }
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    /// `ord2(a)`, the standard matrix width.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn knot_col(&self, b: u64) -> Option<u64> {
        self.knot_col[(b % self.a) as usize].map(u64::from)
    }

    pub fn is_unbranched(&self, b: u64) -> bool {
        self.knot_col(b).is_none()
    }

    /// Unbranched flags of standard rows `1..=a`, index 0 is row 1.
    pub fn unbranched_rows(&self) -> Vec<bool> {
        (1..=self.a)
            .map(|i| self.is_unbranched(2 * i - 1))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(x: u64) -> AlgoParam {
        AlgoParam::new(x).unwrap()
    }

    fn nat(x: u64) -> Natural {
        Natural::from(x)
    }

    #[test]
    fn step() {
        assert_eq!(f_step(a(5), 3).unwrap(), 16);
        assert_eq!(f_step(a(3), 16).unwrap(), 8);
        assert_eq!(f_step(a(7), 13).unwrap(), 92);
        assert!(f_step(a(3), 0).is_err());
        assert!(matches!(
            f_step(a(3), u64::MAX),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn trajectories() {
        let t = trajectory(a(3), 12, 100).unwrap();
        assert_eq!(t.values, vec![12, 6, 3, 10, 5, 16, 8, 4, 2, 1]);
        assert_eq!(t.stop, StopReason::ReachedOne);

        let t = trajectory(a(3), 1, 100).unwrap();
        assert_eq!(t.values, vec![1, 4, 2, 1]);
        assert_eq!(t.stop, StopReason::CycleDetected);

        let t = trajectory(a(5), 7, 10).unwrap();
        assert_eq!(t.values, vec![7, 36, 18, 9, 46, 23, 116, 58, 29, 146, 73]);
        assert_eq!(t.stop, StopReason::StepBudgetExhausted);

        assert!(trajectory(a(3), 5, 0).is_err());
        assert!(trajectory(a(3), 0, 5).is_err());
    }

    #[test]
    fn entries() {
        let e = |x, row, col| tree_entry(a(x), TreeAddress::new(row, col).unwrap()).unwrap();
        assert_eq!(e(3, 3, 0), nat(16));
        assert_eq!(e(3, 3, 1), nat(5));
        assert_eq!(e(7, 5, 3), nat(36));
        assert!(TreeAddress::new(0, 1).is_err());
    }

    #[test]
    fn knots() {
        assert!(is_knot(a(3), &nat(40)));
        assert!(!is_knot(a(3), &nat(8)));
        assert!(is_knot(a(5), &nat(16)));
        assert!(!is_knot(a(3), &nat(7)));
    }

    #[test]
    fn knot_positions() {
        assert_eq!(knot_position(a(3), 5).unwrap(), Some(1));
        assert_eq!(knot_position(a(7), 9).unwrap(), Some(2));
        assert_eq!(knot_position(a(3), 3).unwrap(), None);
        assert!(knot_position(a(3), 4).is_err());
    }

    #[test]
    fn unbranched_rows() {
        assert!(is_unbranched(a(7), 5).unwrap());
        assert!(is_unbranched(a(5), 15).unwrap());
        assert!(!is_unbranched(a(3), 5).unwrap());
    }

    #[test]
    fn perfect_knots() {
        assert!(is_perfect_knot(a(3), &nat(10)));
        assert!(is_perfect_knot(a(3), &nat(136)));
        assert!(!is_perfect_knot(a(3), &nat(4)));
        assert!(!is_perfect_knot(a(3), &nat(12)));
    }

    #[test]
    fn row_cycles() {
        assert_eq!(detect_row_cycle(a(3), 1).unwrap(), Some(2));
        assert_eq!(detect_row_cycle(a(7), 1).unwrap(), Some(3));
        assert_eq!(detect_row_cycle(a(5), 1).unwrap(), None);
        assert_eq!(detect_row_cycle(a(3), 5).unwrap(), None);
    }

    #[test]
    fn knot_table_agrees_with_doubling() {
        for x in (1..=301u64).step_by(2) {
            let table = KnotTable::new(a(x));
            for b in (1..=4 * x).step_by(2) {
                assert_eq!(
                    table.knot_col(b),
                    knot_position(a(x), b).unwrap(),
                    "a = {x}, b = {b}"
                );
            }
        }
    }
}
