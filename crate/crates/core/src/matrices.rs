//! Standard, little and big Collatz matrices.
//!
//! All three are windows onto the tree matrix starting at `2·b_1 = 2`:
//! entry `(i, j)` is `2^j·(2i - 1)`. Shapes are derived arithmetically and
//! never by scanning a rendered grid.
//!
//! * standard: `a x ord2(a)`, the tile on which knots and unbranched rows repeat
//! * little: from 2 up to the lowest knot `a + 1`, so `v2(a+1)` columns
//!   and `(odd_part(a+1) + 1)/2` rows
//! * big: `a² x a·ord2(a)`, the tile on which perfect knots repeat

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::{odd_part, pow_mod, v2, Natural};
use crate::param::AlgoParam;
use crate::tree::{KnotTable, RowStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardShape {
    pub rows: u64,
    pub cols: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LittleShape {
    pub rows: u64,
    pub cols: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BigShape {
    pub rows: u64,
    pub cols: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShapeTriple {
    pub standard: StandardShape,
    pub little: LittleShape,
    pub big: BigShape,
}

pub fn standard_shape(a: AlgoParam) -> StandardShape {
    StandardShape {
        rows: a.get(),
        cols: crate::numth::ord2(a.get()).expect("AlgoParam is odd"),
    }
}

pub fn little_shape(a: AlgoParam) -> LittleShape {
    let lowest_knot = a.get() as u128 + 1;
    let cols = lowest_knot.trailing_zeros() as u64;
    let rows = (lowest_knot >> cols).div_ceil(2);
    LittleShape {
        rows: rows as u64,
        cols,
    }
}

fn big_from(a: AlgoParam, standard: StandardShape) -> Result<BigShape> {
    let overflow = Error::Overflow {
        op: "big_shape",
        value: a.get(),
    };
    Ok(BigShape {
        rows: a.get().checked_mul(a.get()).ok_or(overflow.clone())?,
        cols: a.get().checked_mul(standard.cols).ok_or(overflow)?,
    })
}

pub fn big_shape(a: AlgoParam) -> Result<BigShape> {
    big_from(a, standard_shape(a))
}

pub fn shapes(a: AlgoParam) -> Result<ShapeTriple> {
    let standard = standard_shape(a);
    Ok(ShapeTriple {
        standard,
        little: little_shape(a),
        big: big_from(a, standard)?,
    })
}

/// The little-matrix relation `1 + m_C + 2^n_L = m_L·2^(n_L+1)`, checked
/// in exact integers.
pub fn little_identity_holds(a: AlgoParam) -> bool {
    let l = little_shape(a);
    let lhs = 1 + a.get() as u128 + (1u128 << l.cols);
    lhs == l.rows as u128 * (1u128 << (l.cols + 1))
}

/// `n_L` and `m_L` recomputed from the valuation helpers.
pub fn little_shape_from_valuation(a: AlgoParam) -> Result<LittleShape> {
    let lowest_knot = a.get().checked_add(1).ok_or(Error::Overflow {
        op: "little_shape",
        value: a.get(),
    })?;
    Ok(LittleShape {
        rows: odd_part(lowest_knot)?.div_ceil(2),
        cols: v2(lowest_knot)? as u64,
    })
}

fn entry(op: &'static str, i: u64, j: u64, rows: u64, cols: u64) -> Result<Natural> {
    if i == 0 || j == 0 || i > rows || j > cols {
        return Err(Error::OutOfRange {
            op,
            row: i,
            col: j,
            rows,
            cols,
        });
    }
    Ok(Natural::from(2 * i - 1) << j as usize)
}

pub fn standard_entry(a: AlgoParam, i: u64, j: u64) -> Result<Natural> {
    let s = standard_shape(a);
    entry("standard_entry", i, j, s.rows, s.cols)
}

pub fn little_entry(a: AlgoParam, i: u64, j: u64) -> Result<Natural> {
    let s = little_shape(a);
    entry("little_entry", i, j, s.rows, s.cols)
}

pub fn big_entry(a: AlgoParam, i: u64, j: u64) -> Result<Natural> {
    let s = big_shape(a)?;
    entry("big_entry", i, j, s.rows, s.cols)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    Standard,
    Big,
}

/// Largest `a` for which a structure bitmap is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderBounds {
    pub standard: u64,
    pub big: u64,
}

impl Default for RenderBounds {
    fn default() -> Self {
        RenderBounds {
            standard: 9999,
            big: 99,
        }
    }
}

/// Knot and perfect-knot layout of a standard or big window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureBitmap {
    pub a: AlgoParam,
    pub window: Window,
    pub cols: u64,
    /// Rows `1..=m`; index 0 is row 1.
    pub rows: Vec<RowStructure>,
    /// `(row, col)` of every perfect knot, row-major. Empty for the
    /// standard window.
    pub perfect_positions: Vec<(u64, u64)>,
    period: u64,
}

impl StructureBitmap {
    pub fn row_count(&self) -> u64 {
        self.rows.len() as u64
    }

    /// Every doubling column of `row` holding a knot, within the window.
    pub fn knot_cols(&self, row: u64) -> impl Iterator<Item = u64> + '_ {
        let first = self.rows[(row - 1) as usize].knot_col;
        let period = self.period;
        let cols = self.cols;
        first
            .into_iter()
            .flat_map(move |j| (j..=cols).step_by(period as usize))
    }

    pub fn is_knot_at(&self, row: u64, col: u64) -> bool {
        match self.rows[(row - 1) as usize].knot_col {
            Some(j) => col >= j && (col - j).is_multiple_of(self.period),
            None => false,
        }
    }

    pub fn is_perfect_at(&self, row: u64, col: u64) -> bool {
        self.perfect_positions.binary_search(&(row, col)).is_ok()
    }

    pub fn unbranched_rows(&self) -> Vec<u64> {
        self.rows
            .iter()
            .zip(1u64..)
            .filter(|(r, _)| r.unbranched)
            .map(|(_, i)| i)
            .collect()
    }
}

/// Whether `2^col·(2row - 1)` is a perfect knot, for any `row`/`col`.
///
/// The generator `c = (2^j·b - 1)/a` is only needed modulo `a`, which we
/// read off `2^j·b mod a²`.
pub fn perfect_knot_at(table: &KnotTable, row: u64, col: u64) -> bool {
    let a = table.a();
    let b = 2 * row - 1;
    let Some(first) = table.knot_col(b) else {
        return false;
    };
    if a == 1 || col < first || !(col - first).is_multiple_of(table.order()) {
        return false;
    }
    let a_sq = a * a;
    let r = crate::numth::mul_mod(pow_mod(2, col, a_sq), b % a_sq, a_sq);
    let generator_residue = (r - 1) / a;
    table.is_unbranched(generator_residue)
}

pub fn structure_bitmap(a: AlgoParam, window: Window) -> Result<StructureBitmap> {
    structure_bitmap_bounded(a, window, RenderBounds::default())
}

pub fn structure_bitmap_bounded(
    a: AlgoParam,
    window: Window,
    bounds: RenderBounds,
) -> Result<StructureBitmap> {
    let a = a.at_least("structure_bitmap", 3)?;
    let (bound, what) = match window {
        Window::Standard => (bounds.standard, "standard bitmap"),
        Window::Big => (bounds.big, "big bitmap"),
    };
    if a.get() > bound {
        return Err(Error::RenderBound {
            what,
            a: a.get(),
            bound,
        });
    }
    let table = KnotTable::new(a);
    let (m, cols) = match window {
        Window::Standard => (a.get(), table.order()),
        Window::Big => {
            let big = big_shape(a)?;
            (big.rows, big.cols)
        }
    };
    let rows: Vec<RowStructure> = (1..=m)
        .map(|i| {
            let b = 2 * i - 1;
            let knot_col = table.knot_col(b);
            RowStructure {
                a,
                b,
                knot_col,
                unbranched: knot_col.is_none(),
            }
        })
        .collect();
    let mut perfect_positions = Vec::new();
    if window == Window::Big {
        for (row, r) in (1u64..).zip(&rows) {
            let Some(first) = r.knot_col else { continue };
            for col in (first..=cols).step_by(table.order() as usize) {
                if perfect_knot_at(&table, row, col) {
                    perfect_positions.push((row, col));
                }
            }
        }
    }
    Ok(StructureBitmap {
        a,
        window,
        cols,
        rows,
        perfect_positions,
        period: table.order(),
    })
}
