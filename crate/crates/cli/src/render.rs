//! Annotated text renderings of the tree matrix and the three tiles.
//!
//! Markers: `K` knot, `P` perfect knot (tree and big only), row flag `U`
//! for an unbranched row and `A` for the axis row.

use std::fmt::Write as _;

use clap::ValueEnum;
use collatz_matrix::matrices::{
    little_shape, perfect_knot_at, structure_bitmap, RenderBounds, StructureBitmap,
};
use collatz_matrix::tree::{tree_entry, KnotTable};
use collatz_matrix::{AlgoParam, Error as CoreError, Natural, TreeAddress, Window};
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Row and column caps for the tree matrix, which has no natural window.
pub const TREE_MAX_ROWS: u64 = 100_000;
pub const TREE_MAX_COLS: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    Tree,
    Standard,
    Little,
    Big,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Tree => "tree",
            MatrixKind::Standard => "standard",
            MatrixKind::Little => "little",
            MatrixKind::Big => "big",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Ascii,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderRequest {
    pub a: AlgoParam,
    pub matrix: MatrixKind,
    pub rows: Option<u64>,
    pub cols: Option<u64>,
    pub format: RenderFormat,
    /// ANSI colors in place of plain markers (ascii only).
    pub color: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mark {
    #[serde(rename = "K")]
    Knot,
    #[serde(rename = "P")]
    Perfect,
}

impl Mark {
    fn as_str(mark: Option<Mark>) -> &'static str {
        match mark {
            None => "",
            Some(Mark::Knot) => "K",
            Some(Mark::Perfect) => "P",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub col: u64,
    #[serde(serialize_with = "decimal")]
    pub value: Natural,
    pub mark: Option<Mark>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridRow {
    pub row: u64,
    pub b: u64,
    pub unbranched: bool,
    pub axis: bool,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub a: u64,
    pub matrix: &'static str,
    pub rows: u64,
    pub cols: u64,
    pub grid: Vec<GridRow>,
    #[serde(skip)]
    labels: Vec<String>,
}

fn decimal<S: serde::Serializer>(v: &Natural, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn bounded(what: &'static str, a: AlgoParam, bound: u64) -> CliResult<()> {
    if a.get() > bound {
        return Err(CoreError::RenderBound {
            what,
            a: a.get(),
            bound,
        }
        .into());
    }
    Ok(())
}

/// `requested` if it fits in `full`, else `full` when nothing was asked for.
fn crop(name: &str, requested: Option<u64>, full: u64) -> CliResult<u64> {
    match requested {
        None => Ok(full),
        Some(0) => Err(CliError::Usage(format!("--{name} must be at least 1"))),
        Some(n) if n > full => Err(CliError::Usage(format!(
            "--{name} {n} exceeds the window ({full})"
        ))),
        Some(n) => Ok(n),
    }
}

pub fn build_grid(req: &RenderRequest) -> CliResult<Grid> {
    match req.matrix {
        MatrixKind::Tree => tree_grid(req),
        MatrixKind::Standard => {
            let bitmap = structure_bitmap(req.a, Window::Standard)?;
            let (m, n) = (
                crop("rows", req.rows, bitmap.row_count())?,
                crop("cols", req.cols, bitmap.cols)?,
            );
            Ok(window_grid(req, &bitmap, m, n, false))
        }
        MatrixKind::Little => {
            let bitmap = structure_bitmap(req.a, Window::Standard)?;
            let little = little_shape(req.a);
            let (m, n) = (
                crop("rows", req.rows, little.rows)?,
                crop("cols", req.cols, little.cols)?,
            );
            let mut grid = window_grid(req, &bitmap, m, n, false);
            for row in &mut grid.grid {
                row.axis = false;
            }
            Ok(grid)
        }
        MatrixKind::Big => {
            bounded("big render", req.a, RenderBounds::default().big)?;
            let bitmap = structure_bitmap(req.a, Window::Big)?;
            let (m, n) = (
                crop("rows", req.rows, bitmap.row_count())?,
                crop("cols", req.cols, bitmap.cols)?,
            );
            Ok(window_grid(req, &bitmap, m, n, true))
        }
    }
}

fn window_grid(
    req: &RenderRequest,
    bitmap: &StructureBitmap,
    m: u64,
    n: u64,
    perfect: bool,
) -> Grid {
    let axis = bitmap.row_count().div_ceil(2);
    let grid = (1..=m)
        .map(|i| {
            let structure = &bitmap.rows[(i - 1) as usize];
            let cells = (1..=n)
                .map(|j| {
                    let mark = if perfect && bitmap.is_perfect_at(i, j) {
                        Some(Mark::Perfect)
                    } else if bitmap.is_knot_at(i, j) {
                        Some(Mark::Knot)
                    } else {
                        None
                    };
                    Cell {
                        col: j,
                        value: Natural::from(structure.b) << j as usize,
                        mark,
                    }
                })
                .collect();
            GridRow {
                row: i,
                b: structure.b,
                unbranched: structure.unbranched,
                axis: i == axis,
                cells,
            }
        })
        .collect();
    Grid {
        a: req.a.get(),
        matrix: req.matrix.as_str(),
        rows: m,
        cols: n,
        grid,
        labels: (1..=n).map(|j| format!("j{j}")).collect(),
    }
}

fn tree_grid(req: &RenderRequest) -> CliResult<Grid> {
    let (Some(m), Some(n)) = (req.rows, req.cols) else {
        return Err(CliError::Usage(
            "the tree matrix is unbounded; pass both --rows and --cols".into(),
        ));
    };
    if m == 0 || m > TREE_MAX_ROWS || n == 0 || n > TREE_MAX_COLS {
        return Err(CliError::Usage(format!(
            "tree window {m}x{n} outside 1..={TREE_MAX_ROWS} rows, 1..={TREE_MAX_COLS} columns"
        )));
    }
    bounded("tree render", req.a, RenderBounds::default().standard)?;
    let table = KnotTable::new(req.a);
    let order = table.order();
    let grid = (1..=m)
        .map(|i| -> CliResult<GridRow> {
            let b = 2 * i - 1;
            let first = table.knot_col(b);
            let cells = (0..n)
                .map(|c| -> CliResult<Cell> {
                    let mark = match c {
                        // the knot column value a·b + 1 is generated by b itself
                        0 if table.is_unbranched(b) => Some(Mark::Perfect),
                        0 => Some(Mark::Knot),
                        1 => None,
                        c => {
                            let j = c - 1;
                            let knot = first.is_some_and(|f| j >= f && (j - f) % order == 0);
                            if !knot {
                                None
                            } else if perfect_knot_at(&table, i, j) {
                                Some(Mark::Perfect)
                            } else {
                                Some(Mark::Knot)
                            }
                        }
                    };
                    Ok(Cell {
                        col: c,
                        value: tree_entry(req.a, TreeAddress::new(i, c)?)?,
                        mark,
                    })
                })
                .collect::<CliResult<_>>()?;
            Ok(GridRow {
                row: i,
                b,
                unbranched: first.is_none(),
                axis: false,
                cells,
            })
        })
        .collect::<CliResult<_>>()?;
    let labels = (0..n)
        .map(|c| match c {
            0 => "knot".to_string(),
            1 => "b".to_string(),
            c => format!("j{}", c - 1),
        })
        .collect();
    Ok(Grid {
        a: req.a.get(),
        matrix: req.matrix.as_str(),
        rows: m,
        cols: n,
        grid,
        labels,
    })
}

const RED: &str = "\x1b[31m";
const RED_BOXED: &str = "\x1b[1;4;31m";
const BLUE: &str = "\x1b[34m";
const RESET: &str = "\x1b[0m";

impl Grid {
    pub fn to_ascii(&self, color: bool) -> String {
        let row_w = digits(self.rows).max(3);
        let b_w = self.grid.last().map_or(1, |r| r.b.to_string().len()).max(1);
        let texts: Vec<Vec<String>> = self
            .grid
            .iter()
            .map(|r| r.cells.iter().map(|c| c.value.to_string()).collect())
            .collect();
        // value width; every cell then takes one more character for its marker
        let widths: Vec<usize> = self
            .labels
            .iter()
            .enumerate()
            .map(|(k, label)| {
                let value_w = texts.iter().map(|t| t[k].len()).max().unwrap_or(0);
                value_w.max(label.len())
            })
            .collect();

        let mut out = String::new();
        let _ = writeln!(
            out,
            "a={} matrix={} rows={} cols={}",
            self.a, self.matrix, self.rows, self.cols
        );
        let _ = writeln!(
            out,
            "# K knot, P perfect knot, U unbranched row, A axis row"
        );
        let mut header = format!("{:>row_w$} {:>b_w$} fl", "row", "b");
        for (label, w) in self.labels.iter().zip(&widths) {
            let _ = write!(header, " {label:>w$} ");
        }
        out.push_str(header.trim_end());
        out.push('\n');

        for (r, text) in self.grid.iter().zip(&texts) {
            let flags = format!(
                "{}{}",
                if r.unbranched { 'U' } else { '-' },
                if r.axis { 'A' } else { '-' }
            );
            let mut line = format!("{:>row_w$} {:>b_w$} ", r.row, r.b);
            if color && r.unbranched {
                let _ = write!(line, "{BLUE}{flags}{RESET}");
            } else {
                line.push_str(&flags);
            }
            for ((cell, value), w) in r.cells.iter().zip(text).zip(&widths) {
                let mark = Mark::as_str(cell.mark);
                let _ = write!(line, " {}", " ".repeat(w - value.len()));
                match (color, cell.mark) {
                    (true, Some(Mark::Knot)) => {
                        let _ = write!(line, "{RED}{value}{RESET} ");
                    }
                    (true, Some(Mark::Perfect)) => {
                        let _ = write!(line, "{RED_BOXED}{value}{RESET} ");
                    }
                    (true, None) => {
                        let _ = write!(line, "{value} ");
                    }
                    (false, _) => {
                        let _ = write!(line, "{value}{mark:1}");
                    }
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["row", "b", "unbranched", "axis", "col", "value", "mark"])
            .map_err(csv_err)?;
        for r in &self.grid {
            for c in &r.cells {
                w.write_record([
                    r.row.to_string(),
                    r.b.to_string(),
                    r.unbranched.to_string(),
                    r.axis.to_string(),
                    c.col.to_string(),
                    c.value.to_string(),
                    Mark::as_str(c.mark).to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Output(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("ascii csv"))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("grid serializes");
        s.push('\n');
        s
    }

    /// `(row, col)` of every cell carrying `mark`, row-major.
    pub fn positions(&self, mark: Mark) -> Vec<(u64, u64)> {
        self.grid
            .iter()
            .flat_map(|r| {
                r.cells
                    .iter()
                    .filter(move |c| c.mark == Some(mark))
                    .map(move |c| (r.row, c.col))
            })
            .collect()
    }
}

pub(crate) fn csv_err(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::Output(io),
        other => CliError::Output(std::io::Error::other(format!("{other:?}"))),
    }
}

fn digits(n: u64) -> usize {
    n.to_string().len()
}

pub fn render(req: &RenderRequest) -> CliResult<String> {
    let grid = build_grid(req)?;
    match req.format {
        RenderFormat::Ascii => Ok(grid.to_ascii(req.color)),
        RenderFormat::Csv => grid.to_csv(),
        RenderFormat::Json => Ok(grid.to_json()),
    }
}
