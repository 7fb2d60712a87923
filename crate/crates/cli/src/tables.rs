//! Reference tables recomputed from scratch, one typed row per line.

use clap::ValueEnum;
use collatz_matrix::criterion::{pseudoprime_scan, RankCensus};
use collatz_matrix::matrices::shapes;
use collatz_matrix::mersenne::{nc_count_exact, nc_histogram_bounded};
use collatz_matrix::numth::is_prime;
use collatz_matrix::symmetry::classify;
use collatz_matrix::{odd_range, Rank, RankPopulation, SymmetryLabel};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::render::csv_err;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
    Markdown,
}

pub const SHAPES_DEFAULT: u64 = 61;
pub const RANKS_DEFAULT: u64 = 51;
pub const RANK_FREQUENCY_DEFAULT: u64 = 1_000_000;
pub const RANK_FREQUENCY_MAX_RANK: u64 = 18;
pub const PSEUDOPRIMES_DEFAULT: u64 = 5461;
pub const WIDTHS_DEFAULT: u64 = 19;
/// Largest `a` in the bounded width count.
pub const WIDTHS_A_MAX: u64 = 1_999_999;

pub fn default_bound(id: u8) -> Option<u64> {
    Some(match id {
        1 => SHAPES_DEFAULT,
        2 => RANKS_DEFAULT,
        3 => RANK_FREQUENCY_DEFAULT,
        4 => PSEUDOPRIMES_DEFAULT,
        5 => WIDTHS_DEFAULT,
        _ => return None,
    })
}

/// Shapes and symmetry label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeRow {
    pub a: u64,
    #[serde(rename = "m_C")]
    pub m_c: u64,
    #[serde(rename = "n_C")]
    pub n_c: u64,
    #[serde(rename = "m_L")]
    pub m_l: u64,
    #[serde(rename = "n_L")]
    pub n_l: u64,
    #[serde(rename = "m_B")]
    pub m_b: u64,
    #[serde(rename = "n_B")]
    pub n_b: u64,
    pub symmetry: SymmetryLabel,
}

/// Rank `(m_C - 1)/n_C` of each odd `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRow {
    pub a: u64,
    pub prime: bool,
    #[serde(rename = "m_C")]
    pub m_c: u64,
    #[serde(rename = "n_C")]
    pub n_c: u64,
    /// Lowest terms, `n` or `n/d`.
    pub rank: String,
    /// Truncated to three places; integers stay bare.
    pub rank_decimal: String,
}

/// How many criterion holders up to the bound have each rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFrequencyRow {
    pub rank: u64,
    /// Primes and base-2 pseudoprimes together.
    pub frequency: u64,
    pub primes: u64,
    pub pseudoprimes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoprimeRow {
    pub a: u64,
    #[serde(rename = "m_C")]
    pub m_c: u64,
    #[serde(rename = "n_C")]
    pub n_c: u64,
    #[serde(rename = "m_L")]
    pub m_l: u64,
    #[serde(rename = "n_L")]
    pub n_l: u64,
    pub rank: u64,
}

/// Odd `a` with `ord2(a) = n_C`: counted over `a <= WIDTHS_A_MAX` and
/// exactly over the divisors of `2^n_C - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthRow {
    #[serde(rename = "n_C")]
    pub n_c: u64,
    pub frequency: u64,
    pub exact: u64,
    /// Space-separated, ascending.
    pub witnesses: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Table {
    Shapes(Vec<ShapeRow>),
    Ranks(Vec<RankRow>),
    RankFrequency(Vec<RankFrequencyRow>),
    Pseudoprimes(Vec<PseudoprimeRow>),
    Widths(Vec<WidthRow>),
}

pub fn rank_decimal(rank: Rank) -> String {
    match rank.as_integer() {
        Some(n) => n.to_string(),
        None => rank.truncated_decimal(3),
    }
}

pub fn shape_rows(bound: u64) -> CliResult<Vec<ShapeRow>> {
    odd_range(1, bound)
        .map(|a| {
            let s = shapes(a)?;
            Ok(ShapeRow {
                a: a.get(),
                m_c: s.standard.rows,
                n_c: s.standard.cols,
                m_l: s.little.rows,
                n_l: s.little.cols,
                m_b: s.big.rows,
                n_b: s.big.cols,
                symmetry: classify(a).label,
            })
        })
        .collect()
}

pub fn rank_rows(bound: u64) -> Vec<RankRow> {
    odd_range(1, bound)
        .map(|a| {
            let s = collatz_matrix::matrices::standard_shape(a);
            let rank = Rank::new(s.rows - 1, s.cols);
            RankRow {
                a: a.get(),
                prime: is_prime(a.get()),
                m_c: s.rows,
                n_c: s.cols,
                rank: rank.to_string(),
                rank_decimal: rank_decimal(rank),
            }
        })
        .collect()
}

pub fn rank_frequency_rows(bound: u64, max_rank: u64) -> CliResult<Vec<RankFrequencyRow>> {
    if bound < 3 {
        return Err(CliError::Usage(
            "table 3 needs a bound of at least 3".into(),
        ));
    }
    let census = RankCensus::build(bound);
    let all = census.frequency(max_rank, RankPopulation::CriterionHolders);
    let primes = census.frequency(max_rank, RankPopulation::Primes);
    Ok((1..=max_rank)
        .map(|r| RankFrequencyRow {
            rank: r,
            frequency: all.count(r),
            primes: primes.count(r),
            pseudoprimes: all.count(r) - primes.count(r),
        })
        .collect())
}

pub fn pseudoprime_rows(bound: u64) -> CliResult<Vec<PseudoprimeRow>> {
    Ok(pseudoprime_scan(bound)?
        .into_iter()
        .map(|r| PseudoprimeRow {
            a: r.a,
            m_c: r.m_c,
            n_c: r.n_c,
            m_l: r.m_l,
            n_l: r.n_l,
            rank: r.rank_num / r.rank_den,
        })
        .collect())
}

pub fn width_rows(n_max: u64) -> CliResult<Vec<WidthRow>> {
    if n_max == 0 {
        return Err(CliError::Usage(
            "table 5 needs a bound of at least 1".into(),
        ));
    }
    nc_histogram_bounded(n_max, WIDTHS_A_MAX)
        .into_iter()
        .map(|c| {
            let exact = nc_count_exact(c.n)?;
            Ok(WidthRow {
                n_c: c.n,
                frequency: c.count,
                exact: exact.count(),
                witnesses: exact
                    .witnesses
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
            })
        })
        .collect()
}

pub fn build_table(id: u8, bound: Option<u64>) -> CliResult<Table> {
    let bound = bound
        .or(default_bound(id))
        .ok_or_else(|| CliError::Usage(format!("no table {id}; tables are 1 to 5")))?;
    Ok(match id {
        1 => Table::Shapes(shape_rows(bound)?),
        2 => Table::Ranks(rank_rows(bound)),
        3 => Table::RankFrequency(rank_frequency_rows(bound, RANK_FREQUENCY_MAX_RANK)?),
        4 => Table::Pseudoprimes(pseudoprime_rows(bound)?),
        5 => Table::Widths(width_rows(bound)?),
        _ => unreachable!("id checked by default_bound"),
    })
}

fn to_csv<T: Serialize>(rows: &[T], header: &[&str]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}

fn csv_to_markdown(csv_text: &str) -> CliResult<String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(csv_text.as_bytes());
    let mut out = String::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let cells: Vec<&str> = record.iter().collect();
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
        if k == 0 {
            out.push_str(&format!("|{}\n", "---|".repeat(cells.len())));
        }
    }
    Ok(out)
}

fn to_json<T: Serialize>(rows: &[T]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

impl Table {
    pub fn header(&self) -> &'static [&'static str] {
        match self {
            Table::Shapes(_) => &["a", "m_C", "n_C", "m_L", "n_L", "m_B", "n_B", "symmetry"],
            Table::Ranks(_) => &["a", "prime", "m_C", "n_C", "rank", "rank_decimal"],
            Table::RankFrequency(_) => &["rank", "frequency", "primes", "pseudoprimes"],
            Table::Pseudoprimes(_) => &["a", "m_C", "n_C", "m_L", "n_L", "rank"],
            Table::Widths(_) => &["n_C", "frequency", "exact", "witnesses"],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Table::Shapes(r) => r.len(),
            Table::Ranks(r) => r.len(),
            Table::RankFrequency(r) => r.len(),
            Table::Pseudoprimes(r) => r.len(),
            Table::Widths(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let h = self.header();
        match self {
            Table::Shapes(r) => to_csv(r, h),
            Table::Ranks(r) => to_csv(r, h),
            Table::RankFrequency(r) => to_csv(r, h),
            Table::Pseudoprimes(r) => to_csv(r, h),
            Table::Widths(r) => to_csv(r, h),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Table::Shapes(r) => to_json(r),
            Table::Ranks(r) => to_json(r),
            Table::RankFrequency(r) => to_json(r),
            Table::Pseudoprimes(r) => to_json(r),
            Table::Widths(r) => to_json(r),
        }
    }

    pub fn render(&self, format: TableFormat) -> CliResult<String> {
        match format {
            TableFormat::Csv => self.to_csv(),
            TableFormat::Json => Ok(self.to_json()),
            TableFormat::Markdown => csv_to_markdown(&self.to_csv()?),
        }
    }
}

/// Parse a CSV table back into rows.
pub fn parse_csv<T: for<'de> Deserialize<'de>>(text: &str) -> CliResult<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(csv_err))
        .collect()
}
