use serde::{Deserialize, Serialize};

use crate::criterion::{classify_number, NumberClass, Rank};
use crate::error::Result;
use crate::matrices::shapes;
use crate::param::AlgoParam;
use crate::symmetry::{classify, SymmetryLabel};

/// One flat row of per-`a` results. Field order is the serialized order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
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
    pub rank_num: u64,
    pub rank_den: u64,
    pub criterion: bool,
    pub class: NumberClass,
}

impl ScanRecord {
    pub fn build(a: AlgoParam) -> Result<Self> {
        let s = shapes(a)?;
        let rank = Rank::new(s.standard.rows - 1, s.standard.cols);
        Ok(ScanRecord {
            a: a.get(),
            m_c: s.standard.rows,
            n_c: s.standard.cols,
            m_l: s.little.rows,
            n_l: s.little.cols,
            m_b: s.big.rows,
            n_b: s.big.cols,
            symmetry: classify(a).label,
            rank_num: rank.numerator,
            rank_den: rank.denominator,
            criterion: rank.is_integer(),
            class: classify_number(a)?,
        })
    }

    pub fn rank(&self) -> Rank {
        Rank::new(self.rank_num, self.rank_den)
    }
}
