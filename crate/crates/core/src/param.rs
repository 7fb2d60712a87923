use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The odd multiplier `a` selecting the map `f_a(n) = n/2 | a·n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct AlgoParam(u64);

impl AlgoParam {
    pub fn new(a: u64) -> Result<Self> {
        match a {
            0 => Err(Error::Zero { op: "AlgoParam" }),
            a if a % 2 == 0 => Err(Error::Even {
                op: "AlgoParam",
                value: a,
            }),
            a => Ok(AlgoParam(a)),
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub(crate) fn at_least(self, op: &'static str, min: u64) -> Result<Self> {
        if self.0 < min {
            return Err(Error::TooSmall {
                op,
                value: self.0,
                min,
            });
        }
        Ok(self)
    }
}

impl TryFrom<u64> for AlgoParam {
    type Error = Error;

    fn try_from(a: u64) -> Result<Self> {
        AlgoParam::new(a)
    }
}

impl From<AlgoParam> for u64 {
    fn from(a: AlgoParam) -> u64 {
        a.0
    }
}

impl fmt::Display for AlgoParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Odd values `a` in `[lo, hi]`.
pub fn odd_range(lo: u64, hi: u64) -> impl Iterator<Item = AlgoParam> + Clone {
    let start = lo.max(1) | 1;
    (start..=hi).step_by(2).map(AlgoParam)
}
