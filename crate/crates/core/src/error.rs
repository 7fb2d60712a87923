use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{op}: input must be positive, got 0")]
    Zero { op: &'static str },

    #[error("{op}: expected an odd value, got {value}")]
    Even { op: &'static str, value: u64 },

    #[error("{op}: {value} is below the minimum {min}")]
    TooSmall {
        op: &'static str,
        value: u64,
        min: u64,
    },

    #[error("{op}: index ({row}, {col}) lies outside the {rows}x{cols} window")]
    OutOfRange {
        op: &'static str,
        row: u64,
        col: u64,
        rows: u64,
        cols: u64,
    },

    #[error("lucas_lehmer: exponent {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{op}: arithmetic overflow at {value}")]
    Overflow { op: &'static str, value: u64 },

    #[error("factorize: cofactor {cofactor} resisted splitting within {iterations} iterations")]
    FactorizationTimeout { cofactor: BigUint, iterations: u64 },

    #[error("{what}: a = {a} exceeds the render bound {bound}")]
    RenderBound {
        what: &'static str,
        a: u64,
        bound: u64,
    },

    #[error("criterion/fermat equivalence broken at a = {0}")]
    EquivalenceBroken(u64),
}
