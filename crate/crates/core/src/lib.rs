//! Generalized Collatz maps `f_a(n) = n/2 | a·n + 1` and the matrices that
//! tile their tree: knot and unbranched-row structure, symmetry classes,
//! the order-of-2 primality criterion and its rank, and the singular-width
//! test on Mersenne exponents.

pub mod criterion;
mod error;
pub mod matrices;
pub mod mersenne;
pub mod numth;
mod param;
pub mod record;
pub mod suite;
pub mod symmetry;
pub mod tree;

pub use criterion::{NumberClass, Rank, RankPopulation};
pub use error::{Error, Result};
pub use matrices::{BigShape, LittleShape, ShapeTriple, StandardShape, StructureBitmap, Window};
pub use numth::{Factorization, Natural};
pub use param::{odd_range, AlgoParam};
pub use record::ScanRecord;
pub use symmetry::{PatternFlags, SymmetryClass, SymmetryLabel};
pub use tree::{RowStructure, StopReason, Trajectory, TreeAddress};
