//! Exact combinatorics of partitions, p-blocks, cyclotomic generic degrees and
//! symbols, with brute-force verifiers for the p'-degree statements built on
//! them.

pub mod arith;
pub mod census;
pub mod cyclo;
pub mod degrees;
pub mod dsl;
pub mod error;
pub mod partition;
pub mod report;
pub mod symbol;
pub mod tables;
pub mod unipotent;
pub mod verify;

pub use error::{Error, Result};
pub use partition::Partition;
