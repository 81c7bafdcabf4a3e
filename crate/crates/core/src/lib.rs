//! Point location in arrangements of homogeneous hyperplanes using
//! generalized comparison queries `sign <α h′ − β h″, x>`.
//!
//! The crate provides the exact arithmetic and linear algebra the locators
//! need, Forster scaling, the inference engine that decides which labels a
//! set of answers forces, the query/oracle layer, the randomized and
//! tree-based locators, and a benchmark harness.

pub mod bench;
pub mod exact;
pub mod forster;
pub mod inference;
pub mod instances;
pub mod ldt;
pub mod linalg;
pub mod oracle;
pub mod sign;

pub use sign::{Sign, SignVector};
