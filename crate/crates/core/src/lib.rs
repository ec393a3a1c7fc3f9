//! Numerical semigroups: Frobenius number, genus, Apéry sets,
//! pseudo-Frobenius numbers and type.
//!
//! Two independent evaluators are provided. [`semigroup`] works for any
//! generating set by computing the Apéry set with shortest paths over residue
//! classes. [`closed_forms`] evaluates exact formulas for the family
//! `(a, ba + d, b²a + (b²-1)/(b-1)·d, …, b^k·a + (b^k-1)/(b-1)·d)` through
//! greedy presentations over the repunit coin system from [`changemaking`].
//! [`verify`] checks one against the other.

pub mod changemaking;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod families;
pub mod semigroup;
pub mod verify;

pub use changemaking::{CoinSystem, GreedyPresentation, Orderliness};
pub use closed_forms::FamilyParams;
pub use error::{Error, Result};
pub use families::{FamilyName, FamilySpec};
pub use semigroup::{apery_set, AperySet, Engine, GeneratorList, OracleConfig, SemigroupReport};
pub use verify::{GridSpec, VerifyReport};
