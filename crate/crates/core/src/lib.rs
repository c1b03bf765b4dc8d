//! Finite L-algebras: construction, verification, classification and
//! enumeration up to isomorphism.
//!
//! An L-algebra is a set with a binary operation `·` and a logical unit `e`
//! such that `e·x = x`, `x·e = x·x = e`, the cycloid equation
//! `(x·y)·(x·z) = (y·x)·(y·z)` holds, and `x·y = y·x = e` forces `x = y`.
//! Tables live on `0..n` with the unit at `n-1`; see [`MulTable`].
//!
//! The crate is organised around the enumeration pipeline:
//!
//! * [`algebra`]: tables, axiom checks, class predicates, canonical forms.
//! * [`poset`], [`closure`], [`rmatrix`]: the splitting structures that
//!   partition the search into independent cases.
//! * [`search`]: the constraint solver with lex-leader symmetry breaking.
//! * [`linear`] and [`young`]: the two structural families with explicit
//!   combinatorial descriptions (Bell numbers, Young diagrams).
//! * [`dbio`]: the text database format and streaming tools.

pub mod algebra;
pub mod class;
pub mod closure;
pub mod dbio;
pub mod error;
pub mod linear;
pub mod perm;
pub mod poset;
pub mod rmatrix;
pub mod search;
pub mod young;

pub use algebra::{MulTable, VerifyReport, Violation};
pub use class::AlgebraClass;
pub use error::{Error, Result};
pub use perm::Perm;
pub use poset::PosetMatrix;
