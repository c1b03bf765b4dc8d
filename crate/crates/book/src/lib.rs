//! The guide in `book/`, with every listing compiled and run as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/tables.md")]
pub mod tables {}

#[doc = include_str!("../../../book/src/isomorphism.md")]
pub mod isomorphism {}

#[doc = include_str!("../../../book/src/search.md")]
pub mod search {}

#[doc = include_str!("../../../book/src/splitting.md")]
pub mod splitting {}

#[doc = include_str!("../../../book/src/linear.md")]
pub mod linear {}

#[doc = include_str!("../../../book/src/young.md")]
pub mod young {}

#[doc = include_str!("../../../book/src/database.md")]
pub mod database {}
