//! The chapters of the book in `book/`, attached here so that every code
//! block in the guide compiles and runs under `cargo test` as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/finite-fields.md")]
pub mod finite_fields {}

#[doc = include_str!("../../../book/src/portraits.md")]
pub mod portraits {}

#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}

#[doc = include_str!("../../../book/src/groups.md")]
pub mod groups {}

#[doc = include_str!("../../../book/src/automorphisms.md")]
pub mod automorphisms {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
