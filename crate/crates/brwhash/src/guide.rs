//! The user guide, one module per chapter.
//!
//! The chapters live as an mdbook under `book/` at the repository root;
//! each module here includes its Markdown source verbatim, so every Rust
//! code fence in the book compiles and runs under `cargo test --doc`. That
//! is the synchronization mechanism: the book cannot drift from the API,
//! because a drifted snippet is a failing test. Chapters without Rust
//! fences (the command-line reference) ride along for rendered docs.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/field-arithmetic.md")]
pub mod field_arithmetic {}

#[doc = include_str!("../../../book/src/polyhash.md")]
pub mod polyhash_chapter {}

#[doc = include_str!("../../../book/src/brw-evaluation.md")]
pub mod brw_evaluation {}

#[doc = include_str!("../../../book/src/decimation.md")]
pub mod decimation {}

#[doc = include_str!("../../../book/src/security-lab.md")]
pub mod security_lab {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod command_line {}
