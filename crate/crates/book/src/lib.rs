//! The chapters of the guide in `book/src`, compiled here so that
//! `cargo test --doc` runs every snippet.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/degrees.md")]
pub mod degrees {}
#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}
#[doc = include_str!("../../../book/src/blocks.md")]
pub mod blocks {}
#[doc = include_str!("../../../book/src/main-check.md")]
pub mod main_check {}
#[doc = include_str!("../../../book/src/splitting.md")]
pub mod splitting {}
#[doc = include_str!("../../../book/src/bijection.md")]
pub mod bijection {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
