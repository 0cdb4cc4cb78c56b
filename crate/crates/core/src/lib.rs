//! Executable recurrence theory for finitely generated group actions on
//! zero-dimensional compact spaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`group`]: canonical group elements, word length, balls, K-sets, cone
//!   approximations and windowed thick/syndetic tests.
//! - [`cantor`]: spaces presented as refining chains of finite clopen
//!   partitions, addressable points and the clopen algebra.
//! - [`flow`]: concrete flows (odometers, substitution subshifts, the
//!   one-dot subshift, finite permutation actions, products) with return-time
//!   sets and orbit-closure approximations.
//! - [`analyzers`]: tri-state certified checkers for each recurrence
//!   condition and the cross-checker that enforces their equivalence.
//! - [`config`] / [`report`]: the batch-runner configuration and JSON reports.
//! - [`oracle`]: brute-force reference computations, written without any of
//!   the library's code paths.

pub mod analyzers;
pub mod cantor;
pub mod config;
mod error;
pub mod flow;
pub mod group;
pub mod oracle;
pub mod report;
pub mod verdict;

pub use error::{Error, Result};
