//! Exact and log-space computation of skew standard Young tableaux counts,
//! the character sums that express them, and the bounds built on top.
//!
//! The crate is organised bottom-up:
//!
//! - [`partitions`]: diagrams, skew shapes and their statistics.
//! - [`characters`]: symmetric group characters and conjugacy classes.
//! - [`exact_count`]: `f^λ`, `f^{λ/μ}` by four routes, `A_{λ/μ}` and level sets.
//! - [`estimates`]: truncated character sums, character bounds and the `B_{λ/μ}` bound.
//! - [`kimoh`]: the five-parameter product-formula shapes.
//! - [`asymptotics`]: log-space evaluation along parameterised shape families.
//! - [`selftest`]: the exhaustive invariant suite behind the `selftest` subcommand.

pub mod asymptotics;
pub mod characters;
pub mod error;
pub mod estimates;
pub mod exact_count;
pub mod kimoh;
pub mod logspace;
pub mod partitions;
pub mod rational;
pub mod selftest;

pub use error::{Error, Result};
pub use partitions::{Partition, SkewShape};
