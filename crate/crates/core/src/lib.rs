//! Exact counting, bounds and extremal search for rainbow sum-free
//! colorings of subsets of `[n]`.
//!
//! A coloring of `A` is rainbow sum-free when no restricted triple
//! `a < b < c`, `a + b = c`, inside `A` gets three distinct colors.
//! `g(A, r)` counts such `r`-colorings and `g(n, r)` maximizes it over `A ⊆ [n]`.

pub mod bigcount;
pub mod config;
pub mod counting;
pub mod error;
pub mod literal;
pub mod ratio;
pub mod bounds;
pub mod cache;
pub mod cli;
pub mod containers;
pub mod real;
pub mod search;
pub mod set;
pub mod structure;
pub mod templates;
pub mod triples;

pub use bigcount::BigCount;
pub use error::{Error, Result};
pub use set::IntegerSet;
