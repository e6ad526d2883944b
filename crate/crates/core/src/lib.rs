//! Association rule mining with raw and standardized interestingness
//! measures.
//!
//! A rule `A -> B` is described by its support triple `(P(A), P(B), P(AB))`.
//! Raw lift, cosine, Yule's Q and Gini depend on the marginals, so this crate
//! also computes, for each measure, the smallest and largest value it could
//! take given the marginals and the mining thresholds, and rescales the raw
//! value into `[0, 1]` inside that window.
//!
//! Runnable examples live in `examples/`:
//!
//! - `mine_basket`: mine and score rules from an in-memory basket file
//! - `score_rules`: score support triples under hypothetical thresholds
//! - `standardize_bounds`: inspect the bound window of each measure
//! - `compare_rankings`: tau-b between raw and standardized rankings
//! - `random_transactions`: seeded random data and what it mines to
//! - `lift_curve`: the lift bound curves for `P(A) = P(B)`

pub mod apriori;
pub mod cli;
pub mod error;
pub mod measures;
pub mod randgen;
pub mod rankcompare;
pub mod report;
pub mod standardize;
pub mod transactions;

pub use apriori::{mine_rules, MineOptions, Rule, Thresholds};
pub use error::{Error, Result};
pub use measures::{Measure, SupportTriple};
pub use rankcompare::{tau_b, tau_b_by_decile, TauBReport};
pub use standardize::{score, Bounds, MeasureReport, StandardizedScore};
pub use transactions::{Itemset, Transaction, TransactionSet};
