//! Compact fuzzy rule-based classification for large datasets.
//!
//! The learning pipeline has three stages:
//!
//! 1. [`transform`]: every numeric variable is mapped through its empirical
//!    CDF (estimated from q-quantiles of the training data), so each variable
//!    becomes approximately uniform on `[0, 1]`, where `L` uniform triangular
//!    fuzzy sets are laid out.
//! 2. [`induction`]: examples are discretized into itemsets, frequent and
//!    confident itemsets become candidate rules, and rules are weighted,
//!    filtered, capped per class and length, and pruned.
//! 3. [`chc`]: a CHC genetic algorithm selects a compact subset of the
//!    induced rules, evaluating fitness on the whole training set.
//!
//! All data-parallel work goes through [`engine`], whose fixed-order merges
//! make every output independent of the partition and thread counts.
//!
//! The [`cli`] module implements the `fit`, `predict`, `evaluate`, `cv` and
//! `bench` commands used by the `fuzzyrb` binary.

pub mod chc;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod engine;
pub mod error;
pub mod fuzzy;
pub mod induction;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod synthetic;
pub mod transform;

pub use config::Config;
pub use dataset::{AttributeKind, Dataset, PartitionedDataset, Schema};
pub use engine::Engine;
pub use error::{Error, Result};
pub use fuzzy::{ClassCosts, FuzzyRule, Prediction, RuleBase};
pub use induction::{InductionConfig, Item};
pub use metrics::ConfusionMatrix;
pub use model::ModelFile;
pub use transform::{FuzzyPartition, QuantileTable};
