//! Multi-target regression toolkit.
//!
//! Implements the single-target baseline (ST), multi-target stacking (MTS)
//! and regressor chains (RC/ERC) together with their cross-validation
//! "corrected" variants (MTSC, RCC, ERCC), all on top of a built-in bagged
//! regression tree learner. The companion `eval` and `stats` modules provide
//! the RRMSE evaluation harness and the Friedman/Nemenyi/Wilcoxon comparison
//! machinery, and `experiment` ties everything into a reproducible runner.

pub mod data;
pub mod diagram;
pub mod error;
pub mod eval;
pub mod experiment;
pub mod matrix;
pub mod methods;
pub mod model;
pub mod rng;
pub mod stats;
pub mod tree;

pub use error::{Error, Result};
pub use matrix::Matrix;
