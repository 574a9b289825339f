//! Estimation and inference for the relative-poverty headcount ratio.
//!
//! The headcount ratio `H_p` is the share of a population whose income falls
//! below `p` times the median income. This crate provides:
//!
//! - [`dists`]: theoretical income distributions with exact cdf / pdf /
//!   quantile functions, inverse-transform sampling and closed-form headcount
//!   ratios,
//! - [`estimate`]: complete-data point estimation (sample headcount, kernel
//!   quantile-density and density estimators, approximate standard errors),
//! - [`intervals`]: eight confidence-interval constructions for `H_p` plus
//!   two-sample difference intervals,
//! - [`grouped`]: estimation from binned data (linear-interpolation density
//!   with exponential tail, generalized lambda percentile fits, grouped
//!   bootstrap, sample reconstruction),
//! - [`transfer`]: the income-transfer analysis (shortfall, flat tax rate,
//!   transfer map),
//! - [`simlab`]: a deterministic Monte Carlo engine for coverage and bias
//!   studies.
//!
//! The crate is `no_std`-compatible (with `alloc`); the `std` feature (on by
//! default) adds a threaded study runner and wall-clock timings.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dists;
pub mod error;
pub mod estimate;
pub mod grouped;
pub mod intervals;
pub mod math;
pub mod simlab;
pub mod transfer;

pub use dists::{Fraction, IncomeModel};
pub use error::{Error, Result};
pub use estimate::Sample;
pub use intervals::{BootstrapConfig, CiMethod, IntervalEstimate};
