//! Estimation of the headcount ratio from binned income data.
//!
//! Two fitted-distribution routes are provided: a per-bin linear density
//! with an exponential tail (uses bin means) and a generalized lambda
//! distribution matched to the binned percentiles (counts alone suffice).
//! Either fit yields a headcount estimate `F(p * median)` and a parametric
//! bootstrap interval; a full-sample reconstruction covers analyses that
//! need raw values.

mod boot;
mod fit;
mod gld;
mod li;
mod reconstruct;
mod table;

pub use boot::{grouped_bootstrap_interval, grouped_bootstrap_se, BootstrapVariant};
pub use fit::{grouped_headcount, GroupedFit, GroupedMethod};
pub use gld::{gld_fit, gld_fit_from_table, gld_fit_hinted, GldFit};
pub use li::{li_fit, ExpTail, LiFit, LinSegment, Piece};
pub use reconstruct::{reconstruct_sample, DEFAULT_TAIL_SHAPE};
pub use table::{Bin, GroupedTable};

use crate::error::Result;

/// Fits a table with the requested method.
pub fn fit_table(table: &GroupedTable, method: GroupedMethod) -> Result<GroupedFit> {
    match method {
        GroupedMethod::Li => Ok(GroupedFit::Li(li_fit(table)?)),
        GroupedMethod::Gld => Ok(GroupedFit::Gld(gld_fit_from_table(table)?)),
    }
}
