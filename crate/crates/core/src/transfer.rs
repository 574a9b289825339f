//! Income-transfer analysis: raising every income below the relative
//! poverty line up to the line, funded by a flat tax on incomes above a
//! cutoff.
//!
//! The per-poor-person shortfall is `T = L - E[X | X < L]`; with cutoff
//! `c = Q(u_c)` the balancing flat rate solves `T = r E[X | X > c]`. The
//! transfer map is
//!
//! ```text
//! t(x) = L        for x <= L
//!        x        for L < x <= c
//!        (1-r) x  for x > c
//! ```

use alloc::format;
use alloc::vec::Vec;

use crate::dists::{Fraction, IncomeModel};
use crate::error::{Error, Result};
use crate::estimate::{headcount_estimate, Sample};

/// A resolved transfer scheme for one income model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferPlan {
    /// Relative poverty line `p * median`.
    pub poverty_line: f64,
    /// Tax threshold `Q(u_c)`.
    pub cutoff: f64,
    /// Quantile level of the cutoff.
    pub cutoff_quantile: f64,
    /// Flat tax rate on incomes above the cutoff.
    pub rate: f64,
    /// Per-poor-person shortfall `L - E[X | X < L]`.
    pub shortfall: f64,
    /// Fraction of the median defining the line.
    pub fraction: f64,
}

/// Balance report contrasting the per-capita reading of the funding
/// equation with the population-weighted one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferBudget {
    /// `T`, the per-poor-person shortfall.
    pub shortfall: f64,
    /// Rate from `T = r E[X | X > c]` (per-capita balance).
    pub per_capita_rate: f64,
    /// Rate from `H T = (1 - u_c) r E[X | X > c]` (group-weighted balance).
    pub weighted_rate: f64,
    /// `E[X | X < L]`.
    pub mean_below_line: f64,
    /// `E[X | X > c]`.
    pub mean_above_cutoff: f64,
    /// Poor share `H_p`.
    pub poor_share: f64,
    /// Taxed share `1 - u_c`.
    pub taxed_share: f64,
}

/// Post-transfer headcount readings for a transferred sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostTransferCheck {
    /// Share strictly below the plan's poverty line; the transfer puts an
    /// atom exactly on the line, so this is the reading under which the
    /// post-transfer headcount vanishes.
    pub strict_below_line: f64,
    /// The standard estimator (ties at `p * sample median` count as poor),
    /// which counts the atom.
    pub estimator_h_hat: f64,
}

/// Builds the plan for a model: line, cutoff, shortfall and balancing rate.
///
/// The cutoff quantile must exceed 1/2 (the tax base sits above the
/// median); a rate at or above one is reported as infeasible.
pub fn plan_transfer(model: &IncomeModel, p: Fraction, cutoff_quantile: f64) -> Result<TransferPlan> {
    if !(cutoff_quantile > 0.5 && cutoff_quantile < 1.0) {
        return Err(Error::Domain(format!(
            "cutoff quantile must lie in (0.5, 1), got {cutoff_quantile}"
        )));
    }
    let median = model.median();
    let line = p.value() * median;
    let mean_below = model.conditional_mean_below(line)?;
    let shortfall = line - mean_below;
    let cutoff = model.quantile(cutoff_quantile)?;
    let mean_above = model.conditional_mean_above(cutoff)?;
    let rate = shortfall / mean_above;
    if !(rate > 0.0) {
        return Err(Error::Domain(format!("degenerate transfer: rate {rate}")));
    }
    if rate >= 1.0 {
        return Err(Error::Infeasible(format!(
            "required rate {rate} would confiscate more than the taxed incomes"
        )));
    }
    Ok(TransferPlan {
        poverty_line: line,
        cutoff,
        cutoff_quantile,
        rate,
        shortfall,
        fraction: p.value(),
    })
}

impl TransferPlan {
    /// The transfer map applied to one income.
    pub fn map(&self, x: f64) -> f64 {
        if x <= self.poverty_line {
            self.poverty_line
        } else if x <= self.cutoff {
            x
        } else {
            (1.0 - self.rate) * x
        }
    }

    /// Taxed incomes must stay above the line after taxation, otherwise
    /// the map would create new poor.
    pub fn is_order_safe(&self) -> bool {
        (1.0 - self.rate) * self.cutoff > self.poverty_line
    }
}

/// Applies the transfer map elementwise; the result is re-sorted (taxation
/// can reorder values across the cutoff).
pub fn apply_transfer(s: &Sample, plan: &TransferPlan) -> Result<Sample> {
    if !plan.is_order_safe() {
        return Err(Error::Infeasible(format!(
            "taxed incomes would fall to {} which is under the line {}",
            (1.0 - plan.rate) * plan.cutoff,
            plan.poverty_line
        )));
    }
    let values: Vec<f64> = s.values().iter().map(|&x| plan.map(x)).collect();
    Sample::new(values)
}

/// Both readings of the post-transfer headcount for a transferred sample.
pub fn post_transfer_check(transferred: &Sample, plan: &TransferPlan) -> PostTransferCheck {
    let strict = transferred
        .values()
        .partition_point(|&x| x < plan.poverty_line) as f64
        / transferred.n() as f64;
    let est = headcount_estimate(
        transferred,
        Fraction::new(plan.fraction).expect("plan fraction is valid"),
    );
    PostTransferCheck {
        strict_below_line: strict,
        estimator_h_hat: est.h_hat,
    }
}

/// Contrasts the per-capita funding balance with the group-weighted one:
/// the poor share `H` and taxed share `1 - u_c` weight the two sides of
/// the books differently, implying a (usually higher) alternative rate.
pub fn transfer_budget_report(model: &IncomeModel, plan: &TransferPlan) -> Result<TransferBudget> {
    let p = Fraction::new(plan.fraction)?;
    let poor_share = model.headcount_true(p);
    let taxed_share = 1.0 - plan.cutoff_quantile;
    let mean_below = plan.poverty_line - plan.shortfall;
    let mean_above = model.conditional_mean_above(plan.cutoff)?;
    let weighted_rate = poor_share * plan.shortfall / (taxed_share * mean_above);
    Ok(TransferBudget {
        shortfall: plan.shortfall,
        per_capita_rate: plan.rate,
        weighted_rate,
        mean_below_line: mean_below,
        mean_above_cutoff: mean_above,
        poor_share,
        taxed_share,
    })
}
