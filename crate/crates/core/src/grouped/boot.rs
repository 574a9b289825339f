//! Bootstrap intervals from a fitted grouped distribution.
//!
//! Replicates are drawn by inverse transform from the fitted quantile
//! function. By default each replicate is re-binned into the original bin
//! bounds (recomputing bin means) and refitted, so the interval carries
//! both sampling and grouping/fitting variability; a direct variant that
//! estimates the headcount from the raw replicate draws is also provided.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dists::Fraction;
use crate::error::{Error, Result};
use crate::estimate::headcount_of_scratch;
use crate::intervals::{BootstrapConfig, CiMethod, IntervalEstimate};
use crate::math::seed::open_unit;
use crate::math::stats::quantile_sorted;

use super::fit::{grouped_headcount, GroupedFit};
use super::gld::gld_fit_hinted;
use super::li::li_fit;
use super::table::{Bin, GroupedTable};

/// How each bootstrap replicate is turned into a headcount estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BootstrapVariant {
    /// Re-bin the draws into the original bounds, refit, and evaluate the
    /// refitted model.
    #[default]
    Refit,
    /// Estimate directly from the raw draws (sample median and count).
    Direct,
}

/// Draws one replicate of `n` values from the fitted quantile function,
/// sorted ascending. Values are floored at the table's support start so a
/// fitted left tail cannot produce negative incomes.
fn draw_replicate(
    fit: &GroupedFit,
    n: usize,
    floor_at: f64,
    rng: &mut ChaCha8Rng,
    buf: &mut Vec<f64>,
) -> Result<()> {
    buf.clear();
    for _ in 0..n {
        let u = open_unit(rng);
        let x = fit.quantile(u)?;
        buf.push(if x < floor_at { floor_at } else { x });
    }
    buf.sort_unstable_by(f64::total_cmp);
    Ok(())
}

/// Re-bins sorted draws into the original table's bounds, recomputing
/// counts and means.
fn rebin(original: &GroupedTable, sorted: &[f64]) -> Result<GroupedTable> {
    let mut bins = Vec::with_capacity(original.len());
    let mut start = 0usize;
    let last = original.len() - 1;
    for (j, bin) in original.bins().iter().enumerate() {
        let end = if j == last {
            sorted.len()
        } else if bin.is_point_mass() {
            sorted[start..].partition_point(|&x| x <= bin.lower) + start
        } else {
            match original.effective_upper(j) {
                Some(hi) => sorted[start..].partition_point(|&x| x < hi) + start,
                None => sorted.len(),
            }
        };
        let members = &sorted[start..end];
        let count = members.len() as f64;
        let mean = if bin.is_point_mass() {
            None
        } else if members.is_empty() {
            // Mass zero; any in-range placeholder keeps the fit well formed.
            match original.effective_upper(j) {
                Some(hi) => Some(0.5 * (bin.lower + hi)),
                None => Some(bin.lower + 1.0),
            }
        } else {
            let m = members.iter().sum::<f64>() / count;
            match original.effective_upper(j) {
                Some(hi) => Some(m.clamp(bin.lower, hi)),
                None => Some(if m > bin.lower { m } else { bin.lower + 1.0 }),
            }
        };
        bins.push(Bin::new(bin.lower, bin.upper, count, mean));
        start = end;
    }
    GroupedTable::new(bins)
}

/// Replicate headcount estimates from the fitted distribution; refit
/// failures are skipped and counted.
pub(crate) fn bootstrap_headcounts(
    fit: &GroupedFit,
    table: &GroupedTable,
    p: Fraction,
    cfg: &BootstrapConfig,
    variant: BootstrapVariant,
) -> Result<(Vec<f64>, usize)> {
    let n = table.rounded_count();
    if n == 0 {
        return Err(Error::Domain(alloc::string::String::from(
            "table has no countable observations",
        )));
    }
    let floor_at = table.bins()[0].lower;
    let hint = match fit {
        GroupedFit::Gld(g) => Some((g.alpha, g.beta)),
        GroupedFit::Li(_) => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut buf = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(cfg.replicates);
    let mut failures = 0usize;
    for _ in 0..cfg.replicates {
        draw_replicate(fit, n, floor_at, &mut rng, &mut buf)?;
        let h = match variant {
            BootstrapVariant::Direct => Ok(headcount_of_scratch(&mut buf, p.value())),
            BootstrapVariant::Refit => rebin(table, &buf).and_then(|rebinned| {
                let refit = match fit {
                    GroupedFit::Li(_) => li_fit(&rebinned).map(GroupedFit::Li),
                    GroupedFit::Gld(_) => {
                        let pairs = rebinned.percentile_pairs()?;
                        gld_fit_hinted(&pairs, hint.unwrap()).map(GroupedFit::Gld)
                    }
                }?;
                grouped_headcount(&refit, p)
            }),
        };
        match h {
            Ok(h) => values.push(h),
            Err(_) => failures += 1,
        }
    }
    if failures * 10 > cfg.replicates {
        return Err(Error::TooManyFailures {
            failed: failures,
            total: cfg.replicates,
        });
    }
    Ok((values, failures))
}

/// Percentile bootstrap interval for the grouped headcount estimate.
pub fn grouped_bootstrap_interval(
    fit: &GroupedFit,
    table: &GroupedTable,
    p: Fraction,
    cfg: &BootstrapConfig,
    variant: BootstrapVariant,
) -> Result<IntervalEstimate> {
    let point = grouped_headcount(fit, p)?;
    let (mut values, _failures) = bootstrap_headcounts(fit, table, p, cfg, variant)?;
    if values.len() < 2 {
        return Err(Error::TooManyFailures {
            failed: cfg.replicates - values.len(),
            total: cfg.replicates,
        });
    }
    values.sort_unstable_by(f64::total_cmp);
    let lower = quantile_sorted(&values, cfg.lower_percentile).max(0.0);
    let upper = quantile_sorted(&values, cfg.upper_percentile).min(1.0);
    Ok(IntervalEstimate {
        point,
        lower,
        upper,
        level: cfg.level(),
        method: CiMethod::PercentileBootstrap,
        width: upper - lower,
    })
}

/// Bootstrap standard error of the grouped headcount (standard deviation
/// of the replicate estimates).
pub fn grouped_bootstrap_se(
    fit: &GroupedFit,
    table: &GroupedTable,
    p: Fraction,
    cfg: &BootstrapConfig,
    variant: BootstrapVariant,
) -> Result<f64> {
    let (values, _) = bootstrap_headcounts(fit, table, p, cfg, variant)?;
    if values.len() < 2 {
        return Err(Error::TooManyFailures {
            failed: cfg.replicates - values.len(),
            total: cfg.replicates,
        });
    }
    Ok(crate::math::stats::sample_sd(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::IncomeModel;
    use crate::grouped::gld::gld_fit_from_table;
    use crate::grouped::li::li_fit;

    fn li_setup(n: usize, seed: u64) -> (GroupedFit, GroupedTable) {
        let m = IncomeModel::exponential(1.0).unwrap();
        let s = m.sample(n, seed).unwrap();
        let table = GroupedTable::from_sample_deciles(&s).unwrap();
        let fit = GroupedFit::Li(li_fit(&table).unwrap());
        (fit, table)
    }

    #[test]
    fn deterministic_given_seed() {
        let (fit, table) = li_setup(500, 3);
        let cfg = BootstrapConfig {
            replicates: 50,
            ..BootstrapConfig::default()
        };
        let a = grouped_bootstrap_interval(&fit, &table, Fraction::half(), &cfg, BootstrapVariant::Refit)
            .unwrap();
        let b = grouped_bootstrap_interval(&fit, &table, Fraction::half(), &cfg, BootstrapVariant::Refit)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn interval_brackets_the_point() {
        let (fit, table) = li_setup(500, 5);
        let cfg = BootstrapConfig {
            replicates: 100,
            ..BootstrapConfig::default()
        };
        for variant in [BootstrapVariant::Refit, BootstrapVariant::Direct] {
            let iv =
                grouped_bootstrap_interval(&fit, &table, Fraction::half(), &cfg, variant).unwrap();
            assert!(iv.lower <= iv.upper);
            assert!(iv.lower >= 0.0 && iv.upper <= 1.0);
            assert!(iv.width > 0.0);
            // The point estimate should not be far outside the interval.
            assert!(iv.point > iv.lower - 0.1 && iv.point < iv.upper + 0.1);
        }
    }

    #[test]
    fn gld_refits_use_hint_and_succeed() {
        let m = IncomeModel::lognormal(0.0, 1.0).unwrap();
        let s = m.sample(500, 8).unwrap();
        let table = GroupedTable::from_sample_deciles(&s).unwrap();
        let fit = GroupedFit::Gld(gld_fit_from_table(&table).unwrap());
        let cfg = BootstrapConfig {
            replicates: 30,
            ..BootstrapConfig::default()
        };
        let (values, failures) =
            bootstrap_headcounts(&fit, &table, Fraction::half(), &cfg, BootstrapVariant::Refit)
                .unwrap();
        assert!(failures <= 3, "failures {failures}");
        assert!(values.len() >= 27);
        for h in values {
            assert!((0.0..=1.0).contains(&h));
        }
    }

    #[test]
    fn rebin_preserves_total_and_bounds() {
        let (fit, table) = li_setup(500, 13);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut buf = Vec::new();
        draw_replicate(&fit, 500, 0.0, &mut rng, &mut buf).unwrap();
        let rebinned = rebin(&table, &buf).unwrap();
        assert_eq!(rebinned.total(), 500.0);
        assert_eq!(rebinned.len(), table.len());
        for (a, b) in table.bins().iter().zip(rebinned.bins()) {
            assert_eq!(a.lower, b.lower);
            assert_eq!(a.upper, b.upper);
        }
    }
}
