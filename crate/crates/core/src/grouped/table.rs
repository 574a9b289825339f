//! Binned income data.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimate::Sample;
use crate::math::stats::quantile_sorted;
use crate::math::{self};

/// One bin: `[lower, upper]` as printed by the source, with a count and an
/// optional within-bin mean. `upper = None` marks an unbounded final bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub lower: f64,
    pub upper: Option<f64>,
    pub count: f64,
    pub mean: Option<f64>,
}

impl Bin {
    pub fn new(lower: f64, upper: Option<f64>, count: f64, mean: Option<f64>) -> Self {
        Bin { lower, upper, count, mean }
    }

    /// Zero-width bins carry an atom of probability at a single value.
    pub fn is_point_mass(&self) -> bool {
        self.upper == Some(self.lower)
    }
}

/// Validated, ordered binned data.
///
/// Printed integer bounds like `[1100, 1199]` followed by `[1200, ...]`
/// leave unit gaps; bounds are treated as integer incomes and each bounded
/// bin widened to the half-open interval reaching the next bin's lower
/// bound. Zero-width bins are kept as point masses.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedTable {
    bins: Vec<Bin>,
    /// Upper bound of each bin after gap-widening; point masses keep their
    /// value, the last bin keeps its printed bound (or None).
    effective_upper: Vec<Option<f64>>,
    total: f64,
}

impl GroupedTable {
    pub fn new(bins: Vec<Bin>) -> Result<Self> {
        if bins.is_empty() {
            return Err(Error::Domain("grouped table needs at least one bin".to_string()));
        }
        let mut total = 0.0;
        for (j, bin) in bins.iter().enumerate() {
            if !bin.lower.is_finite() || bin.lower < 0.0 {
                return Err(Error::Domain(format!("bin {j}: bad lower bound {}", bin.lower)));
            }
            if let Some(u) = bin.upper {
                if !u.is_finite() || u < bin.lower {
                    return Err(Error::Domain(format!("bin {j}: bad upper bound {u}")));
                }
            } else if j + 1 != bins.len() {
                return Err(Error::Domain(format!("bin {j}: only the last bin may be unbounded")));
            }
            if !(bin.count >= 0.0) || !bin.count.is_finite() {
                return Err(Error::Domain(format!("bin {j}: bad count {}", bin.count)));
            }
            total += bin.count;
        }
        if !(total > 0.0) {
            return Err(Error::Domain("grouped table has zero total count".to_string()));
        }
        let mut effective_upper = Vec::with_capacity(bins.len());
        let mut integer_gapped = false;
        for (j, bin) in bins.iter().enumerate() {
            if bin.is_point_mass() {
                if let Some(next) = bins.get(j + 1) {
                    let gap = next.lower - bin.lower;
                    if gap < 0.0 {
                        return Err(Error::Domain(format!("bin {j} overlaps bin {}", j + 1)));
                    }
                    if gap > 0.0 && gap <= 1.0 + 1e-9 {
                        integer_gapped = true;
                    }
                }
                effective_upper.push(bin.upper);
                continue;
            }
            match (bin.upper, bins.get(j + 1)) {
                (Some(u), Some(next)) => {
                    let gap = next.lower - u;
                    if gap < 0.0 {
                        return Err(Error::Domain(format!("bin {j} overlaps bin {}", j + 1)));
                    }
                    if gap > 1.0 + 1e-9 {
                        return Err(Error::Domain(format!(
                            "gap of {gap} between bin {j} and bin {} (only unit gaps from integer bounds are bridged)",
                            j + 1
                        )));
                    }
                    if gap > 0.0 {
                        integer_gapped = true;
                    }
                    effective_upper.push(Some(next.lower));
                }
                // Resolved once all gaps have been seen.
                (Some(u), None) => effective_upper.push(Some(u)),
                (None, _) => effective_upper.push(None),
            }
        }
        // A final bounded bin widens by one only under the integer-bound
        // convention signalled by unit gaps elsewhere in the table.
        if integer_gapped {
            if let Some(Some(u)) = effective_upper.last().copied() {
                if !bins[bins.len() - 1].is_point_mass() {
                    *effective_upper.last_mut().unwrap() = Some(u + 1.0);
                }
            }
        }
        // Validate means against the widened intervals.
        for (j, bin) in bins.iter().enumerate() {
            if let Some(m) = bin.mean {
                let lo = bin.lower;
                match effective_upper[j] {
                    Some(hi) if !bin.is_point_mass() => {
                        if !(m >= lo && m <= hi) {
                            return Err(Error::Domain(format!(
                                "bin {j}: mean {m} outside [{lo}, {hi}]"
                            )));
                        }
                    }
                    None => {
                        if !(m > lo) {
                            return Err(Error::Domain(format!(
                                "last bin: mean {m} must exceed the lower bound {lo}"
                            )));
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(GroupedTable { bins, effective_upper, total })
    }

    /// Summarize a sample into `k` quantile bins (bin bounds at the type-7
    /// sample quantiles), with within-bin means, a lower bound at zero and
    /// an unbounded last bin.
    pub fn from_sample_quantiles(s: &Sample, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Domain("quantile grouping needs at least 2 bins".to_string()));
        }
        if s.n() < 2 * k {
            return Err(Error::Domain(format!(
                "need at least {} observations for {k} quantile bins",
                2 * k
            )));
        }
        let values = s.values();
        let mut bounds = Vec::with_capacity(k - 1);
        for j in 1..k {
            bounds.push(quantile_sorted(values, j as f64 / k as f64));
        }
        let mut bins = Vec::with_capacity(k);
        let mut start_idx = 0usize;
        for j in 0..k {
            let lower = if j == 0 { 0.0 } else { bounds[j - 1] };
            let upper = if j + 1 == k { None } else { Some(bounds[j]) };
            // Half-open bins: a value equal to a bound belongs to the
            // upper bin.
            let end_idx = match upper {
                Some(u) => values.partition_point(|&x| x < u),
                None => values.len(),
            };
            let members = &values[start_idx..end_idx];
            let count = members.len() as f64;
            let mean = if members.is_empty() {
                None
            } else {
                Some(members.iter().sum::<f64>() / count)
            };
            bins.push(Bin::new(lower, upper, count, mean));
            start_idx = end_idx;
        }
        GroupedTable::new(bins)
    }

    /// Decile summary, the grouping used throughout the bias and coverage
    /// studies.
    pub fn from_sample_deciles(s: &Sample) -> Result<Self> {
        Self::from_sample_quantiles(s, 10)
    }

    #[inline]
    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Bin proportions `count / total`.
    pub fn proportions(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.count / self.total).collect()
    }

    /// Widened upper bound of bin `j` (None for an unbounded last bin).
    pub(crate) fn effective_upper(&self, j: usize) -> Option<f64> {
        self.effective_upper[j]
    }

    /// Total count rounded to whole observations.
    pub fn rounded_count(&self) -> usize {
        self.bins.iter().map(|b| math::round(b.count) as usize).sum()
    }

    /// Whether every bin carries a mean (needed by the linear-interpolation
    /// fit).
    pub fn has_means(&self) -> bool {
        self.bins.iter().all(|b| b.mean.is_some() || b.is_point_mass())
    }

    /// Quantile of the piecewise-uniform distribution implied by the bins,
    /// interpolating linearly inside each widened bin. Point masses return
    /// their value; levels inside an unbounded final bin return its lower
    /// bound (the best available value without a tail model).
    pub fn interpolated_quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {u}")));
        }
        let mut cum = 0.0;
        for (j, bin) in self.bins.iter().enumerate() {
            let q = bin.count / self.total;
            if u <= cum + q || j + 1 == self.bins.len() {
                if bin.is_point_mass() || q <= 0.0 {
                    return Ok(bin.lower);
                }
                return Ok(match self.effective_upper(j) {
                    Some(hi) => bin.lower + (u - cum) / q * (hi - bin.lower),
                    None => bin.lower,
                });
            }
            cum += q;
        }
        unreachable!()
    }

    /// Percentile pairs `(level, value)` for quantile-matching fits:
    /// interpolated deciles of the binned distribution. For data already
    /// grouped into decile bins these are exactly the bin bounds.
    pub fn percentile_pairs(&self) -> Result<Vec<(f64, f64)>> {
        let mut pairs = Vec::with_capacity(9);
        for k in 1..10 {
            let u = k as f64 / 10.0;
            pairs.push((u, self.interpolated_quantile(u)?));
        }
        Ok(pairs)
    }

    /// Pairs at every interior bin boundary: `(cumulative proportion, bound)`.
    pub fn boundary_pairs(&self) -> Vec<(f64, f64)> {
        let mut pairs = Vec::with_capacity(self.bins.len().saturating_sub(1));
        let mut cum = 0.0;
        for j in 0..self.bins.len() - 1 {
            cum += self.bins[j].count / self.total;
            if cum > 0.0 && cum < 1.0 {
                pairs.push((cum, self.bins[j + 1].lower));
            }
        }
        pairs
    }
}
