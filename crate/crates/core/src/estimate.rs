//! Complete-data point estimation for the headcount ratio.
//!
//! The estimator counts observations at or below `p` times the sample
//! median. Its approximate standard errors need two kernel estimates: the
//! quantile density at 1/2 (Epanechnikov kernel over order statistics) and
//! the income density at the poverty line (Gaussian kernel).

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::dists::Fraction;
use crate::error::{Error, Result};
use crate::math::stats::{mean, quantile_sorted, sample_sd};
use crate::math::{self, normal, powf, sqrt};

/// An ordered collection of incomes.
///
/// Values are kept sorted ascending; zeros are permitted (grouped sources
/// report exact-zero incomes), negatives are not.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    /// Validates and sorts the given incomes.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("sample must contain at least one value".to_string()));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Domain(format!("value at index {i} is not finite")));
            }
            if *v < 0.0 {
                return Err(Error::Domain(format!("negative income {v} at index {i}")));
            }
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Sample { values })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Sorted values, ascending.
    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

/// Point estimate of the headcount ratio together with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeadcountEstimate {
    /// Share of observations at or below the poverty line, `k/n`.
    pub h_hat: f64,
    /// Sample median.
    pub median_hat: f64,
    /// `p * median_hat`.
    pub poverty_line: f64,
    /// The fraction used.
    pub p: f64,
    /// Sample size.
    pub n: usize,
}

/// The two approximate standard errors of the headcount estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StdErrPair {
    /// `p * q(1/2) * f(p M) / (2 sqrt(n))`, the delta-method error.
    pub se1: f64,
    /// `sqrt(se1^2 + h(1-h)/n - 2 h se1 / sqrt(n))`, the asymptotic-variance
    /// form; the radicand is clamped at zero against kernel noise.
    pub se2: f64,
    /// Kernel quantile-density estimate at 1/2.
    pub q_at_half: f64,
    /// Gaussian-kernel density estimate at the poverty line.
    pub f_at_line: f64,
}

/// Sample median: middle order statistic, or the mean of the two middle
/// order statistics for even sizes.
pub fn sample_median(s: &Sample) -> f64 {
    median_of_sorted(s.values())
}

#[inline]
pub(crate) fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Headcount estimate: share of values at or below `p` times the sample
/// median (ties at the line count as poor).
pub fn headcount_estimate(s: &Sample, p: Fraction) -> HeadcountEstimate {
    let median_hat = sample_median(s);
    let line = p.value() * median_hat;
    let k = s.values().partition_point(|&x| x <= line);
    HeadcountEstimate {
        h_hat: k as f64 / s.n() as f64,
        median_hat,
        poverty_line: line,
        p: p.value(),
        n: s.n(),
    }
}

/// Headcount of an unsorted scratch buffer, used by bootstrap loops where
/// sorting every resample would dominate the cost.
pub(crate) fn headcount_of_scratch(values: &mut [f64], p: f64) -> f64 {
    let n = values.len();
    let median = if n % 2 == 1 {
        let (_, m, _) = values.select_nth_unstable_by(n / 2, f64::total_cmp);
        *m
    } else {
        let (lower, m, _) = values.select_nth_unstable_by(n / 2, f64::total_cmp);
        let hi = *m;
        let lo = lower
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    };
    let line = p * median;
    values.iter().filter(|&&x| x <= line).count() as f64 / n as f64
}

/// Right-continuous empirical distribution function.
pub fn empirical_cdf(s: &Sample, x: f64) -> f64 {
    s.values().partition_point(|&v| v <= x) as f64 / s.n() as f64
}

/// Epanechnikov kernel with bandwidth `b`, `(3/(4b))(1 - (t/b)^2)` on
/// `|t| <= b`.
#[inline]
fn epanechnikov(t: f64, b: f64) -> f64 {
    let z = t / b;
    if z * z <= 1.0 {
        0.75 * (1.0 - z * z) / b
    } else {
        0.0
    }
}

fn quantile_density_raw(values: &[f64], u: f64, b: f64) -> f64 {
    let n = values.len();
    let nf = n as f64;
    // Terms vanish unless (i-1)/n or i/n falls within b of u.
    let lo = math::floor((u - b) * nf).max(0.0) as usize;
    let hi = (math::ceil((u + b) * nf) as usize + 1).min(n);
    let mut acc = 0.0;
    for i in (lo + 1)..=hi {
        let k_prev = epanechnikov(u - (i - 1) as f64 / nf, b);
        let k_next = epanechnikov(u - i as f64 / nf, b);
        acc += values[i - 1] * (k_prev - k_next);
    }
    acc
}

/// Two-stage plug-in bandwidth for the quantile-density estimator at `u`.
///
/// Pilot `b0 = n^{-1/5} min(1/4, u, 1-u)`; the curvature is estimated by a
/// central second difference of the pilot estimate at spacing `b0/2`, and
/// the final bandwidth is the Epanechnikov AMSE-optimal
/// `n^{-1/5} (15 q^2 / q''^2)^{1/5}`, clamped into `(1/n, min(u, 1-u)]`.
pub fn quantile_density_bandwidth(s: &Sample, u: f64) -> Result<f64> {
    check_interior(u)?;
    let n = s.n() as f64;
    let edge = u.min(1.0 - u);
    let rate = powf(n, -0.2);
    let b0 = rate * edge.min(0.25);
    if !(b0 > 0.0) {
        return Ok(edge);
    }
    let q0 = quantile_density_raw(s.values(), u, b0);
    let d = 0.5 * b0;
    let qpp = (quantile_density_raw(s.values(), u + d, b0) - 2.0 * q0
        + quantile_density_raw(s.values(), u - d, b0))
        / (d * d);
    let mut b = if q0 > 0.0 && qpp.is_finite() && math::abs(qpp) > 1e-300 {
        rate * powf(15.0 * q0 * q0 / (qpp * qpp), 0.2)
    } else {
        edge
    };
    if !b.is_finite() {
        b = edge;
    }
    Ok(b.clamp((1.0 / n).min(edge), edge))
}

/// Kernel quantile-density estimate
/// `sum_i X_(i) [k_b(u - (i-1)/n) - k_b(u - i/n)]`.
///
/// When no bandwidth is given the plug-in of
/// [`quantile_density_bandwidth`] is used. A caller-supplied bandwidth must
/// lie in `(0, min(u, 1-u)]` so the kernel window stays inside the unit
/// interval.
pub fn quantile_density(s: &Sample, u: f64, bandwidth: Option<f64>) -> Result<f64> {
    check_interior(u)?;
    let b = match bandwidth {
        Some(b) => {
            if !(b > 0.0 && b <= u.min(1.0 - u)) {
                return Err(Error::Domain(format!(
                    "bandwidth {b} outside (0, min(u, 1-u)] for u={u}"
                )));
            }
            b
        }
        None => quantile_density_bandwidth(s, u)?,
    };
    Ok(quantile_density_raw(s.values(), u, b))
}

fn check_interior(u: f64) -> Result<()> {
    if u > 0.0 && u < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("quantile level must lie in (0, 1), got {u}")))
    }
}

/// Rule-of-thumb Gaussian bandwidth `0.9 min(sd, IQR/1.34) n^{-1/5}`.
pub fn kernel_bandwidth(s: &Sample) -> Result<f64> {
    if s.n() < 2 {
        return Err(Error::Domain("kernel density needs at least 2 values".to_string()));
    }
    let sd = sample_sd(s.values());
    let iqr = quantile_sorted(s.values(), 0.75) - quantile_sorted(s.values(), 0.25);
    let mut spread = sd.min(iqr / 1.34);
    if spread == 0.0 {
        spread = sd;
    }
    if spread == 0.0 {
        return Err(Error::Domain("zero-variance sample has no density estimate".to_string()));
    }
    Ok(0.9 * spread * powf(s.n() as f64, -0.2))
}

/// Gaussian-kernel density estimate at `x`.
pub fn kernel_density(s: &Sample, x: f64) -> Result<f64> {
    let h = kernel_bandwidth(s)?;
    let nh = s.n() as f64 * h;
    let mut acc = 0.0;
    for &v in s.values() {
        acc += normal::pdf((x - v) / h);
    }
    Ok(acc / nh)
}

/// Both approximate standard errors for the headcount estimator.
///
/// Sizes below 10 are rejected; the kernel plug-ins are meaningless there.
pub fn standard_errors(s: &Sample, p: Fraction) -> Result<StdErrPair> {
    if s.n() < 10 {
        return Err(Error::Domain(format!(
            "standard errors need n >= 10, got {}",
            s.n()
        )));
    }
    let est = headcount_estimate(s, p);
    let q_half = quantile_density(s, 0.5, None)?;
    let f_line = kernel_density(s, est.poverty_line)?;
    let n = s.n() as f64;
    let sqrt_n = sqrt(n);
    let se1 = p.value() * q_half * f_line / (2.0 * sqrt_n);
    let h = est.h_hat;
    let radicand = se1 * se1 + h * (1.0 - h) / n - 2.0 * h * se1 / sqrt_n;
    let se2 = sqrt(radicand.max(0.0));
    Ok(StdErrPair {
        se1,
        se2,
        q_at_half: q_half,
        f_at_line: f_line,
    })
}

/// Mean of the sample (used by grouped re-binning and reports).
pub fn sample_mean(s: &Sample) -> f64 {
    mean(s.values())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::IncomeModel;
    use approx::assert_abs_diff_eq;

    fn sample(values: &[f64]) -> Sample {
        Sample::new(values.to_vec()).unwrap()
    }

    #[test]
    fn sample_rejects_bad_input() {
        assert!(Sample::new(alloc::vec![]).is_err());
        assert!(Sample::new(alloc::vec![1.0, -2.0]).is_err());
        assert!(Sample::new(alloc::vec![1.0, f64::NAN]).is_err());
        assert!(Sample::new(alloc::vec![0.0, 1.0]).is_ok());
    }

    #[test]
    fn median_conventions() {
        assert_eq!(sample_median(&sample(&[1.0, 2.0, 3.0, 4.0, 5.0])), 3.0);
        assert_eq!(sample_median(&sample(&[1.0, 2.0, 3.0, 4.0])), 2.5);
        assert_eq!(sample_median(&sample(&[7.0])), 7.0);
    }

    #[test]
    fn headcount_small_example() {
        let est = headcount_estimate(&sample(&[1.0, 2.0, 3.0, 4.0, 5.0]), Fraction::half());
        assert_eq!(est.median_hat, 3.0);
        assert_eq!(est.poverty_line, 1.5);
        assert_eq!(est.h_hat, 0.2);
        assert_eq!(est.n, 5);
    }

    #[test]
    fn headcount_equal_incomes_is_zero() {
        let est = headcount_estimate(&sample(&[1.0, 1.0, 1.0, 1.0]), Fraction::half());
        assert_eq!(est.median_hat, 1.0);
        assert_eq!(est.h_hat, 0.0);
    }

    #[test]
    fn headcount_counts_line_ties_as_poor() {
        // median 2, line 1; the two values at 1 are counted.
        let est = headcount_estimate(&sample(&[1.0, 1.0, 2.0, 3.0, 4.0]), Fraction::half());
        assert_eq!(est.h_hat, 0.4);
    }

    #[test]
    fn headcount_monte_carlo_consistency() {
        let m = IncomeModel::lognormal(0.0, 1.0).unwrap();
        let s = m.sample(100_000, 3).unwrap();
        let est = headcount_estimate(&s, Fraction::half());
        assert_abs_diff_eq!(est.h_hat, 0.244108, epsilon = 0.01);
    }

    #[test]
    fn headcount_scale_equivariance_exact() {
        let m = IncomeModel::lognormal(0.0, 1.0).unwrap();
        let s = m.sample(501, 5).unwrap();
        let h = headcount_estimate(&s, Fraction::half()).h_hat;
        for c in [0.25, 2.0, 1e4] {
            let scaled = Sample::new(s.values().iter().map(|v| v * c).collect()).unwrap();
            assert_eq!(h, headcount_estimate(&scaled, Fraction::half()).h_hat);
        }
    }

    #[test]
    fn scratch_headcount_matches_sorted_path() {
        let m = IncomeModel::exponential(1.0).unwrap();
        for n in [9, 10, 101, 256] {
            let s = m.sample(n, n as u64).unwrap();
            let expected = headcount_estimate(&s, Fraction::half()).h_hat;
            let mut scratch = s.values().to_vec();
            // shuffle deterministically by reversing halves
            scratch.rotate_left(n / 3);
            assert_eq!(headcount_of_scratch(&mut scratch, 0.5), expected);
        }
    }

    #[test]
    fn ecdf_basics() {
        let s = sample(&[1.0, 2.0, 3.0]);
        assert_abs_diff_eq!(empirical_cdf(&s, 2.0), 2.0 / 3.0);
        assert_eq!(empirical_cdf(&s, 0.5), 0.0);
        assert_eq!(empirical_cdf(&s, 3.0), 1.0);
        assert_eq!(empirical_cdf(&s, 99.0), 1.0);
        let s5 = sample(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_abs_diff_eq!(empirical_cdf(&s5, 1.5), 0.2);
    }

    #[test]
    fn ecdf_agrees_with_headcount() {
        let m = IncomeModel::lognormal(0.0, 1.0).unwrap();
        let s = m.sample(1000, 8).unwrap();
        let est = headcount_estimate(&s, Fraction::half());
        assert_eq!(empirical_cdf(&s, est.poverty_line), est.h_hat);
    }

    #[test]
    fn quantile_density_constant_sample_vanishes() {
        let s = sample(&[5.0; 20]);
        for u in [0.3, 0.5, 0.7] {
            let q = quantile_density(&s, u, Some(0.2)).unwrap();
            assert_abs_diff_eq!(q, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn quantile_density_five_point_hand_value() {
        // Direct evaluation of the five-term sum for {1..5}, u = 1/2,
        // b = 0.3: only the i = 2 and i = 4 terms survive, giving 40/9.
        let s = sample(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let q = quantile_density(&s, 0.5, Some(0.3)).unwrap();
        assert_abs_diff_eq!(q, 40.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn quantile_density_windowed_sum_matches_full_loop() {
        let m = IncomeModel::lognormal(0.0, 1.0).unwrap();
        let s = m.sample(500, 21).unwrap();
        for (u, b) in [(0.5, 0.1), (0.2, 0.15), (0.9, 0.05)] {
            let fast = quantile_density(&s, u, Some(b)).unwrap();
            let n = s.n() as f64;
            let mut slow = 0.0;
            for (i, &x) in s.values().iter().enumerate() {
                let i = i + 1;
                slow += x * (epanechnikov(u - (i as f64 - 1.0) / n, b) - epanechnikov(u - i as f64 / n, b));
            }
            assert_abs_diff_eq!(fast, slow, epsilon = 1e-10);
        }
    }

    #[test]
    fn quantile_density_estimates_reciprocal_density() {
        // q(u) = 1/f(Q(u)); for Exp(1) at u = 1/2 this is 2.
        let m = IncomeModel::exponential(1.0).unwrap();
        let s = m.sample(100_000, 17).unwrap();
        let q = quantile_density(&s, 0.5, None).unwrap();
        assert_abs_diff_eq!(q, 2.0, epsilon = 0.2);
    }

    #[test]
    fn quantile_density_rejects_boundary_and_bad_bandwidth() {
        let s = sample(&[1.0, 2.0, 3.0]);
        assert!(quantile_density(&s, 0.0, None).is_err());
        assert!(quantile_density(&s, 1.0, None).is_err());
        assert!(quantile_density(&s, 0.9, Some(0.5)).is_err());
    }

    #[test]
    fn quantile_density_linear_in_values() {
        let m = IncomeModel::weibull(2.0).unwrap();
        let s = m.sample(200, 4).unwrap();
        let q = quantile_density(&s, 0.4, Some(0.2)).unwrap();
        let scaled = Sample::new(s.values().iter().map(|v| v * 7.5).collect()).unwrap();
        let qs = quantile_density(&scaled, 0.4, Some(0.2)).unwrap();
        assert_abs_diff_eq!(qs, 7.5 * q, epsilon = 1e-9 * qs.abs().max(1.0));
    }

    #[test]
    fn kernel_density_uniform_interior() {
        let m = IncomeModel::uniform(0.0, 10.0).unwrap();
        let s = m.sample(100_000, 23).unwrap();
        let f = kernel_density(&s, 5.0).unwrap();
        assert_abs_diff_eq!(f, 0.1, epsilon = 0.01);
    }

    #[test]
    fn kernel_density_symmetry_and_tails() {
        let s = sample(&[1.0, 3.0]);
        for d in [0.3, 0.7, 1.4] {
            let left = kernel_density(&s, 2.0 - d).unwrap();
            let right = kernel_density(&s, 2.0 + d).unwrap();
            assert_abs_diff_eq!(left, right, epsilon = 1e-15);
        }
        assert!(kernel_density(&s, 500.0).unwrap() < 1e-12);
        assert!(Sample::new(alloc::vec![2.0; 5])
            .and_then(|s| kernel_density(&s, 1.0))
            .is_err());
    }

    #[test]
    fn standard_errors_degenerate_density() {
        // A tight cluster far above the line: f(pM) underflows to zero and
        // both errors collapse to the binomial form with h = 0.
        let vals: Vec<f64> = (0..20).map(|i| 100.0 + i as f64 * 1e-9).collect();
        let s = Sample::new(vals).unwrap();
        let se = standard_errors(&s, Fraction::half()).unwrap();
        assert_eq!(se.f_at_line, 0.0);
        assert_eq!(se.se1, 0.0);
        assert_eq!(se.se2, 0.0);
    }

    #[test]
    fn standard_errors_require_ten_points() {
        let s = sample(&[1.0, 2.0, 3.0]);
        assert!(standard_errors(&s, Fraction::half()).is_err());
    }

    #[test]
    fn se2_identity_holds() {
        let m = IncomeModel::lognormal(0.0, 1.0).unwrap();
        for seed in 0..5 {
            let s = m.sample(300, seed).unwrap();
            let est = headcount_estimate(&s, Fraction::half());
            let se = standard_errors(&s, Fraction::half()).unwrap();
            let n = s.n() as f64;
            let lhs = se.se2 * se.se2 + 2.0 * est.h_hat * se.se1 / n.sqrt();
            let rhs = se.se1 * se.se1 + est.h_hat * (1.0 - est.h_hat) / n;
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-14);
        }
    }

    #[test]
    fn se2_against_asymptotic_variance() {
        // Exact lognormal ingredients: f(M)=phi(0), f(L)=phi(ln 2)/0.5,
        // sigma = p f(L) / (2 f(M)), ASV = H(1-H) - 2 H sigma + sigma^2.
        let m = IncomeModel::lognormal(0.0, 1.0).unwrap();
        let h = 0.244108;
        let f_m = normal::pdf(0.0);
        let f_l = normal::pdf(-core::f64::consts::LN_2) / 0.5;
        let sigma = 0.5 * f_l / (2.0 * f_m);
        let asv = h * (1.0 - h) - 2.0 * h * sigma + sigma * sigma;
        let s = m.sample(1000, 31).unwrap();
        let se = standard_errors(&s, Fraction::half()).unwrap();
        let n_se2_sq = 1000.0 * se.se2 * se.se2;
        assert!(
            (n_se2_sq - asv).abs() < 0.3 * asv,
            "n se2^2 = {n_se2_sq} vs ASV = {asv}"
        );
    }

    #[test]
    fn bias_shrinks_at_first_order_rate() {
        // Mean headcount error over replications should fall roughly like
        // 1/n; with quadrupled n the ratio sits in a wide band around 4.
        let m = IncomeModel::exponential(1.0).unwrap();
        let truth = m.headcount_true(Fraction::half());
        let reps = 20_000;
        let bias_at = |n: usize, seed0: u64| {
            let mut acc = 0.0;
            for r in 0..reps {
                let s = m.sample(n, seed0 + r as u64).unwrap();
                acc += headcount_estimate(&s, Fraction::half()).h_hat - truth;
            }
            acc / reps as f64
        };
        let b100 = bias_at(100, 1_000_000);
        let b400 = bias_at(400, 2_000_000);
        let ratio = b100.abs() / b400.abs();
        assert!(
            ratio > 2.0 && ratio < 8.0,
            "bias ratio {ratio} (b100={b100}, b400={b400})"
        );
    }
}
