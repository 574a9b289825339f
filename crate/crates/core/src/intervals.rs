//! Confidence intervals for the headcount ratio.
//!
//! Four binomial-proportion constructions (Wald, Agresti-Coull,
//! Clopper-Pearson, Wilson), two Wald intervals with kernel-based standard
//! errors, the median-substitution interval and the percentile bootstrap,
//! plus two-sample difference intervals.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dists::Fraction;
use crate::error::{Error, Result};
use crate::estimate::{
    empirical_cdf, headcount_estimate, headcount_of_scratch, quantile_density, sample_median,
    standard_errors, Sample,
};
use crate::math::stats::quantile_sorted;
use crate::math::{beta, normal, sqrt};

/// Interval construction tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CiMethod {
    WaldBinomial,
    AgrestiCoull,
    ClopperPearson,
    Wilson,
    Wald1,
    Wald2,
    MedianSubstitution,
    PercentileBootstrap,
}

impl CiMethod {
    /// Stable lowercase tag used in reports and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            CiMethod::WaldBinomial => "binomial",
            CiMethod::AgrestiCoull => "agresti-coull",
            CiMethod::ClopperPearson => "clopper-pearson",
            CiMethod::Wilson => "wilson",
            CiMethod::Wald1 => "wald1",
            CiMethod::Wald2 => "wald2",
            CiMethod::MedianSubstitution => "median-sub",
            CiMethod::PercentileBootstrap => "bootstrap",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "binomial" | "wald-binomial" | "binomial-wald" => Ok(CiMethod::WaldBinomial),
            "agresti-coull" | "agresticoull" | "ac" => Ok(CiMethod::AgrestiCoull),
            "clopper-pearson" | "clopperpearson" | "cp" => Ok(CiMethod::ClopperPearson),
            "wilson" => Ok(CiMethod::Wilson),
            "wald1" => Ok(CiMethod::Wald1),
            "wald2" => Ok(CiMethod::Wald2),
            "median-sub" | "median" | "median-substitution" => Ok(CiMethod::MedianSubstitution),
            "bootstrap" | "percentile-bootstrap" => Ok(CiMethod::PercentileBootstrap),
            other => Err(Error::InvalidParameter(format!("unknown interval method '{other}'"))),
        }
    }

    pub const ALL: [CiMethod; 8] = [
        CiMethod::WaldBinomial,
        CiMethod::AgrestiCoull,
        CiMethod::ClopperPearson,
        CiMethod::Wilson,
        CiMethod::Wald1,
        CiMethod::Wald2,
        CiMethod::MedianSubstitution,
        CiMethod::PercentileBootstrap,
    ];
}

impl core::fmt::Display for CiMethod {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.tag())
    }
}

/// A point estimate with interval bounds at a nominal level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalEstimate {
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    /// Nominal level, e.g. 0.95.
    pub level: f64,
    pub method: CiMethod,
    /// `upper - lower`.
    pub width: f64,
}

impl IntervalEstimate {
    fn new(point: f64, lower: f64, upper: f64, level: f64, method: CiMethod) -> Self {
        IntervalEstimate {
            point,
            lower,
            upper,
            level,
            method,
            width: upper - lower,
        }
    }

    /// Whether the interval contains `value`.
    pub fn covers(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Variants of the binomial-proportion interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinomialVariant {
    Wald,
    AgrestiCoull,
    ClopperPearson,
    Wilson,
}

impl BinomialVariant {
    fn method(self) -> CiMethod {
        match self {
            BinomialVariant::Wald => CiMethod::WaldBinomial,
            BinomialVariant::AgrestiCoull => CiMethod::AgrestiCoull,
            BinomialVariant::ClopperPearson => CiMethod::ClopperPearson,
            BinomialVariant::Wilson => CiMethod::Wilson,
        }
    }
}

/// Which standard error drives a Wald interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeVariant {
    Se1,
    Se2,
}

/// Resampling configuration for percentile bootstrap intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub seed: u64,
    pub lower_percentile: f64,
    pub upper_percentile: f64,
}

impl BootstrapConfig {
    pub fn new(replicates: usize, seed: u64, lower: f64, upper: f64) -> Result<Self> {
        if replicates < 2 {
            return Err(Error::InvalidParameter(
                "bootstrap needs at least 2 replicates".to_string(),
            ));
        }
        if !(0.0 < lower && lower < upper && upper < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "percentiles must satisfy 0 < {lower} < {upper} < 1"
            )));
        }
        Ok(BootstrapConfig {
            replicates,
            seed,
            lower_percentile: lower,
            upper_percentile: upper,
        })
    }

    /// Central percentiles for a given nominal level.
    pub fn for_level(replicates: usize, seed: u64, level: f64) -> Result<Self> {
        check_level(level)?;
        let alpha = 1.0 - level;
        Self::new(replicates, seed, alpha / 2.0, 1.0 - alpha / 2.0)
    }

    /// Nominal level implied by the percentile pair.
    pub fn level(&self) -> f64 {
        self.upper_percentile - self.lower_percentile
    }
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            replicates: 500,
            seed: 0x5EED_0001,
            lower_percentile: 0.025,
            upper_percentile: 0.975,
        }
    }
}

fn check_level(level: f64) -> Result<f64> {
    if level > 0.0 && level < 1.0 {
        Ok(level)
    } else {
        Err(Error::Domain(format!("confidence level must lie in (0, 1), got {level}")))
    }
}

fn z_for(level: f64) -> f64 {
    normal::quantile(0.5 + level / 2.0)
}

/// Binomial-proportion interval for `h_hat = k/n` with the median treated
/// as known.
pub fn binomial_interval(
    h_hat: f64,
    n: usize,
    level: f64,
    variant: BinomialVariant,
) -> Result<IntervalEstimate> {
    check_level(level)?;
    if n == 0 {
        return Err(Error::Domain("binomial interval needs n >= 1".to_string()));
    }
    if !(0.0..=1.0).contains(&h_hat) {
        return Err(Error::Domain(format!("h_hat must lie in [0, 1], got {h_hat}")));
    }
    let nf = n as f64;
    let k = h_hat * nf;
    let z = z_for(level);
    let (lower, upper) = match variant {
        BinomialVariant::Wald => {
            let half = z * sqrt(h_hat * (1.0 - h_hat) / nf);
            (h_hat - half, h_hat + half)
        }
        BinomialVariant::AgrestiCoull => {
            let n_tilde = nf + z * z;
            let p_tilde = (k + z * z / 2.0) / n_tilde;
            let half = z * sqrt(p_tilde * (1.0 - p_tilde) / n_tilde);
            (p_tilde - half, p_tilde + half)
        }
        BinomialVariant::ClopperPearson => {
            let alpha = 1.0 - level;
            let lower = if k <= 0.0 {
                0.0
            } else {
                beta::inv_reg_inc_beta(k, nf - k + 1.0, alpha / 2.0)
            };
            let upper = if k >= nf {
                1.0
            } else {
                beta::inv_reg_inc_beta(k + 1.0, nf - k, 1.0 - alpha / 2.0)
            };
            (lower, upper)
        }
        BinomialVariant::Wilson => {
            let z2 = z * z;
            let denom = 1.0 + z2 / nf;
            let center = (h_hat + z2 / (2.0 * nf)) / denom;
            let half = z * sqrt(h_hat * (1.0 - h_hat) / nf + z2 / (4.0 * nf * nf)) / denom;
            (center - half, center + half)
        }
    };
    Ok(IntervalEstimate::new(
        h_hat,
        lower.max(0.0),
        upper.min(1.0),
        level,
        variant.method(),
    ))
}

/// Wald interval `H_hat +/- z * SE` with a kernel-based standard error.
pub fn wald_interval(
    s: &Sample,
    p: Fraction,
    level: f64,
    variant: SeVariant,
) -> Result<IntervalEstimate> {
    check_level(level)?;
    let est = headcount_estimate(s, p);
    let errs = standard_errors(s, p)?;
    let (se, method) = match variant {
        SeVariant::Se1 => (errs.se1, CiMethod::Wald1),
        SeVariant::Se2 => (errs.se2, CiMethod::Wald2),
    };
    let half = z_for(level) * se;
    Ok(IntervalEstimate::new(
        est.h_hat,
        (est.h_hat - half).max(0.0),
        (est.h_hat + half).min(1.0),
        level,
        method,
    ))
}

/// Substitution interval: a normal interval for the median is pushed
/// through the empirical cdf at `p` times its endpoints.
pub fn median_substitution_interval(
    s: &Sample,
    p: Fraction,
    level: f64,
) -> Result<IntervalEstimate> {
    check_level(level)?;
    if s.n() < 10 {
        return Err(Error::Domain(format!(
            "median substitution needs n >= 10, got {}",
            s.n()
        )));
    }
    let med = sample_median(s);
    let q_half = quantile_density(s, 0.5, None)?;
    let half = z_for(level) * q_half / (2.0 * sqrt(s.n() as f64));
    let m_lower = (med - half).max(0.0);
    let m_upper = med + half;
    let lower = empirical_cdf(s, p.value() * m_lower);
    let upper = empirical_cdf(s, p.value() * m_upper);
    let est = headcount_estimate(s, p);
    Ok(IntervalEstimate::new(
        est.h_hat,
        lower,
        upper,
        level,
        CiMethod::MedianSubstitution,
    ))
}

/// Replicate headcounts under resampling with replacement.
fn bootstrap_headcounts(s: &Sample, p: f64, cfg: &BootstrapConfig) -> Vec<f64> {
    let n = s.n();
    let values = s.values();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut scratch = alloc::vec![0.0; n];
    let mut out = Vec::with_capacity(cfg.replicates);
    for _ in 0..cfg.replicates {
        for slot in scratch.iter_mut() {
            *slot = values[rng.gen_range(0..n)];
        }
        out.push(headcount_of_scratch(&mut scratch, p));
    }
    out
}

/// Percentile bootstrap interval: empirical percentiles of the replicate
/// headcounts; deterministic for a fixed seed.
pub fn bootstrap_interval(s: &Sample, p: Fraction, cfg: &BootstrapConfig) -> Result<IntervalEstimate> {
    let mut reps = bootstrap_headcounts(s, p.value(), cfg);
    reps.sort_unstable_by(f64::total_cmp);
    let lower = quantile_sorted(&reps, cfg.lower_percentile);
    let upper = quantile_sorted(&reps, cfg.upper_percentile);
    let est = headcount_estimate(s, p);
    Ok(IntervalEstimate::new(
        est.h_hat,
        lower,
        upper,
        cfg.level(),
        CiMethod::PercentileBootstrap,
    ))
}

/// Wald difference interval for `H_p(s1) - H_p(s2)` from independent
/// samples, using the se2 errors.
pub fn difference_interval_wald2(
    s1: &Sample,
    s2: &Sample,
    p: Fraction,
    level: f64,
) -> Result<IntervalEstimate> {
    check_level(level)?;
    let h1 = headcount_estimate(s1, p).h_hat;
    let h2 = headcount_estimate(s2, p).h_hat;
    let e1 = standard_errors(s1, p)?;
    let e2 = standard_errors(s2, p)?;
    let se = sqrt(e1.se2 * e1.se2 + e2.se2 * e2.se2);
    let point = h1 - h2;
    let half = z_for(level) * se;
    Ok(IntervalEstimate::new(
        point,
        (point - half).max(-1.0),
        (point + half).min(1.0),
        level,
        CiMethod::Wald2,
    ))
}

/// Percentile bootstrap for the difference of headcounts; each replicate
/// resamples both samples independently.
pub fn difference_interval_bootstrap(
    s1: &Sample,
    s2: &Sample,
    p: Fraction,
    cfg: &BootstrapConfig,
) -> Result<IntervalEstimate> {
    let n1 = s1.n();
    let n2 = s2.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut scratch1 = alloc::vec![0.0; n1];
    let mut scratch2 = alloc::vec![0.0; n2];
    let mut diffs = Vec::with_capacity(cfg.replicates);
    for _ in 0..cfg.replicates {
        for slot in scratch1.iter_mut() {
            *slot = s1.values()[rng.gen_range(0..n1)];
        }
        for slot in scratch2.iter_mut() {
            *slot = s2.values()[rng.gen_range(0..n2)];
        }
        diffs.push(
            headcount_of_scratch(&mut scratch1, p.value())
                - headcount_of_scratch(&mut scratch2, p.value()),
        );
    }
    diffs.sort_unstable_by(f64::total_cmp);
    let lower = quantile_sorted(&diffs, cfg.lower_percentile);
    let upper = quantile_sorted(&diffs, cfg.upper_percentile);
    let point = headcount_estimate(s1, p).h_hat - headcount_estimate(s2, p).h_hat;
    Ok(IntervalEstimate::new(
        point,
        lower.max(-1.0),
        upper.min(1.0),
        cfg.level(),
        CiMethod::PercentileBootstrap,
    ))
}
