//! Unified view over the two grouped-data fits.

use crate::error::Result;
use crate::dists::Fraction;

use super::gld::GldFit;
use super::li::LiFit;

/// Which grouped estimator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupedMethod {
    /// Linear-interpolation density with exponential tail (needs bin means).
    Li,
    /// Generalized lambda percentile matching (works from counts alone).
    Gld,
}

impl GroupedMethod {
    pub fn tag(self) -> &'static str {
        match self {
            GroupedMethod::Li => "li",
            GroupedMethod::Gld => "gld",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "li" | "linear" | "linear-interpolation" => Ok(GroupedMethod::Li),
            "gld" => Ok(GroupedMethod::Gld),
            other => Err(crate::error::Error::InvalidParameter(alloc::format!(
                "unknown grouped method '{other}'"
            ))),
        }
    }
}

impl core::fmt::Display for GroupedMethod {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.tag())
    }
}

/// A fitted grouped-data distribution of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupedFit {
    Li(LiFit),
    Gld(GldFit),
}

impl GroupedFit {
    pub fn method(&self) -> GroupedMethod {
        match self {
            GroupedFit::Li(_) => GroupedMethod::Li,
            GroupedFit::Gld(_) => GroupedMethod::Gld,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            GroupedFit::Li(fit) => fit.cdf(x),
            GroupedFit::Gld(fit) => fit.cdf(x),
        }
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        match self {
            GroupedFit::Li(fit) => fit.quantile(u),
            GroupedFit::Gld(fit) => fit.quantile(u),
        }
    }

    /// Fitted median `F^{-1}(1/2)`.
    pub fn median(&self) -> Result<f64> {
        self.quantile(0.5)
    }
}

/// Headcount ratio of a fitted grouped distribution: the fitted cdf at `p`
/// times the fitted median.
pub fn grouped_headcount(fit: &GroupedFit, p: Fraction) -> Result<f64> {
    let median = fit.median()?;
    Ok(fit.cdf(p.value() * median))
}
