//! Percentile-matching fit of the FKML generalized lambda distribution.
//!
//! The quantile function is affine in the location `lambda` and the
//! reciprocal scale `1/eta`, so for a candidate shape pair `(alpha, beta)`
//! those two are profiled out by linear least squares; a Nelder-Mead search
//! over the shape pair minimizes the profiled sum of squared quantile
//! residuals, started from a 5x5 grid over `[-0.5, 1.5]^2`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dists::{gld_s_term, IncomeModel};
use crate::error::{Error, Result};
use crate::math::neldermead;

use super::table::GroupedTable;

/// A fitted FKML generalized lambda distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GldFit {
    pub lambda: f64,
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Sum of squared quantile residuals at the optimum.
    pub objective: f64,
}

const GRID: [f64; 5] = [-0.5, 0.0, 0.5, 1.0, 1.5];
const INVALID: f64 = 1e300;

/// Profiled least squares for fixed shapes: returns
/// `(objective, lambda, w = 1/eta)`, or None when the shapes give no valid
/// positive-scale solution.
fn profile(pairs: &[(f64, f64)], alpha: f64, beta: f64) -> Option<(f64, f64, f64)> {
    let n = pairs.len() as f64;
    let mut s_mean = 0.0;
    let mut x_mean = 0.0;
    let mut terms = [0.0; 64];
    debug_assert!(pairs.len() <= terms.len());
    for (idx, &(u, x)) in pairs.iter().enumerate() {
        let s = gld_s_term(u, alpha, beta);
        if !s.is_finite() {
            return None;
        }
        terms[idx] = s;
        s_mean += s;
        x_mean += x;
    }
    s_mean /= n;
    x_mean /= n;
    let mut s_var = 0.0;
    let mut cov = 0.0;
    for (idx, &(_, x)) in pairs.iter().enumerate() {
        let ds = terms[idx] - s_mean;
        s_var += ds * ds;
        cov += ds * (x - x_mean);
    }
    if !(s_var > 0.0) {
        return None;
    }
    let w = cov / s_var;
    if !(w > 0.0) {
        return None;
    }
    let lambda = x_mean - w * s_mean;
    let mut rss = 0.0;
    for (idx, &(_, x)) in pairs.iter().enumerate() {
        let r = x - lambda - w * terms[idx];
        rss += r * r;
    }
    Some((rss, lambda, w))
}

fn validate_pairs(pairs: &[(f64, f64)]) -> Result<()> {
    if pairs.len() < 4 {
        return Err(Error::Domain(format!(
            "quantile matching needs at least 4 pairs, got {}",
            pairs.len()
        )));
    }
    if pairs.len() > 64 {
        return Err(Error::Domain("at most 64 percentile pairs are supported".to_string()));
    }
    for window in pairs.windows(2) {
        let (u0, x0) = window[0];
        let (u1, x1) = window[1];
        if !(u0 > 0.0 && u1 < 1.0 && u0 < u1) {
            return Err(Error::Domain(format!(
                "percentile levels must increase strictly inside (0,1): {u0} then {u1}"
            )));
        }
        if !(x1 > x0) {
            return Err(Error::Domain(format!(
                "quantile values must increase strictly: {x0} then {x1}"
            )));
        }
    }
    let (u0, _) = pairs[0];
    let (u_last, _) = pairs[pairs.len() - 1];
    if !(u0 > 0.0 && u_last < 1.0) {
        return Err(Error::Domain("percentile levels must lie strictly inside (0,1)".to_string()));
    }
    Ok(())
}

/// Fit from explicit `(level, value)` pairs using the default start grid.
pub fn gld_fit(pairs: &[(f64, f64)]) -> Result<GldFit> {
    let starts: Vec<[f64; 2]> = GRID
        .iter()
        .flat_map(|&a| GRID.iter().map(move |&b| [a, b]))
        .collect();
    gld_fit_with_starts(pairs, &starts, 400)
}

/// Fit warm-started near a previous solution, with two grid fallbacks; used
/// by bootstrap refits where the full grid would dominate the runtime.
pub fn gld_fit_hinted(pairs: &[(f64, f64)], hint: (f64, f64)) -> Result<GldFit> {
    let (a, b) = hint;
    let starts = [
        [a, b],
        [a + 0.25, b - 0.25],
        [a - 0.25, b + 0.25],
        [0.5, 0.5],
    ];
    gld_fit_with_starts(pairs, &starts, 250)
}

fn gld_fit_with_starts(pairs: &[(f64, f64)], starts: &[[f64; 2]], max_iter: usize) -> Result<GldFit> {
    validate_pairs(pairs)?;
    let objective = |a: f64, b: f64| match profile(pairs, a, b) {
        Some((rss, _, _)) => rss,
        None => INVALID,
    };
    let mut best: Option<GldFit> = None;
    let mut best_invalid: Option<(f64, f64, f64)> = None;
    for &start in starts {
        let m = neldermead::minimize_restarted(objective, start, 0.25, max_iter);
        match profile(pairs, m.x[0], m.x[1]) {
            Some((rss, lambda, w)) => {
                let candidate = GldFit {
                    lambda,
                    eta: 1.0 / w,
                    alpha: m.x[0],
                    beta: m.x[1],
                    objective: rss,
                };
                if candidate_valid(&candidate) && best.map_or(true, |b| rss < b.objective) {
                    best = Some(candidate);
                }
            }
            None => {
                if best_invalid.map_or(true, |(v, _, _)| m.value < v) {
                    best_invalid = Some((m.value, m.x[0], m.x[1]));
                }
            }
        }
    }
    best.ok_or_else(|| {
        let diag = match best_invalid {
            Some((v, a, b)) => format!("best invalid candidate: alpha={a}, beta={b}, value={v}"),
            None => String::from("no candidate converged"),
        };
        Error::FitFailure(format!("no valid quantile-matching fit found; {diag}"))
    })
}

/// Validity: positive scale and a strictly increasing quantile function on
/// a 999-point grid.
fn candidate_valid(fit: &GldFit) -> bool {
    if !(fit.eta > 0.0) || !fit.eta.is_finite() || !fit.lambda.is_finite() {
        return false;
    }
    let model = match IncomeModel::gld(fit.lambda, fit.eta, fit.alpha, fit.beta) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let mut prev = f64::NEG_INFINITY;
    for k in 1..1000 {
        let u = k as f64 / 1000.0;
        let q = match model.quantile(u) {
            Ok(q) => q,
            Err(_) => return false,
        };
        if !(q > prev) {
            return false;
        }
        prev = q;
    }
    true
}

/// Fit from a grouped table via its interpolated decile pairs.
pub fn gld_fit_from_table(table: &GroupedTable) -> Result<GldFit> {
    gld_fit(&table.percentile_pairs()?)
}

impl GldFit {
    /// The fitted model as an [`IncomeModel`] for cdf/quantile/sampling.
    pub fn model(&self) -> IncomeModel {
        IncomeModel::Gld {
            lambda: self.lambda,
            eta: self.eta,
            alpha: self.alpha,
            beta: self.beta,
        }
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        self.model().quantile(u)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.model().cdf(x)
    }

    pub fn median(&self) -> f64 {
        self.model().median()
    }
}
