//! Linear-interpolation density from binned data.
//!
//! Within each bounded bin the density is the line determined by the bin's
//! mass, midpoint and mean:
//!
//! ```text
//! beta_j  = q_j * 12 (mean_j - mid_j) / width_j^3
//! alpha_j = q_j / width_j - beta_j * mid_j
//! ```
//!
//! so the segment integrates to `q_j` exactly. An unbounded final bin gets
//! an exponential tail `q_J / (mean_J - a) * exp(-(x - a)/(mean_J - a))`.
//! Point-mass bins become atoms in the cdf.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{exp, ln, sqrt};

use super::table::GroupedTable;

/// One linear segment `alpha + beta x` supported on
/// `[support_lo, support_hi)` inside the bin `[lo, hi)`.
///
/// When the raw line dips negative inside the bin, the negative part is
/// floored at zero and the positive part rescaled to keep the bin mass;
/// `clipped` records that the bin mean is no longer matched exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinSegment {
    pub lo: f64,
    pub hi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub mass: f64,
    pub support_lo: f64,
    pub support_hi: f64,
    pub clipped: bool,
}

impl LinSegment {
    /// Density at `x` (zero outside the support part).
    fn density(&self, x: f64) -> f64 {
        if x < self.support_lo || x >= self.support_hi {
            0.0
        } else {
            self.alpha + self.beta * x
        }
    }

    /// Mass below `x` within this segment.
    fn mass_below(&self, x: f64) -> f64 {
        if x <= self.support_lo {
            return 0.0;
        }
        let x = x.min(self.support_hi);
        let a = self.support_lo;
        self.alpha * (x - a) + 0.5 * self.beta * (x * x - a * a)
    }

    /// Solves `mass_below(x) = target` for `x` inside the support.
    fn invert_mass(&self, target: f64) -> f64 {
        let a = self.support_lo;
        if self.beta == 0.0 {
            if self.alpha <= 0.0 {
                return a;
            }
            return (a + target / self.alpha).clamp(a, self.support_hi);
        }
        // 0.5 beta x^2 + alpha x = target + alpha a + 0.5 beta a^2; the
        // cumulative is increasing, so the root with density +sqrt(disc)
        // (the "+" branch) is the right one for either sign of beta.
        let c = 0.5 * self.beta * a * a + self.alpha * a + target;
        let disc = self.alpha * self.alpha + 2.0 * self.beta * c;
        let x = (-self.alpha + sqrt(disc.max(0.0))) / self.beta;
        x.clamp(a, self.support_hi)
    }
}

/// Exponential tail over `[start, inf)` carrying `mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTail {
    pub start: f64,
    /// `mean - start` of the source bin; the tail's scale.
    pub mean_excess: f64,
    pub mass: f64,
}

/// Ordered pieces of the fitted distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Atom { x: f64, mass: f64 },
    Segment(LinSegment),
    Tail(ExpTail),
}

impl Piece {
    fn mass(&self) -> f64 {
        match self {
            Piece::Atom { mass, .. } => *mass,
            Piece::Segment(s) => s.mass,
            Piece::Tail(t) => t.mass,
        }
    }
}

/// Piecewise density fitted by linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct LiFit {
    pieces: Vec<Piece>,
}

/// Fits the piecewise-linear density. Every bounded bin needs a mean; an
/// unbounded final bin needs a mean strictly above its lower bound.
pub fn li_fit(table: &GroupedTable) -> Result<LiFit> {
    if !table.has_means() {
        return Err(Error::UnsupportedMethod(
            "linear interpolation needs bin means; fit the quantile-matching model instead"
                .to_string(),
        ));
    }
    let total = table.total();
    let mut pieces = Vec::with_capacity(table.len());
    for (j, bin) in table.bins().iter().enumerate() {
        let q = bin.count / total;
        if bin.is_point_mass() {
            pieces.push(Piece::Atom { x: bin.lower, mass: q });
            continue;
        }
        match table.effective_upper(j) {
            None => {
                // Unbounded final bin: exponential tail.
                let mean = bin.mean.unwrap_or(bin.lower + 1.0);
                let scale = mean - bin.lower;
                if q > 0.0 && !(scale > 0.0) {
                    return Err(Error::Domain(format!(
                        "last bin mean {mean} must exceed its lower bound {}",
                        bin.lower
                    )));
                }
                pieces.push(Piece::Tail(ExpTail {
                    start: bin.lower,
                    mean_excess: if scale > 0.0 { scale } else { 1.0 },
                    mass: q,
                }));
            }
            Some(hi) => {
                let lo = bin.lower;
                let width = hi - lo;
                if !(width > 0.0) {
                    return Err(Error::Domain(format!("bin {j} has zero width")));
                }
                let mid = 0.5 * (lo + hi);
                let mean = bin.mean.unwrap_or(mid);
                let beta = q * 12.0 * (mean - mid) / (width * width * width);
                let alpha = q / width - beta * mid;
                pieces.push(Piece::Segment(build_segment(lo, hi, alpha, beta, q)));
            }
        }
    }
    Ok(LiFit { pieces })
}

/// Floors a negative-dipping line at zero and rescales the positive part to
/// the bin mass.
fn build_segment(lo: f64, hi: f64, alpha: f64, beta: f64, mass: f64) -> LinSegment {
    let f_lo = alpha + beta * lo;
    let f_hi = alpha + beta * hi;
    if mass <= 0.0 {
        return LinSegment {
            lo,
            hi,
            alpha: 0.0,
            beta: 0.0,
            mass: 0.0,
            support_lo: lo,
            support_hi: hi,
            clipped: false,
        };
    }
    if f_lo >= 0.0 && f_hi >= 0.0 {
        return LinSegment {
            lo,
            hi,
            alpha,
            beta,
            mass,
            support_lo: lo,
            support_hi: hi,
            clipped: false,
        };
    }
    // The line crosses zero at x0 inside the bin; keep the positive side.
    let x0 = -alpha / beta;
    let (support_lo, support_hi) = if beta > 0.0 { (x0, hi) } else { (lo, x0) };
    // Integral of the raw line over the positive part.
    let raw = alpha * (support_hi - support_lo)
        + 0.5 * beta * (support_hi * support_hi - support_lo * support_lo);
    let scale = if raw > 0.0 { mass / raw } else { 0.0 };
    LinSegment {
        lo,
        hi,
        alpha: alpha * scale,
        beta: beta * scale,
        mass,
        support_lo,
        support_hi,
        clipped: true,
    }
}

impl LiFit {
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Whether any bin's line had to be floored at zero.
    pub fn has_clipped_segments(&self) -> bool {
        self.pieces.iter().any(|p| matches!(p, Piece::Segment(s) if s.clipped))
    }

    /// Fitted density (atoms excluded; they have no density value).
    pub fn density(&self, x: f64) -> f64 {
        for piece in &self.pieces {
            match piece {
                Piece::Atom { .. } => {}
                Piece::Segment(s) => {
                    if x >= s.lo && x < s.hi {
                        return s.density(x);
                    }
                }
                Piece::Tail(t) => {
                    if x >= t.start {
                        return t.mass / t.mean_excess * exp(-(x - t.start) / t.mean_excess);
                    }
                }
            }
        }
        0.0
    }

    /// Fitted distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        let mut cum = 0.0;
        for piece in &self.pieces {
            match piece {
                Piece::Atom { x: a, mass } => {
                    if x >= *a {
                        cum += mass;
                    } else {
                        return cum;
                    }
                }
                Piece::Segment(s) => {
                    if x < s.hi {
                        return (cum + s.mass_below(x)).min(1.0);
                    }
                    cum += s.mass;
                }
                Piece::Tail(t) => {
                    if x >= t.start && t.mass > 0.0 {
                        cum += t.mass * (1.0 - exp(-(x - t.start) / t.mean_excess));
                    }
                    return cum.min(1.0);
                }
            }
        }
        cum.min(1.0)
    }

    /// Fitted quantile function; `u` strictly inside `(0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {u}")));
        }
        let mut cum = 0.0;
        let mut last_x = self.pieces.first().map_or(0.0, |p| match p {
            Piece::Atom { x, .. } => *x,
            Piece::Segment(s) => s.lo,
            Piece::Tail(t) => t.start,
        });
        for piece in &self.pieces {
            let mass = piece.mass();
            match piece {
                Piece::Atom { x, .. } => {
                    if u <= cum + mass {
                        return Ok(*x);
                    }
                    last_x = *x;
                }
                Piece::Segment(s) => {
                    if u <= cum + mass && mass > 0.0 {
                        return Ok(s.invert_mass(u - cum));
                    }
                    last_x = s.hi;
                }
                Piece::Tail(t) => {
                    if t.mass > 0.0 {
                        // 1 - u = mass * exp(-(x - start)/scale)
                        let rem = (1.0 - u) / t.mass;
                        if rem < 1.0 {
                            return Ok(t.start - t.mean_excess * ln(rem));
                        }
                        return Ok(t.start);
                    }
                    last_x = t.start;
                }
            }
            cum += mass;
        }
        Ok(last_x)
    }

    /// Fitted median.
    pub fn median(&self) -> Result<f64> {
        self.quantile(0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouped::table::{Bin, GroupedTable};
    use approx::assert_abs_diff_eq;

    fn table(bins: Vec<Bin>) -> GroupedTable {
        GroupedTable::new(bins).unwrap()
    }

    #[test]
    fn histogram_case_mean_at_midpoint() {
        // Mean at the midpoint gives a flat segment.
        let t = table(alloc::vec![
            Bin::new(0.0, Some(2.0), 4.0, Some(1.0)),
            Bin::new(2.0, Some(4.0), 6.0, Some(3.0)),
        ]);
        let fit = li_fit(&t).unwrap();
        assert_abs_diff_eq!(fit.density(1.0), 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.density(3.0), 0.3, epsilon = 1e-12);
        assert!(!fit.has_clipped_segments());
    }

    #[test]
    fn single_bin_slope_recovers_hand_values() {
        // One bin [0,1), mass 1, mean 7/12 (the mean of density 0.5 + x):
        // beta = 12(7/12 - 1/2)/1 = 1, alpha = 1 - 0.5 = 0.5.
        let t = table(alloc::vec![Bin::new(0.0, Some(1.0), 1.0, Some(7.0 / 12.0))]);
        let fit = li_fit(&t).unwrap();
        match fit.pieces()[0] {
            Piece::Segment(s) => {
                assert_abs_diff_eq!(s.beta, 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(s.alpha, 0.5, epsilon = 1e-12);
                assert_abs_diff_eq!(s.mass_below(s.hi), 1.0, epsilon = 1e-12);
            }
            _ => panic!("expected a segment"),
        }
    }

    #[test]
    fn tail_density_and_median() {
        let t = table(alloc::vec![
            Bin::new(0.0, Some(10.0), 50.0, Some(5.0)),
            Bin::new(10.0, None, 50.0, Some(14.0)),
        ]);
        let fit = li_fit(&t).unwrap();
        // Tail at its start: q_J / (mean - a).
        assert_abs_diff_eq!(fit.density(10.0), 0.5 / 4.0, epsilon = 1e-12);
        // Tail median: u = 1 - q_J/2 -> a + scale ln 2.
        let x = fit.quantile(0.75).unwrap();
        assert_abs_diff_eq!(x, 10.0 + 4.0 * core::f64::consts::LN_2, epsilon = 1e-12);
    }

    #[test]
    fn cdf_hits_cumulative_proportions_at_bounds() {
        let t = table(alloc::vec![
            Bin::new(0.0, Some(2.0), 10.0, Some(0.8)),
            Bin::new(2.0, Some(6.0), 30.0, Some(4.2)),
            Bin::new(6.0, None, 60.0, Some(9.0)),
        ]);
        let fit = li_fit(&t).unwrap();
        assert_abs_diff_eq!(fit.cdf(2.0), 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.cdf(6.0), 0.4, epsilon = 1e-12);
        // Total mass reaches one in the limit.
        assert_abs_diff_eq!(fit.cdf(1e9), 1.0, epsilon = 1e-12);
        assert_eq!(fit.cdf(-1.0), 0.0);
    }

    #[test]
    fn quantile_cdf_round_trip() {
        let t = table(alloc::vec![
            Bin::new(0.0, Some(2.0), 10.0, Some(0.8)),
            Bin::new(2.0, Some(6.0), 30.0, Some(4.2)),
            Bin::new(6.0, None, 60.0, Some(9.0)),
        ]);
        let fit = li_fit(&t).unwrap();
        for i in 1..100 {
            let u = i as f64 / 100.0;
            let x = fit.quantile(u).unwrap();
            assert_abs_diff_eq!(fit.cdf(x), u, epsilon = 1e-10);
        }
        assert!(fit.quantile(0.0).is_err());
        assert!(fit.quantile(1.0).is_err());
    }

    #[test]
    fn atom_bins_jump_in_cdf() {
        let t = table(alloc::vec![
            Bin::new(0.0, Some(0.0), 20.0, None),
            Bin::new(1.0, Some(9.0), 80.0, Some(5.0)),
        ]);
        let fit = li_fit(&t).unwrap();
        assert_eq!(fit.cdf(-0.5), 0.0);
        assert_abs_diff_eq!(fit.cdf(0.0), 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.cdf(0.5), 0.2, epsilon = 1e-12);
        assert_eq!(fit.quantile(0.1).unwrap(), 0.0);
    }

    #[test]
    fn extreme_mean_clips_segment_but_keeps_mass() {
        // Mean far into the upper sixth forces a negative density at the
        // lower edge; the segment is floored and renormalized.
        let t = table(alloc::vec![
            Bin::new(0.0, Some(10.0), 50.0, Some(9.0)),
            Bin::new(10.0, None, 50.0, Some(15.0)),
        ]);
        let fit = li_fit(&t).unwrap();
        assert!(fit.has_clipped_segments());
        match fit.pieces()[0] {
            Piece::Segment(s) => {
                assert!(s.clipped);
                assert_abs_diff_eq!(s.mass_below(s.hi), 0.5, epsilon = 1e-12);
                assert!(fit.density(0.1) == 0.0);
            }
            _ => panic!("expected a segment"),
        }
        // cdf still reaches the cumulative proportion at the bound.
        assert_abs_diff_eq!(fit.cdf(10.0), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn missing_means_are_unsupported() {
        let t = table(alloc::vec![
            Bin::new(0.0, Some(10.0), 50.0, None),
            Bin::new(10.0, None, 50.0, Some(15.0)),
        ]);
        match li_fit(&t) {
            Err(Error::UnsupportedMethod(_)) => {}
            other => panic!("expected UnsupportedMethod, got {other:?}"),
        }
    }
}
