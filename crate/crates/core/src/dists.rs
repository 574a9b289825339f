//! Theoretical income distributions.
//!
//! Each model exposes an exact cdf, density and quantile function, an
//! inverse-transform sampler and the closed-form headcount ratio
//! `H_p = F(p * median)`. The headcount ratio is scale invariant, lies in
//! `[0, 1/2]` and is nondecreasing in `p`; these properties are exercised by
//! the test suites.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimate::Sample;
use crate::math::seed::open_unit;
use crate::math::{self, exp, ln, normal, powf, quad};

/// Fraction of the median defining the relative poverty line; strictly
/// between 0 and 1, conventionally 0.5 (OECD) or 0.6 (EU).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fraction(f64);

impl Fraction {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(Fraction(p))
        } else {
            Err(Error::Domain(format!(
                "poverty-line fraction must lie in (0, 1), got {p}"
            )))
        }
    }

    /// The conventional p = 0.5.
    pub fn half() -> Self {
        Fraction(0.5)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Fraction {
    fn default() -> Self {
        Fraction::half()
    }
}

/// A parametric income distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IncomeModel {
    /// Uniform on `[a, b]`.
    Uniform { a: f64, b: f64 },
    /// Lognormal: `ln X ~ N(mu, sigma^2)`.
    Lognormal { mu: f64, sigma: f64 },
    /// Exponential with the given rate.
    Exponential { rate: f64 },
    /// Pareto Type II: `F(x) = 1 - (1 + x/scale)^(-shape)`.
    ParetoII { shape: f64, scale: f64 },
    /// Weibull: `F(x) = 1 - exp(-(x/scale)^shape)`.
    Weibull { shape: f64, scale: f64 },
    /// Dagum: `F(x) = (1 + (x/b)^(-a))^(-p)`.
    Dagum { a: f64, b: f64, p: f64 },
    /// Singh-Maddala: `F(x) = 1 - (1 + (x/b)^a)^(-q)`.
    SinghMaddala { a: f64, b: f64, q: f64 },
    /// FKML generalized lambda distribution, defined by its quantile
    /// function with location `lambda`, inverse scale `eta` and shapes
    /// `alpha`, `beta`.
    Gld {
        lambda: f64,
        eta: f64,
        alpha: f64,
        beta: f64,
    },
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.to_string()))
    }
}

impl IncomeModel {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        require(a.is_finite() && b.is_finite() && a < b, "uniform requires a < b")?;
        Ok(IncomeModel::Uniform { a, b })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        require(mu.is_finite() && sigma > 0.0, "lognormal requires sigma > 0")?;
        Ok(IncomeModel::Lognormal { mu, sigma })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        require(rate > 0.0, "exponential requires rate > 0")?;
        Ok(IncomeModel::Exponential { rate })
    }

    /// Pareto Type II with unit scale.
    pub fn pareto2(shape: f64) -> Result<Self> {
        Self::pareto2_scaled(shape, 1.0)
    }

    pub fn pareto2_scaled(shape: f64, scale: f64) -> Result<Self> {
        require(shape > 0.0 && scale > 0.0, "pareto2 requires shape > 0 and scale > 0")?;
        Ok(IncomeModel::ParetoII { shape, scale })
    }

    /// Weibull with unit scale.
    pub fn weibull(shape: f64) -> Result<Self> {
        Self::weibull_scaled(shape, 1.0)
    }

    pub fn weibull_scaled(shape: f64, scale: f64) -> Result<Self> {
        require(shape > 0.0 && scale > 0.0, "weibull requires shape > 0 and scale > 0")?;
        Ok(IncomeModel::Weibull { shape, scale })
    }

    pub fn dagum(a: f64, b: f64, p: f64) -> Result<Self> {
        require(a > 0.0 && b > 0.0 && p > 0.0, "dagum requires positive a, b, p")?;
        Ok(IncomeModel::Dagum { a, b, p })
    }

    pub fn singh_maddala(a: f64, b: f64, q: f64) -> Result<Self> {
        require(a > 0.0 && b > 0.0 && q > 0.0, "singh-maddala requires positive a, b, q")?;
        Ok(IncomeModel::SinghMaddala { a, b, q })
    }

    pub fn gld(lambda: f64, eta: f64, alpha: f64, beta: f64) -> Result<Self> {
        require(
            lambda.is_finite() && eta > 0.0 && alpha.is_finite() && beta.is_finite(),
            "gld requires eta > 0 and finite lambda, alpha, beta",
        )?;
        Ok(IncomeModel::Gld { lambda, eta, alpha, beta })
    }

    /// The same family with every income multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        require(c > 0.0 && c.is_finite(), "scale factor must be positive")?;
        Ok(match *self {
            IncomeModel::Uniform { a, b } => IncomeModel::Uniform { a: c * a, b: c * b },
            IncomeModel::Lognormal { mu, sigma } => IncomeModel::Lognormal { mu: mu + ln(c), sigma },
            IncomeModel::Exponential { rate } => IncomeModel::Exponential { rate: rate / c },
            IncomeModel::ParetoII { shape, scale } => IncomeModel::ParetoII { shape, scale: c * scale },
            IncomeModel::Weibull { shape, scale } => IncomeModel::Weibull { shape, scale: c * scale },
            IncomeModel::Dagum { a, b, p } => IncomeModel::Dagum { a, b: c * b, p },
            IncomeModel::SinghMaddala { a, b, q } => IncomeModel::SinghMaddala { a, b: c * b, q },
            IncomeModel::Gld { lambda, eta, alpha, beta } => IncomeModel::Gld {
                lambda: c * lambda,
                eta: eta / c,
                alpha,
                beta,
            },
        })
    }

    /// Distribution function at `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            IncomeModel::Uniform { a, b } => {
                if x <= a {
                    0.0
                } else if x >= b {
                    1.0
                } else {
                    (x - a) / (b - a)
                }
            }
            IncomeModel::Lognormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    normal::cdf((ln(x) - mu) / sigma)
                }
            }
            IncomeModel::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -libm::expm1(-rate * x)
                }
            }
            IncomeModel::ParetoII { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0 - powf(1.0 + x / scale, -shape)
                }
            }
            IncomeModel::Weibull { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -libm::expm1(-powf(x / scale, shape))
                }
            }
            IncomeModel::Dagum { a, b, p } => {
                if x <= 0.0 {
                    0.0
                } else {
                    powf(1.0 + powf(x / b, -a), -p)
                }
            }
            IncomeModel::SinghMaddala { a, b, q } => {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0 - powf(1.0 + powf(x / b, a), -q)
                }
            }
            IncomeModel::Gld { .. } => self.gld_cdf(x),
        }
    }

    /// Density at `x`; zero outside the support.
    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            IncomeModel::Uniform { a, b } => {
                if x < a || x > b {
                    0.0
                } else {
                    1.0 / (b - a)
                }
            }
            IncomeModel::Lognormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    normal::pdf((ln(x) - mu) / sigma) / (sigma * x)
                }
            }
            IncomeModel::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * exp(-rate * x)
                }
            }
            IncomeModel::ParetoII { shape, scale } => {
                if x < 0.0 {
                    0.0
                } else {
                    shape / scale * powf(1.0 + x / scale, -shape - 1.0)
                }
            }
            IncomeModel::Weibull { shape, scale } => {
                if x < 0.0 {
                    0.0
                } else if x == 0.0 {
                    // Finite only for shape >= 1; shape == 1 gives the
                    // exponential's density at the origin.
                    if shape > 1.0 {
                        0.0
                    } else if shape == 1.0 {
                        1.0 / scale
                    } else {
                        f64::INFINITY
                    }
                } else {
                    let z = x / scale;
                    shape / scale * powf(z, shape - 1.0) * exp(-powf(z, shape))
                }
            }
            IncomeModel::Dagum { a, b, p } => {
                if x <= 0.0 {
                    0.0
                } else {
                    let z = powf(x / b, -a);
                    a * p / b * powf(x / b, -a - 1.0) * powf(1.0 + z, -p - 1.0)
                }
            }
            IncomeModel::SinghMaddala { a, b, q } => {
                if x <= 0.0 {
                    0.0
                } else {
                    let z = powf(x / b, a);
                    a * q / b * powf(x / b, a - 1.0) * powf(1.0 + z, -q - 1.0)
                }
            }
            IncomeModel::Gld { eta, alpha, beta, .. } => {
                let u = self.gld_cdf(x);
                if u <= 0.0 || u >= 1.0 {
                    return 0.0;
                }
                // f(x) = 1 / Q'(u) at u = F(x).
                eta / (powf(u, alpha - 1.0) + powf(1.0 - u, beta - 1.0))
            }
        }
    }

    /// Quantile function; `u` must lie strictly inside `(0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {u}")));
        }
        Ok(self.quantile_unchecked(u))
    }

    #[inline]
    fn quantile_unchecked(&self, u: f64) -> f64 {
        match *self {
            IncomeModel::Uniform { a, b } => a + (b - a) * u,
            IncomeModel::Lognormal { mu, sigma } => exp(mu + sigma * normal::quantile(u)),
            IncomeModel::Exponential { rate } => -libm::log1p(-u) / rate,
            IncomeModel::ParetoII { shape, scale } => scale * (powf(1.0 - u, -1.0 / shape) - 1.0),
            IncomeModel::Weibull { shape, scale } => scale * powf(-libm::log1p(-u), 1.0 / shape),
            IncomeModel::Dagum { a, b, p } => b * powf(powf(u, -1.0 / p) - 1.0, -1.0 / a),
            IncomeModel::SinghMaddala { a, b, q } => b * powf(powf(1.0 - u, -1.0 / q) - 1.0, 1.0 / a),
            IncomeModel::Gld { lambda, eta, alpha, beta } => {
                lambda + gld_s_term(u, alpha, beta) / eta
            }
        }
    }

    /// Median, `Q(1/2)`.
    pub fn median(&self) -> f64 {
        self.quantile_unchecked(0.5)
    }

    /// `n` inverse-transform draws, sorted; identical output for identical
    /// seeds.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Sample> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with_rng(n, &mut rng)
    }

    /// Like [`IncomeModel::sample`] but drawing from a caller-provided
    /// generator, for use inside larger deterministic schemes.
    pub fn sample_with_rng<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Sample> {
        if n == 0 {
            return Err(Error::Domain("sample size must be at least 1".to_string()));
        }
        let values: Vec<f64> = (0..n).map(|_| self.quantile_unchecked(open_unit(rng))).collect();
        Sample::new(values)
    }

    /// The headcount ratio `H_p = F(p * median)`, via the closed form where
    /// one exists.
    pub fn headcount_true(&self, p: Fraction) -> f64 {
        let p = p.value();
        match *self {
            IncomeModel::Uniform { a, b } => {
                let line = p * (a + b) / 2.0;
                if line <= a {
                    0.0
                } else {
                    (line - a) / (b - a)
                }
            }
            // F(p e^mu) = Phi(ln(p)/sigma): scale-free in mu.
            IncomeModel::Lognormal { sigma, .. } => normal::cdf(ln(p) / sigma),
            // Weibull/exponential: F(p * M) = 1 - 2^(-p^shape).
            IncomeModel::Exponential { .. } => 1.0 - powf(2.0, -p),
            IncomeModel::Weibull { shape, .. } => 1.0 - powf(2.0, -powf(p, shape)),
            // Pareto II: F(p * M) = 1 - (1 + p(2^(1/a) - 1))^(-a).
            IncomeModel::ParetoII { shape, .. } => {
                1.0 - powf(1.0 + p * (powf(2.0, 1.0 / shape) - 1.0), -shape)
            }
            _ => self.cdf(p * self.median()),
        }
    }

    /// `E[X | X < t]` by adaptive quadrature of `x f(x)`.
    pub fn conditional_mean_below(&self, t: f64) -> Result<f64> {
        let prob = self.cdf(t);
        if !(prob > 1e-10 && prob < 1.0 - 1e-10) {
            return Err(Error::Domain(format!(
                "conditional region has probability {prob}; threshold {t} is degenerate"
            )));
        }
        let lo = self.support_lower();
        let mass = quad::integrate(|x| x * self.pdf(x), lo, t, 1e-10);
        Ok(mass / prob)
    }

    /// `E[X | X > t]`; unbounded tails are truncated at `Q(1 - 1e-12)`,
    /// which is below reporting precision for finite-mean regions.
    pub fn conditional_mean_above(&self, t: f64) -> Result<f64> {
        let prob = self.cdf(t);
        if !(prob > 1e-10 && prob < 1.0 - 1e-10) {
            return Err(Error::Domain(format!(
                "conditional region has probability {}; threshold {t} is degenerate",
                1.0 - prob
            )));
        }
        let hi = self.quantile_unchecked(1.0 - 1e-12);
        let mass = quad::integrate(|x| x * self.pdf(x), t, hi, 1e-10);
        Ok(mass / (1.0 - prob))
    }

    /// Lower end of the support.
    pub(crate) fn support_lower(&self) -> f64 {
        match *self {
            IncomeModel::Uniform { a, .. } => a,
            IncomeModel::Gld { lambda, eta, alpha, .. } => {
                if alpha > 0.0 {
                    lambda - 1.0 / (eta * alpha)
                } else {
                    self.quantile_unchecked(1e-15)
                }
            }
            _ => 0.0,
        }
    }

    /// Inverts the GLD quantile function by bisection on `u`.
    fn gld_cdf(&self, x: f64) -> f64 {
        let (lambda, eta, alpha, beta) = match *self {
            IncomeModel::Gld { lambda, eta, alpha, beta } => (lambda, eta, alpha, beta),
            _ => unreachable!(),
        };
        let q = |u: f64| lambda + gld_s_term(u, alpha, beta) / eta;
        let mut lo = 1e-15;
        let mut hi = 1.0 - 1e-15;
        if x <= q(lo) {
            return 0.0;
        }
        if x >= q(hi) {
            return 1.0;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if q(mid) < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// The shape part of the FKML quantile function,
/// `(u^alpha - 1)/alpha - ((1-u)^beta - 1)/beta`, with the log limits at
/// zero shape.
#[inline]
pub(crate) fn gld_s_term(u: f64, alpha: f64, beta: f64) -> f64 {
    let ua = if math::abs(alpha) < 1e-9 {
        ln(u)
    } else {
        (powf(u, alpha) - 1.0) / alpha
    };
    let ub = if math::abs(beta) < 1e-9 {
        ln(1.0 - u)
    } else {
        (powf(1.0 - u, beta) - 1.0) / beta
    };
    ua - ub
}

/// Parses `family(param, ...)` specification strings, e.g.
/// `lognormal(0,1)` or `singhmaddala(1.6971,87.6981,8.3679)`.
impl FromStr for IncomeModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| {
            Error::InvalidParameter(format!("model spec '{s}' must look like family(param,...)"))
        })?;
        if !s.ends_with(')') {
            return Err(Error::InvalidParameter(format!(
                "model spec '{s}' must end with ')'"
            )));
        }
        let family = s[..open].trim().to_lowercase();
        let args: Vec<f64> = s[open + 1..s.len() - 1]
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad numeric parameter '{}'", a.trim())))
            })
            .collect::<Result<_>>()?;
        let argc = args.len();
        let wrong_arity = |expect: &str| {
            Err(Error::InvalidParameter(format!(
                "{family} takes {expect} parameter(s), got {argc}"
            )))
        };
        match family.as_str() {
            "uniform" | "unif" => match args[..] {
                [a, b] => IncomeModel::uniform(a, b),
                _ => wrong_arity("2"),
            },
            "lognormal" | "ln" => match args[..] {
                [mu, sigma] => IncomeModel::lognormal(mu, sigma),
                _ => wrong_arity("2"),
            },
            "exponential" | "exp" => match args[..] {
                [rate] => IncomeModel::exponential(rate),
                _ => wrong_arity("1"),
            },
            "pareto" | "pareto2" | "paretoii" => match args[..] {
                [shape] => IncomeModel::pareto2(shape),
                [shape, scale] => IncomeModel::pareto2_scaled(shape, scale),
                _ => wrong_arity("1 or 2"),
            },
            "weibull" => match args[..] {
                [shape] => IncomeModel::weibull(shape),
                [shape, scale] => IncomeModel::weibull_scaled(shape, scale),
                _ => wrong_arity("1 or 2"),
            },
            "dagum" => match args[..] {
                [a, b, p] => IncomeModel::dagum(a, b, p),
                _ => wrong_arity("3"),
            },
            "singhmaddala" | "singh-maddala" | "sm" => match args[..] {
                [a, b, q] => IncomeModel::singh_maddala(a, b, q),
                _ => wrong_arity("3"),
            },
            "gld" => match args[..] {
                [lambda, eta, alpha, beta] => IncomeModel::gld(lambda, eta, alpha, beta),
                _ => wrong_arity("4"),
            },
            _ => Err(Error::InvalidParameter(format!("unknown family '{family}'"))),
        }
    }
}

impl core::fmt::Display for IncomeModel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match *self {
            IncomeModel::Uniform { a, b } => write!(f, "uniform({a},{b})"),
            IncomeModel::Lognormal { mu, sigma } => write!(f, "lognormal({mu},{sigma})"),
            IncomeModel::Exponential { rate } => write!(f, "exponential({rate})"),
            IncomeModel::ParetoII { shape, scale } => {
                if scale == 1.0 {
                    write!(f, "pareto({shape})")
                } else {
                    write!(f, "pareto({shape},{scale})")
                }
            }
            IncomeModel::Weibull { shape, scale } => {
                if scale == 1.0 {
                    write!(f, "weibull({shape})")
                } else {
                    write!(f, "weibull({shape},{scale})")
                }
            }
            IncomeModel::Dagum { a, b, p } => write!(f, "dagum({a},{b},{p})"),
            IncomeModel::SinghMaddala { a, b, q } => write!(f, "singhmaddala({a},{b},{q})"),
            IncomeModel::Gld { lambda, eta, alpha, beta } => {
                write!(f, "gld({lambda},{eta},{alpha},{beta})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ln01() -> IncomeModel {
        IncomeModel::lognormal(0.0, 1.0).unwrap()
    }

    #[test]
    fn lognormal_cdf_at_half() {
        // Phi(-ln 2) = 0.244108
        assert_abs_diff_eq!(ln01().cdf(0.5), 0.244108, epsilon = 1e-6);
    }

    #[test]
    fn cdf_left_of_support_is_zero() {
        for m in [
            ln01(),
            IncomeModel::exponential(1.0).unwrap(),
            IncomeModel::pareto2(2.0).unwrap(),
            IncomeModel::weibull(2.0).unwrap(),
            IncomeModel::dagum(4.273, 14.28, 0.36).unwrap(),
            IncomeModel::singh_maddala(1.6971, 87.6981, 8.3679).unwrap(),
        ] {
            assert_eq!(m.cdf(0.0), 0.0, "{m}");
            assert_eq!(m.cdf(-3.0), 0.0, "{m}");
        }
    }

    #[test]
    fn pareto2_median_is_one_at_unit_shape() {
        // M = 2^(1/a) - 1 = 1 for a = 1.
        let m = IncomeModel::pareto2(1.0).unwrap();
        assert_abs_diff_eq!(m.cdf(1.0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m.median(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn weibull_median_closed_form() {
        for b in [0.5, 1.0, 2.0, 6.0] {
            let m = IncomeModel::weibull(b).unwrap();
            let expected = powf(core::f64::consts::LN_2, 1.0 / b);
            assert_abs_diff_eq!(m.quantile(0.5).unwrap(), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn gld_median_is_lambda_when_shapes_match() {
        let m = IncomeModel::gld(3.7, 2.0, 0.4, 0.4).unwrap();
        assert_abs_diff_eq!(m.quantile(0.5).unwrap(), 3.7, epsilon = 1e-12);
    }

    #[test]
    fn lognormal_upper_quintile() {
        assert_abs_diff_eq!(ln01().quantile(0.8).unwrap(), 2.3201253945, epsilon = 1e-6);
        assert_abs_diff_eq!(ln01().quantile(0.8).unwrap(), 2.32, epsilon = 5e-3);
    }

    #[test]
    fn quantile_rejects_boundary_levels() {
        assert!(ln01().quantile(0.0).is_err());
        assert!(ln01().quantile(1.0).is_err());
        assert!(ln01().quantile(-0.2).is_err());
    }

    #[test]
    fn cdf_quantile_round_trip_all_families() {
        let models = [
            IncomeModel::uniform(0.0, 10.0).unwrap(),
            ln01(),
            IncomeModel::exponential(0.7).unwrap(),
            IncomeModel::pareto2(2.0).unwrap(),
            IncomeModel::weibull(2.0).unwrap(),
            IncomeModel::dagum(4.273, 14.28, 0.36).unwrap(),
            IncomeModel::singh_maddala(1.6971, 87.6981, 8.3679).unwrap(),
        ];
        for m in models {
            for i in 1..100 {
                let u = i as f64 / 100.0;
                let x = m.quantile(u).unwrap();
                assert_abs_diff_eq!(m.cdf(x), u, epsilon = 1e-10);
            }
        }
        // Numeric inversion for the GLD cdf.
        let g = IncomeModel::gld(1.0, 1.5, 0.2, -0.1).unwrap();
        for i in 1..100 {
            let u = i as f64 / 100.0;
            let x = g.quantile(u).unwrap();
            assert_abs_diff_eq!(g.cdf(x), u, epsilon = 1e-8);
        }
    }

    #[test]
    fn exponential_density_at_origin_is_rate() {
        let m = IncomeModel::exponential(1.0).unwrap();
        assert_eq!(m.pdf(0.0), 1.0);
    }

    #[test]
    fn uniform_density_is_flat() {
        let m = IncomeModel::uniform(0.0, 10.0).unwrap();
        assert_eq!(m.pdf(5.0), 0.1);
        assert_eq!(m.pdf(-1.0), 0.0);
        assert_eq!(m.pdf(11.0), 0.0);
    }

    #[test]
    fn dagum_density_positive_at_median() {
        let m = IncomeModel::dagum(4.273, 14.28, 0.36).unwrap();
        let med = m.median();
        let f = m.pdf(med);
        assert!(f.is_finite() && f > 0.0);
        // Numeric differentiation of the cdf as the independent check.
        let h = 1e-5 * med;
        let fd = (m.cdf(med + h) - m.cdf(med - h)) / (2.0 * h);
        assert_abs_diff_eq!(f, fd, epsilon = 1e-6);
    }

    #[test]
    fn pdf_matches_cdf_derivative_on_grid() {
        let models = [
            ln01(),
            IncomeModel::exponential(1.0).unwrap(),
            IncomeModel::pareto2(2.0).unwrap(),
            IncomeModel::weibull(2.0).unwrap(),
            IncomeModel::dagum(4.273, 14.28, 0.36).unwrap(),
            IncomeModel::singh_maddala(1.6971, 87.6981, 8.3679).unwrap(),
            IncomeModel::gld(1.0, 1.0, 0.2, 0.1).unwrap(),
        ];
        for m in models {
            for i in 1..20 {
                let u = i as f64 / 20.0;
                let x = m.quantile(u).unwrap();
                let h = (1e-5 * x.abs()).max(1e-7);
                let fd = (m.cdf(x + h) - m.cdf(x - h)) / (2.0 * h);
                assert_abs_diff_eq!(m.pdf(x), fd, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn pdf_integrates_to_one() {
        let models = [
            ln01(),
            IncomeModel::exponential(1.0).unwrap(),
            IncomeModel::weibull(2.0).unwrap(),
            IncomeModel::dagum(4.273, 14.28, 0.36).unwrap(),
        ];
        for m in models {
            let hi = m.quantile(1.0 - 1e-10).unwrap();
            let mass = quad::integrate(|x| m.pdf(x), m.support_lower(), hi, 1e-10);
            assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = ln01();
        let a = m.sample(5, 99).unwrap();
        let b = m.sample(5, 99).unwrap();
        assert_eq!(a.values(), b.values());
        let c = m.sample(5, 100).unwrap();
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn sampling_median_consistency() {
        let m = ln01();
        let s = m.sample(100_000, 42).unwrap();
        let med = crate::estimate::sample_median(&s);
        assert_abs_diff_eq!(med, 1.0, epsilon = 0.02);
    }

    #[test]
    fn uniform_sampling_stays_in_support() {
        let m = IncomeModel::uniform(0.0, 10.0).unwrap();
        let s = m.sample(100_000, 7).unwrap();
        assert!(s.values().iter().all(|&x| (0.0..=10.0).contains(&x)));
    }

    #[test]
    fn empirical_cdf_close_to_truth() {
        // Kolmogorov distance of 1e5 inverse-transform draws.
        let models = [
            ln01(),
            IncomeModel::uniform(0.0, 10.0).unwrap(),
            IncomeModel::dagum(4.273, 14.28, 0.36).unwrap(),
            // lower support endpoint at 5 - 1/(eta*alpha) = 0
            IncomeModel::gld(5.0, 1.0, 0.2, 0.1).unwrap(),
        ];
        for m in models {
            let s = m.sample(100_000, 11).unwrap();
            let n = s.n() as f64;
            let mut ks = 0.0_f64;
            for (i, &x) in s.values().iter().enumerate() {
                let f = m.cdf(x);
                ks = ks.max((f - i as f64 / n).abs());
                ks = ks.max(((i + 1) as f64 / n - f).abs());
            }
            assert!(ks < 0.01, "{m}: KS = {ks}");
        }
    }

    #[test]
    fn headcount_paper_values() {
        assert_abs_diff_eq!(ln01().headcount_true(Fraction::half()), 0.244108, epsilon = 1e-5);
        let h = |a: f64| IncomeModel::pareto2(a).unwrap().headcount_true(Fraction::half());
        assert_abs_diff_eq!(h(1.0), 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(h(2.0), 0.3137, epsilon = 1e-4);
        assert_abs_diff_eq!(h(6.0), 0.29993, epsilon = 1e-5);
        let w = |b: f64| IncomeModel::weibull(b).unwrap().headcount_true(Fraction::half());
        assert_abs_diff_eq!(w(1.0), 0.29289, epsilon = 1e-5);
        assert_abs_diff_eq!(w(2.0), 0.1591, epsilon = 1e-4);
        assert_abs_diff_eq!(w(6.0), 0.0108, epsilon = 5e-5);
        let u = IncomeModel::uniform(0.0, 10.0).unwrap();
        assert_abs_diff_eq!(u.headcount_true(Fraction::half()), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn exponential_is_unit_weibull() {
        let e = IncomeModel::exponential(1.0).unwrap();
        let w = IncomeModel::weibull(1.0).unwrap();
        for p in [0.3, 0.5, 0.6, 0.9] {
            let p = Fraction::new(p).unwrap();
            assert_eq!(e.headcount_true(p), w.headcount_true(p));
        }
        for x in [0.1, 0.5, 1.0, 3.0] {
            assert_eq!(e.cdf(x), w.cdf(x));
        }
    }

    #[test]
    fn pareto_headcount_decreases_toward_limit() {
        let limit = 1.0 - core::f64::consts::SQRT_2 / 2.0;
        let mut prev = 0.5;
        for a in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 32.0, 256.0] {
            let h = IncomeModel::pareto2(a).unwrap().headcount_true(Fraction::half());
            assert!(h < prev, "H must decrease in the shape parameter");
            assert!(h > limit);
            prev = h;
        }
        let far = IncomeModel::pareto2(5000.0).unwrap().headcount_true(Fraction::half());
        assert_abs_diff_eq!(far, limit, epsilon = 1e-4);
    }

    #[test]
    fn headcount_scale_invariance() {
        let models = [
            IncomeModel::uniform(1.0, 7.0).unwrap(),
            ln01(),
            IncomeModel::exponential(0.3).unwrap(),
            IncomeModel::pareto2(2.0).unwrap(),
            IncomeModel::weibull(3.0).unwrap(),
            IncomeModel::dagum(4.273, 14.28, 0.36).unwrap(),
            IncomeModel::singh_maddala(1.6971, 87.6981, 8.3679).unwrap(),
            IncomeModel::gld(1.0, 1.0, 0.2, 0.1).unwrap(),
        ];
        let p = Fraction::new(0.6).unwrap();
        for m in models {
            let h = m.headcount_true(p);
            for c in [0.001, 0.5, 3.0, 1e6] {
                let hc = m.scaled(c).unwrap().headcount_true(p);
                assert_abs_diff_eq!(h, hc, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn headcount_bounds_and_monotonicity() {
        let models = [
            IncomeModel::uniform(2.0, 9.0).unwrap(),
            ln01(),
            IncomeModel::pareto2(0.7).unwrap(),
            IncomeModel::dagum(4.273, 14.28, 0.36).unwrap(),
        ];
        for m in models {
            let mut prev = 0.0;
            for i in 1..20 {
                let p = Fraction::new(i as f64 / 20.0).unwrap();
                let h = m.headcount_true(p);
                assert!((0.0..=0.5).contains(&h), "{m}: H={h}");
                assert!(h >= prev - 1e-12);
                prev = h;
            }
        }
    }

    #[test]
    fn conditional_means_lognormal_paper_values() {
        let m = ln01();
        assert_abs_diff_eq!(m.conditional_mean_below(0.5).unwrap(), 0.3053757, epsilon = 1e-6);
        // The exact value at 2.32 is 4.64032; the reference prints 4.635984.
        let above = m.conditional_mean_above(2.32).unwrap();
        assert_abs_diff_eq!(above, 4.635984, epsilon = 1e-2);
        assert_abs_diff_eq!(above, 4.640322164711, epsilon = 1e-6);
    }

    #[test]
    fn conditional_mean_uniform_midpoint() {
        let m = IncomeModel::uniform(0.0, 10.0).unwrap();
        assert_abs_diff_eq!(m.conditional_mean_below(5.0).unwrap(), 2.5, epsilon = 1e-9);
        assert_abs_diff_eq!(m.conditional_mean_above(5.0).unwrap(), 7.5, epsilon = 1e-9);
    }

    #[test]
    fn conditional_mean_degenerate_region_errors() {
        let m = ln01();
        assert!(m.conditional_mean_below(1e-30).is_err());
        assert!(m.conditional_mean_above(1e300).is_err());
    }

    #[test]
    fn parse_model_specs() {
        let m: IncomeModel = "lognormal(0,1)".parse().unwrap();
        assert_eq!(m, ln01());
        let m: IncomeModel = "singhmaddala(1.6971, 87.6981, 8.3679)".parse().unwrap();
        assert_eq!(m, IncomeModel::singh_maddala(1.6971, 87.6981, 8.3679).unwrap());
        let m: IncomeModel = "Pareto(2)".parse().unwrap();
        assert_eq!(m, IncomeModel::pareto2(2.0).unwrap());
        assert!("lognormal(0,1".parse::<IncomeModel>().is_err());
        assert!("nosuch(1)".parse::<IncomeModel>().is_err());
        assert!("uniform(5,1)".parse::<IncomeModel>().is_err());
        assert!("lognormal(0,1,2)".parse::<IncomeModel>().is_err());
    }

    #[test]
    fn display_round_trips_through_parser() {
        let models = [
            ln01(),
            IncomeModel::dagum(4.273, 14.28, 0.36).unwrap(),
            IncomeModel::gld(1.0, 1.0, 0.2, 0.1).unwrap(),
        ];
        for m in models {
            let s = alloc::format!("{m}");
            let back: IncomeModel = s.parse().unwrap();
            assert_eq!(m, back);
        }
    }
}
