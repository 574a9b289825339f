//! Monte Carlo studies: interval coverage on complete data, grouped-data
//! bias, and grouped-bootstrap coverage.
//!
//! Every replicate's generator seed is a fixed function of
//! `(master seed, cell index, replicate index)`, and per-cell results fold
//! replicate outcomes in index order, so a study's output is bit-identical
//! for any worker count.

use alloc::string::String;
use alloc::vec::Vec;
use core::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dists::{Fraction, IncomeModel};
use crate::error::{Error, Result};
use crate::estimate::headcount_estimate;
use crate::grouped::{
    fit_table, grouped_bootstrap_interval, grouped_bootstrap_se, BootstrapVariant, GroupedMethod,
    GroupedTable,
};
use crate::intervals::{
    binomial_interval, bootstrap_interval, median_substitution_interval, wald_interval,
    BinomialVariant, BootstrapConfig, CiMethod, IntervalEstimate, SeVariant,
};
use crate::math::{seed, sqrt};

/// A distribution together with its display name.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedModel {
    pub name: String,
    pub model: IncomeModel,
}

impl NamedModel {
    pub fn new(name: impl Into<String>, model: IncomeModel) -> Self {
        NamedModel { name: name.into(), model }
    }
}

/// Method under study: an interval construction or a grouped estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StudyMethod {
    Ci(CiMethod),
    Grouped(GroupedMethod),
}

impl StudyMethod {
    pub fn tag(self) -> &'static str {
        match self {
            StudyMethod::Ci(m) => m.tag(),
            StudyMethod::Grouped(m) => m.tag(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        GroupedMethod::parse(s)
            .map(StudyMethod::Grouped)
            .or_else(|_| CiMethod::parse(s).map(StudyMethod::Ci))
    }
}

impl core::fmt::Display for StudyMethod {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.tag())
    }
}

/// How samples are summarized before grouped estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupingScheme {
    /// Number of quantile bins (10 = deciles).
    pub quantile_bins: usize,
    /// Record within-bin means (required by the linear-interpolation fit).
    pub with_means: bool,
}

impl Default for GroupingScheme {
    fn default() -> Self {
        GroupingScheme { quantile_bins: 10, with_means: true }
    }
}

/// Declarative description of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub distributions: Vec<NamedModel>,
    pub methods: Vec<StudyMethod>,
    pub p_values: Vec<f64>,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    /// Resamples per bootstrap interval.
    pub bootstrap_replicates: usize,
    pub level: f64,
    pub master_seed: u64,
    pub grouping: Option<GroupingScheme>,
    /// Replicate handling inside grouped bootstrap intervals.
    pub grouped_boot_variant: BootstrapVariant,
    /// Attach a bootstrap standard error to each bias-study fit (slow).
    pub bias_bootstrap_se: bool,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            distributions: Vec::new(),
            methods: Vec::new(),
            p_values: alloc::vec![0.5],
            sample_sizes: alloc::vec![1000],
            replications: 500,
            bootstrap_replicates: 200,
            level: 0.95,
            master_seed: 0x5EED_CAFE,
            grouping: None,
            grouped_boot_variant: BootstrapVariant::Refit,
            bias_bootstrap_se: false,
        }
    }
}

impl StudyConfig {
    fn validate(&self) -> Result<()> {
        if self.distributions.is_empty() {
            return Err(Error::InvalidParameter("study needs at least one distribution".into()));
        }
        let mut names: Vec<&str> = self.distributions.iter().map(|d| d.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.distributions.len() {
            return Err(Error::InvalidParameter("distribution names must be unique".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter("study needs at least one method".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidParameter("study needs at least one replication".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidParameter("level must lie in (0, 1)".into()));
        }
        for &p in &self.p_values {
            Fraction::new(p)?;
        }
        for &n in &self.sample_sizes {
            if n < 2 {
                return Err(Error::InvalidParameter("sample sizes must be at least 2".into()));
            }
        }
        Ok(())
    }

    fn grouping_or_default(&self) -> GroupingScheme {
        self.grouping.unwrap_or_default()
    }
}

/// One cell of the study grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CellKey {
    pub method: StudyMethod,
    pub distribution: String,
    pub p: f64,
    pub n: usize,
}

/// Per-cell summaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellStats {
    Coverage {
        /// Share of replicates whose interval covered the truth.
        coverage: f64,
        mean_width: f64,
        /// Binomial Monte Carlo error of the coverage estimate.
        mc_stderr: f64,
    },
    Bias {
        mse: f64,
        /// Absolute difference between the mean estimate and the truth.
        abs_bias: f64,
        mean_boot_se: Option<f64>,
    },
}

/// Result cell: key, the true headcount it was judged against, stats and
/// bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyCell {
    pub key: CellKey,
    pub truth: f64,
    pub stats: CellStats,
    pub replications: usize,
    pub failures: usize,
    /// Set when more than 5% of replicates failed.
    pub flagged: bool,
}

/// A completed study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    pub cells: Vec<StudyCell>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
struct CellSpec {
    key: CellKey,
    model: IncomeModel,
    truth: f64,
    index: u64,
}

enum RepOutcome {
    Cover { covered: bool, width: f64 },
    Value { h: f64, boot_se: Option<f64> },
}

fn enumerate_cells(cfg: &StudyConfig, methods: &[StudyMethod]) -> Result<Vec<CellSpec>> {
    let mut cells = Vec::new();
    let mut index = 0u64;
    for &method in methods {
        for &p in &cfg.p_values {
            let p = Fraction::new(p)?;
            for dist in &cfg.distributions {
                for &n in &cfg.sample_sizes {
                    cells.push(CellSpec {
                        key: CellKey {
                            method,
                            distribution: dist.name.clone(),
                            p: p.value(),
                            n,
                        },
                        model: dist.model,
                        truth: dist.model.headcount_true(p),
                        index,
                    });
                    index += 1;
                }
            }
        }
    }
    Ok(cells)
}

fn coverage_replicate(cfg: &StudyConfig, cell: &CellSpec, rep: usize) -> Result<RepOutcome> {
    let method = match cell.key.method {
        StudyMethod::Ci(m) => m,
        StudyMethod::Grouped(_) => {
            return Err(Error::InvalidParameter(
                "grouped methods belong to the grouped studies".into(),
            ))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.master_seed, cell.index, rep as u64));
    let s = cell.model.sample_with_rng(cell.key.n, &mut rng)?;
    let p = Fraction::new(cell.key.p)?;
    let level = cfg.level;
    let iv: IntervalEstimate = match method {
        CiMethod::WaldBinomial | CiMethod::AgrestiCoull | CiMethod::ClopperPearson | CiMethod::Wilson => {
            let variant = match method {
                CiMethod::WaldBinomial => BinomialVariant::Wald,
                CiMethod::AgrestiCoull => BinomialVariant::AgrestiCoull,
                CiMethod::ClopperPearson => BinomialVariant::ClopperPearson,
                _ => BinomialVariant::Wilson,
            };
            let est = headcount_estimate(&s, p);
            binomial_interval(est.h_hat, s.n(), level, variant)?
        }
        CiMethod::Wald1 => wald_interval(&s, p, level, SeVariant::Se1)?,
        CiMethod::Wald2 => wald_interval(&s, p, level, SeVariant::Se2)?,
        CiMethod::MedianSubstitution => median_substitution_interval(&s, p, level)?,
        CiMethod::PercentileBootstrap => {
            let boot_seed = rng.gen::<u64>();
            let cfg_b = BootstrapConfig::for_level(cfg.bootstrap_replicates, boot_seed, level)?;
            bootstrap_interval(&s, p, &cfg_b)?
        }
    };
    Ok(RepOutcome::Cover {
        covered: iv.covers(cell.truth),
        width: iv.width,
    })
}

fn grouped_fit_for(
    cfg: &StudyConfig,
    cell: &CellSpec,
    rng: &mut ChaCha8Rng,
) -> Result<(crate::grouped::GroupedFit, GroupedTable)> {
    let method = match cell.key.method {
        StudyMethod::Grouped(m) => m,
        StudyMethod::Ci(_) => {
            return Err(Error::InvalidParameter(
                "interval methods belong to the coverage study".into(),
            ))
        }
    };
    let scheme = cfg.grouping_or_default();
    let s = cell.model.sample_with_rng(cell.key.n, rng)?;
    let mut table = GroupedTable::from_sample_quantiles(&s, scheme.quantile_bins)?;
    if !scheme.with_means {
        if method == GroupedMethod::Li {
            return Err(Error::UnsupportedMethod(
                "linear interpolation needs a grouping scheme with means".into(),
            ));
        }
        let stripped: Vec<_> = table
            .bins()
            .iter()
            .map(|b| crate::grouped::Bin::new(b.lower, b.upper, b.count, None))
            .collect();
        table = GroupedTable::new(stripped)?;
    }
    let fit = fit_table(&table, method)?;
    Ok((fit, table))
}

fn bias_replicate(cfg: &StudyConfig, cell: &CellSpec, rep: usize) -> Result<RepOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.master_seed, cell.index, rep as u64));
    let (fit, table) = grouped_fit_for(cfg, cell, &mut rng)?;
    let p = Fraction::new(cell.key.p)?;
    let h = crate::grouped::grouped_headcount(&fit, p)?;
    let boot_se = if cfg.bias_bootstrap_se {
        let cfg_b = BootstrapConfig::for_level(cfg.bootstrap_replicates, rng.gen::<u64>(), cfg.level)?;
        Some(grouped_bootstrap_se(&fit, &table, p, &cfg_b, cfg.grouped_boot_variant)?)
    } else {
        None
    };
    Ok(RepOutcome::Value { h, boot_se })
}

fn grouped_coverage_replicate(cfg: &StudyConfig, cell: &CellSpec, rep: usize) -> Result<RepOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.master_seed, cell.index, rep as u64));
    let (fit, table) = grouped_fit_for(cfg, cell, &mut rng)?;
    let p = Fraction::new(cell.key.p)?;
    let cfg_b = BootstrapConfig::for_level(cfg.bootstrap_replicates, rng.gen::<u64>(), cfg.level)?;
    let iv = grouped_bootstrap_interval(&fit, &table, p, &cfg_b, cfg.grouped_boot_variant)?;
    Ok(RepOutcome::Cover {
        covered: iv.covers(cell.truth),
        width: iv.width,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum StudyKind {
    Coverage,
    Bias,
}

/// Folds replicate outcomes (in replicate order) into a cell.
fn fold_cell(cell: &CellSpec, kind: StudyKind, outcomes: Vec<Result<RepOutcome>>) -> StudyCell {
    let reps = outcomes.len();
    let mut failures = 0usize;
    let mut covered = 0usize;
    let mut width_sum = 0.0;
    let mut values: Vec<f64> = Vec::new();
    let mut se_sum = 0.0;
    let mut se_count = 0usize;
    for outcome in outcomes {
        match outcome {
            Err(_) => failures += 1,
            Ok(RepOutcome::Cover { covered: c, width }) => {
                if c {
                    covered += 1;
                }
                width_sum += width;
            }
            Ok(RepOutcome::Value { h, boot_se }) => {
                values.push(h);
                if let Some(se) = boot_se {
                    se_sum += se;
                    se_count += 1;
                }
            }
        }
    }
    let ok = reps - failures;
    let stats = if kind == StudyKind::Coverage {
        let coverage = if ok > 0 { covered as f64 / ok as f64 } else { f64::NAN };
        CellStats::Coverage {
            coverage,
            mean_width: if ok > 0 { width_sum / ok as f64 } else { f64::NAN },
            mc_stderr: if ok > 0 {
                sqrt(coverage * (1.0 - coverage) / ok as f64)
            } else {
                f64::NAN
            },
        }
    } else {
        let mean = if values.is_empty() {
            f64::NAN
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        };
        let mse = if values.is_empty() {
            f64::NAN
        } else {
            values.iter().map(|h| (h - cell.truth) * (h - cell.truth)).sum::<f64>()
                / values.len() as f64
        };
        CellStats::Bias {
            mse,
            abs_bias: crate::math::abs(mean - cell.truth),
            mean_boot_se: if se_count > 0 { Some(se_sum / se_count as f64) } else { None },
        }
    };
    StudyCell {
        key: cell.key.clone(),
        truth: cell.truth,
        stats,
        replications: reps,
        failures,
        flagged: failures * 20 > reps,
    }
}

fn run_replicates<F>(cfg: &StudyConfig, cell: &CellSpec, workers: usize, f: F) -> Vec<Result<RepOutcome>>
where
    F: Fn(&StudyConfig, &CellSpec, usize) -> Result<RepOutcome> + Sync,
{
    let reps = cfg.replications;
    #[cfg(feature = "std")]
    {
        let workers = workers.max(1).min(reps.max(1));
        if workers > 1 {
            let chunk = reps.div_ceil(workers);
            let mut parts: Vec<Vec<Result<RepOutcome>>> = Vec::new();
            std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for w in 0..workers {
                    let lo = w * chunk;
                    let hi = ((w + 1) * chunk).min(reps);
                    if lo >= hi {
                        break;
                    }
                    let f = &f;
                    handles.push(scope.spawn(move || (lo..hi).map(|r| f(cfg, cell, r)).collect::<Vec<_>>()));
                }
                for handle in handles {
                    parts.push(handle.join().expect("worker panicked"));
                }
            });
            return parts.into_iter().flatten().collect();
        }
    }
    let _ = workers;
    (0..reps).map(|r| f(cfg, cell, r)).collect()
}

fn run_study<F>(
    cfg: &StudyConfig,
    methods: &[StudyMethod],
    kind: StudyKind,
    workers: usize,
    f: F,
) -> Result<StudyResult>
where
    F: Fn(&StudyConfig, &CellSpec, usize) -> Result<RepOutcome> + Sync,
{
    cfg.validate()?;
    #[cfg(feature = "std")]
    let start = std::time::Instant::now();
    let cells = enumerate_cells(cfg, methods)?;
    let mut out = Vec::with_capacity(cells.len());
    for cell in &cells {
        let outcomes = run_replicates(cfg, cell, workers, &f);
        out.push(fold_cell(cell, kind, outcomes));
    }
    #[cfg(feature = "std")]
    let elapsed = start.elapsed();
    #[cfg(not(feature = "std"))]
    let elapsed = Duration::ZERO;
    Ok(StudyResult { cells: out, elapsed })
}

fn ci_methods(cfg: &StudyConfig) -> Result<Vec<StudyMethod>> {
    let picked: Vec<StudyMethod> = cfg
        .methods
        .iter()
        .copied()
        .filter(|m| matches!(m, StudyMethod::Ci(_)))
        .collect();
    if picked.is_empty() {
        return Err(Error::InvalidParameter(
            "coverage study needs at least one interval method".into(),
        ));
    }
    Ok(picked)
}

fn grouped_methods(cfg: &StudyConfig) -> Result<Vec<StudyMethod>> {
    let picked: Vec<StudyMethod> = cfg
        .methods
        .iter()
        .copied()
        .filter(|m| matches!(m, StudyMethod::Grouped(_)))
        .collect();
    if picked.is_empty() {
        return Err(Error::InvalidParameter(
            "grouped study needs at least one grouped method".into(),
        ));
    }
    Ok(picked)
}

/// Coverage study of the complete-data interval constructions.
pub fn run_coverage_study(cfg: &StudyConfig) -> Result<StudyResult> {
    run_coverage_study_with_workers(cfg, 1)
}

/// Like [`run_coverage_study`] with explicit worker count; results are
/// bit-identical for any count.
pub fn run_coverage_study_with_workers(cfg: &StudyConfig, workers: usize) -> Result<StudyResult> {
    let methods = ci_methods(cfg)?;
    run_study(cfg, &methods, StudyKind::Coverage, workers, coverage_replicate)
}

/// Bias/MSE study of the grouped estimators.
pub fn run_grouped_bias_study(cfg: &StudyConfig) -> Result<StudyResult> {
    run_grouped_bias_study_with_workers(cfg, 1)
}

pub fn run_grouped_bias_study_with_workers(cfg: &StudyConfig, workers: usize) -> Result<StudyResult> {
    let methods = grouped_methods(cfg)?;
    run_study(cfg, &methods, StudyKind::Bias, workers, bias_replicate)
}

/// Coverage study of the grouped bootstrap intervals.
pub fn run_grouped_coverage_study(cfg: &StudyConfig) -> Result<StudyResult> {
    run_grouped_coverage_study_with_workers(cfg, 1)
}

pub fn run_grouped_coverage_study_with_workers(
    cfg: &StudyConfig,
    workers: usize,
) -> Result<StudyResult> {
    let methods = grouped_methods(cfg)?;
    run_study(cfg, &methods, StudyKind::Coverage, workers, grouped_coverage_replicate)
}
